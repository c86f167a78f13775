#pragma once

// Sparse multivariate polynomials over TowerScalar.
//
// Variable layout convention used throughout the library: a VarSpace has nx
// "x-block" variables followed by nk "k-block" variables. Polynomials carry
// only the total variable count; block boundaries are supplied by callers.

#include <algorithm>
#include <functional>
#include <map>
#include <utility>
#include <string>
#include <vector>

#include "locuslab/scalar.hpp"

namespace locuslab {

struct VarSpace {
    int nx = 0;
    int nk = 0;
    int total() const { return nx + nk; }
};

using Exps = std::vector<int>;

class MultiPoly {
public:
    using Terms = std::map<Exps, TowerScalar>;

    MultiPoly() = default;
    explicit MultiPoly(int nvars) : nvars_(nvars) {}

    static MultiPoly constant(int nvars, TowerScalar c) {
        MultiPoly p(nvars);
        if (!c.is_zero()) p.terms_[Exps(nvars, 0)] = std::move(c);
        return p;
    }
    static MultiPoly variable(int nvars, int i, TowerScalar c = TowerScalar(1)) {
        MultiPoly p(nvars);
        if (!c.is_zero()) {
            Exps e(nvars, 0);
            e[i] = 1;
            p.terms_[e] = std::move(c);
        }
        return p;
    }

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    const Terms& terms() const { return terms_; }

    void set(const Exps& e, TowerScalar c) {
        if (c.is_zero()) terms_.erase(e);
        else terms_[e] = std::move(c);
    }
    void add_term(const Exps& e, const TowerScalar& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) terms_[e] = c;
        else {
            it->second.add_in_place(c);
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    MultiPoly operator-() const {
        MultiPoly r(nvars_);
        for (auto& [e, c] : terms_) r.terms_.emplace_hint(r.terms_.end(), e, -c);
        return r;
    }
    MultiPoly operator+(const MultiPoly& o) const {
        MultiPoly r = *this;
        for (auto& [e, c] : o.terms_) r.add_term(e, c);
        return r;
    }
    MultiPoly operator-(const MultiPoly& o) const { return *this + (-o); }
    MultiPoly operator*(const MultiPoly& o) const {
        // shifting the exponent vectors of the larger factor by one term of
        // the smaller factor yields one sorted stream per small term; a k-way
        // heap merge then emits result terms in order, so the result map is
        // built append-only with no tree searches
        const MultiPoly* big = this;
        const MultiPoly* small = &o;
        if (big->terms_.size() < small->terms_.size()) std::swap(big, small);
        MultiPoly r(nvars_);
        if (small->terms_.empty() || big->terms_.empty()) return r;
        std::vector<Terms::const_iterator> sterm;
        sterm.reserve(small->terms_.size());
        for (auto it = small->terms_.begin(); it != small->terms_.end(); ++it)
            sterm.push_back(it);
        std::vector<Terms::const_iterator> bpos(sterm.size(), big->terms_.begin());
        auto shifted = [&](int i) {
            Exps e = bpos[i]->first;
            const Exps& s = sterm[i]->first;
            for (int v = 0; v < nvars_; ++v) e[v] += s[v];
            return e;
        };
        using HeapEntry = std::pair<Exps, int>;
        auto later = [](const HeapEntry& a, const HeapEntry& b) { return a.first > b.first; };
        std::vector<HeapEntry> heap;
        heap.reserve(sterm.size());
        for (int i = 0; i < (int)sterm.size(); ++i) heap.emplace_back(shifted(i), i);
        std::make_heap(heap.begin(), heap.end(), later);
        Exps cur;
        TowerScalar acc;
        bool have = false;
        while (!heap.empty()) {
            std::pop_heap(heap.begin(), heap.end(), later);
            auto [key, i] = std::move(heap.back());
            heap.pop_back();
            TowerScalar prod = bpos[i]->second * sterm[i]->second;
            if (have && key == cur) {
                acc.add_in_place(prod);
            } else {
                if (have && !acc.is_zero())
                    r.terms_.emplace_hint(r.terms_.end(), std::move(cur), std::move(acc));
                cur = std::move(key);
                acc = std::move(prod);
                have = true;
            }
            ++bpos[i];
            if (bpos[i] != big->terms_.end()) {
                heap.emplace_back(shifted(i), i);
                std::push_heap(heap.begin(), heap.end(), later);
            }
        }
        if (have && !acc.is_zero())
            r.terms_.emplace_hint(r.terms_.end(), std::move(cur), std::move(acc));
        return r;
    }
    MultiPoly operator*(const TowerScalar& s) const {
        MultiPoly r(nvars_);
        if (s.is_zero()) return r;
        for (auto& [e, c] : terms_) r.terms_.emplace_hint(r.terms_.end(), e, c * s);
        return r;
    }

    bool operator==(const MultiPoly& o) const { return terms_ == o.terms_; }

    MultiPoly derivative(int v) const {
        MultiPoly r(nvars_);
        for (auto& [e, c] : terms_) {
            if (e[v] == 0) continue;
            Exps e2 = e;
            e2[v] -= 1;
            r.add_term(e2, c * TowerScalar(long(e[v])));
        }
        return r;
    }

    int total_degree() const {
        int d = -1;
        for (auto& [e, c] : terms_) {
            int s = 0;
            for (int x : e) s += x;
            if (s > d) d = s;
        }
        return d;  // -1 for zero
    }

    int degree_in_range(int lo, int hi) const {  // [lo, hi)
        int d = -1;
        for (auto& [e, c] : terms_) {
            int s = 0;
            for (int i = lo; i < hi; ++i) s += e[i];
            if (s > d) d = s;
        }
        return d;
    }

    int degree_in_var(int v) const {
        int d = -1;
        for (auto& [e, c] : terms_)
            if (e[v] > d) d = e[v];
        return d;
    }

    // split by total degree over variables [lo, hi)
    std::map<int, MultiPoly> homogeneous_components(int lo, int hi) const {
        std::map<int, MultiPoly> out;
        for (auto& [e, c] : terms_) {
            int s = 0;
            for (int i = lo; i < hi; ++i) s += e[i];
            auto it = out.find(s);
            if (it == out.end()) it = out.emplace(s, MultiPoly(nvars_)).first;
            it->second.terms_[e] = c;
        }
        return out;
    }

    // substitute each variable by a polynomial over a new space
    MultiPoly substitute(const std::vector<MultiPoly>& images, int new_nvars) const {
        // cache powers of images
        std::vector<std::vector<MultiPoly>> powers(nvars_);
        for (int v = 0; v < nvars_; ++v)
            powers[v].push_back(MultiPoly::constant(new_nvars, TowerScalar(1)));
        MultiPoly r(new_nvars);
        for (auto& [e, c] : terms_) {
            MultiPoly t = MultiPoly::constant(new_nvars, c);
            for (int v = 0; v < nvars_; ++v) {
                while ((int)powers[v].size() <= e[v])
                    powers[v].push_back(powers[v].back() * images[v]);
                if (e[v] > 0) t = t * powers[v][e[v]];
            }
            r = r + t;
        }
        return r;
    }

    TowerScalar eval(const std::vector<TowerScalar>& point) const {
        TowerScalar r;
        for (auto& [e, c] : terms_) {
            TowerScalar t = c;
            for (int v = 0; v < nvars_; ++v)
                for (int j = 0; j < e[v]; ++j) t = t * point[v];
            r = r + t;
        }
        return r;
    }

    // leading coefficient viewed as univariate in variable v
    MultiPoly coefficient_of(int v, int power) const {
        MultiPoly r(nvars_);
        for (auto& [e, c] : terms_) {
            if (e[v] != power) continue;
            Exps e2 = e;
            e2[v] = 0;
            r.terms_[e2] = c;
        }
        return r;
    }

    std::string str(const std::function<std::string(int)>& name) const {
        if (terms_.empty()) return "0";
        std::string out;
        for (auto& [e, c] : terms_) {
            std::string mono;
            for (int v = 0; v < nvars_; ++v) {
                if (e[v] == 0) continue;
                if (!mono.empty()) mono += "*";
                mono += name(v);
                if (e[v] > 1) mono += "^" + std::to_string(e[v]);
            }
            std::string cs = c.str();
            bool needs_paren = cs.find(' ') != std::string::npos;
            bool neg = !needs_paren && cs.size() > 1 && cs[0] == '-';
            if (neg) cs = cs.substr(1);
            if (!out.empty()) out += neg ? " - " : " + ";
            else if (neg) out += "-";
            if (mono.empty()) out += needs_paren ? "(" + cs + ")" : cs;
            else if (cs == "1") out += mono;
            else out += (needs_paren ? "(" + cs + ")" : cs) + "*" + mono;
        }
        return out;
    }

private:
    int nvars_ = 0;
    Terms terms_;
};

// default variable namer for an (nx, nk) space: x1..xn then k1..km
inline std::function<std::string(int)> xk_names(const VarSpace& sp) {
    return [sp](int v) {
        if (v < sp.nx) return "x" + std::to_string(v + 1);
        return "k" + std::to_string(v - sp.nx + 1);
    };
}

}  // namespace locuslab
