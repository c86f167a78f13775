#pragma once

// Rational functions whose denominators are products of powers of linear
// forms, plus the quasipolynomial algebra P(k,x)·e^(k,x) and the expansions
// (restriction, normal-direction Laurent series) used by the locus and
// Baker-Akhiezer modules.

#include <algorithm>
#include <random>
#include <stdexcept>
#include <utility>

#include "locuslab/poly.hpp"

namespace locuslab {

enum class Block { X, K };

inline int block_base(Block b, const VarSpace& sp) { return b == Block::K ? sp.nx : 0; }
inline int block_size(Block b, const VarSpace& sp) { return b == Block::K ? sp.nk : sp.nx; }

// offset + sum_i coeff[i] * v_i over one variable block
struct LinearForm {
    Block block = Block::X;
    std::vector<TowerScalar> coeff;
    TowerScalar offset;

    LinearForm() = default;
    LinearForm(Block b, std::vector<TowerScalar> c, TowerScalar off = TowerScalar())
        : block(b), coeff(std::move(c)), offset(std::move(off)) {}

    bool is_zero() const {
        if (!offset.is_zero()) return false;
        for (auto& c : coeff)
            if (!c.is_zero()) return false;
        return true;
    }

    int first_nonzero() const {
        for (int i = 0; i < (int)coeff.size(); ++i)
            if (!coeff[i].is_zero()) return i;
        return -1;
    }
    int last_nonzero() const {
        for (int i = (int)coeff.size() - 1; i >= 0; --i)
            if (!coeff[i].is_zero()) return i;
        return -1;
    }

    // (alpha, alpha) for the coefficient vector, complex-bilinear
    TowerScalar norm2() const {
        TowerScalar s;
        for (auto& c : coeff) s = s + c * c;
        return s;
    }

    // scale so the first nonzero coefficient is 1; returns (form, scale) with
    // original = scale * form
    std::pair<LinearForm, TowerScalar> normalized() const {
        int p = first_nonzero();
        if (p < 0) throw std::domain_error("LinearForm: zero normal");
        TowerScalar s = coeff[p];
        TowerScalar inv = s.inverse();
        LinearForm f = *this;
        for (auto& c : f.coeff) c = c * inv;
        f.offset = f.offset * inv;
        return {std::move(f), std::move(s)};
    }

    MultiPoly to_poly(const VarSpace& sp) const {
        MultiPoly p = MultiPoly::constant(sp.total(), offset);
        int base = block_base(block, sp);
        for (int i = 0; i < (int)coeff.size(); ++i)
            if (!coeff[i].is_zero())
                p.add_term([&] {
                    Exps e(sp.total(), 0);
                    e[base + i] = 1;
                    return e;
                }(), coeff[i]);
        return p;
    }

    TowerScalar eval(const std::vector<TowerScalar>& point, const VarSpace& sp) const {
        TowerScalar v = offset;
        int base = block_base(block, sp);
        for (int i = 0; i < (int)coeff.size(); ++i) v = v + coeff[i] * point[base + i];
        return v;
    }

    bool operator<(const LinearForm& o) const {
        if (block != o.block) return block < o.block;
        if (coeff.size() != o.coeff.size()) return coeff.size() < o.coeff.size();
        for (size_t i = 0; i < coeff.size(); ++i) {
            if (coeff[i] < o.coeff[i]) return true;
            if (o.coeff[i] < coeff[i]) return false;
        }
        return offset < o.offset;
    }
    bool operator==(const LinearForm& o) const {
        return block == o.block && coeff == o.coeff && offset == o.offset;
    }

    std::string str(const VarSpace& sp) const {
        return to_poly(sp).str(xk_names(sp));
    }
};

inline TowerScalar dot(const std::vector<TowerScalar>& a, const std::vector<TowerScalar>& b) {
    TowerScalar s;
    for (size_t i = 0; i < a.size(); ++i) s = s + a[i] * b[i];
    return s;
}

namespace detail {

// exact division of f by a normalized linear form; quotient written to *out
inline bool try_divide(const MultiPoly& f, const LinearForm& h, const VarSpace& sp,
                       MultiPoly* out) {
    int p = h.first_nonzero();
    int gp = block_base(h.block, sp) + p;
    TowerScalar inv = h.coeff[p].inverse();
    MultiPoly lpoly = h.to_poly(sp);
    MultiPoly rem = f, q(sp.total());
    while (true) {
        int d = rem.degree_in_var(gp);
        if (d <= 0) break;
        MultiPoly lead = rem.coefficient_of(gp, d);
        MultiPoly qt(sp.total());
        for (auto& [e, c] : lead.terms()) {
            Exps e2 = e;
            e2[gp] = d - 1;
            qt.add_term(e2, c * inv);
        }
        q = q + qt;
        rem = rem - qt * lpoly;
    }
    if (!rem.is_zero()) return false;
    *out = q;
    return true;
}

}  // namespace detail

class RationalFn {
public:
    RationalFn() = default;
    explicit RationalFn(VarSpace sp) : sp_(sp), num_(sp.total()) {}

    static RationalFn from_poly(VarSpace sp, MultiPoly p) {
        RationalFn r(sp);
        r.num_ = std::move(p);
        return r;
    }
    static RationalFn constant(VarSpace sp, TowerScalar c) {
        return from_poly(sp, MultiPoly::constant(sp.total(), std::move(c)));
    }
    static RationalFn variable(VarSpace sp, int global_idx) {
        return from_poly(sp, MultiPoly::variable(sp.total(), global_idx));
    }

    const VarSpace& space() const { return sp_; }
    const MultiPoly& num() const { return num_; }
    const std::vector<std::pair<LinearForm, int>>& den() const { return den_; }
    bool is_poly() const { return den_.empty(); }
    bool is_zero() const { return num_.is_zero(); }

    // multiply by 1 / h^power (h need not be normalized)
    RationalFn& divide_by_form(const LinearForm& h, int power) {
        auto [f, scale] = h.normalized();
        TowerScalar inv = scale.inverse();
        TowerScalar fac(1L);
        for (int i = 0; i < power; ++i) fac = fac * inv;
        num_ = num_ * fac;
        insert_form(f, power);
        reduce();
        return *this;
    }

    RationalFn operator-() const {
        RationalFn r = *this;
        r.num_ = -r.num_;
        return r;
    }
    RationalFn operator+(const RationalFn& o) const {
        RationalFn r(sp_);
        // union denominator with maximal powers
        std::vector<std::pair<LinearForm, int>> all;
        size_t i = 0, j = 0;
        while (i < den_.size() || j < o.den_.size()) {
            if (j == o.den_.size() || (i < den_.size() && den_[i].first < o.den_[j].first))
                all.push_back(den_[i++]);
            else if (i == den_.size() || o.den_[j].first < den_[i].first)
                all.push_back(o.den_[j++]);
            else {
                all.emplace_back(den_[i].first, std::max(den_[i].second, o.den_[j].second));
                ++i, ++j;
            }
        }
        MultiPoly a = num_, b = o.num_;
        for (auto& [f, p] : all) {
            MultiPoly fp = f.to_poly(sp_);
            int pa = power_of(f), pb = o.power_of(f);
            for (int t = 0; t < p - pa; ++t) a = a * fp;
            for (int t = 0; t < p - pb; ++t) b = b * fp;
        }
        r.num_ = a + b;
        r.den_ = std::move(all);
        r.reduce();
        return r;
    }
    RationalFn operator-(const RationalFn& o) const { return *this + (-o); }
    RationalFn operator*(const RationalFn& o) const {
        RationalFn r(sp_);
        r.num_ = num_ * o.num_;
        r.den_ = den_;
        for (auto& [f, p] : o.den_) r.insert_form(f, p);
        r.reduce();
        return r;
    }
    RationalFn operator*(const TowerScalar& s) const {
        RationalFn r = *this;
        r.num_ = r.num_ * s;
        if (s.is_zero()) r.den_.clear();
        return r;
    }
    bool operator==(const RationalFn& o) const { return (*this - o).is_zero(); }

    RationalFn derivative(int gv) const {
        // (N / prod l_i^{p_i})' = [N' prod l_i - N sum p_i c_{i,v} prod_{j != i} l_j]
        //                         / prod l_i^{p_i + 1}
        RationalFn r(sp_);
        MultiPoly top = num_.derivative(gv);
        for (auto& [f, p] : den_) top = top * f.to_poly(sp_);
        for (size_t i = 0; i < den_.size(); ++i) {
            auto& [fi, pi] = den_[i];
            int base = block_base(fi.block, sp_);
            int local = gv - base;
            if (local < 0 || local >= (int)fi.coeff.size()) continue;
            const TowerScalar& cv = fi.coeff[local];
            if (cv.is_zero()) continue;
            MultiPoly t = num_ * (cv * TowerScalar(long(-pi)));
            for (size_t j = 0; j < den_.size(); ++j)
                if (j != i) t = t * den_[j].first.to_poly(sp_);
            top = top + t;
        }
        r.num_ = std::move(top);
        for (auto& [f, p] : den_) r.den_.emplace_back(f, p + 1);
        r.reduce();
        return r;
    }

    TowerScalar eval(const std::vector<TowerScalar>& point) const {
        TowerScalar d(1L);
        for (auto& [f, p] : den_) {
            TowerScalar v = f.eval(point, sp_);
            if (v.is_zero()) throw std::domain_error("RationalFn::eval: pole");
            for (int t = 0; t < p; ++t) d = d * v;
        }
        return num_.eval(point) * d.inverse();
    }

    bool denominator_vanishes_at(const std::vector<TowerScalar>& point) const {
        for (auto& [f, p] : den_)
            if (f.eval(point, sp_).is_zero()) return true;
        return false;
    }

    // substitute var g -> images[g] (a polynomial over new_sp); every
    // denominator form must stay affine within a single block
    RationalFn substitute(const std::vector<MultiPoly>& images, VarSpace new_sp) const {
        RationalFn r = from_poly(new_sp, num_.substitute(images, new_sp.total()));
        for (auto& [f, p] : den_) {
            int base = block_base(f.block, sp_);
            MultiPoly fp = MultiPoly::constant(new_sp.total(), f.offset);
            for (int i = 0; i < (int)f.coeff.size(); ++i)
                if (!f.coeff[i].is_zero()) fp = fp + images[base + i] * f.coeff[i];
            r.divide_by_image(fp, p, new_sp);
        }
        return r;
    }

    int total_degree_bound() const {
        int d = std::max(0, num_.total_degree());
        for (auto& [f, p] : den_) d += p;
        return d;
    }

    std::string str() const {
        std::string n = num_.str(xk_names(sp_));
        if (den_.empty()) return n;
        std::string d;
        for (auto& [f, p] : den_) {
            if (!d.empty()) d += "*";
            d += "(" + f.str(sp_) + ")";
            if (p > 1) d += "^" + std::to_string(p);
        }
        bool paren = n.find(' ') != std::string::npos;
        return (paren ? "(" + n + ")" : n) + " / " + d;
    }

private:
    VarSpace sp_;
    MultiPoly num_;
    std::vector<std::pair<LinearForm, int>> den_;  // normalized forms, sorted

    int power_of(const LinearForm& f) const {
        for (auto& [g, p] : den_)
            if (g == f) return p;
        return 0;
    }
    void insert_form(const LinearForm& f, int power) {
        auto it = std::lower_bound(den_.begin(), den_.end(), f,
                                   [](const auto& a, const LinearForm& b) { return a.first < b; });
        if (it != den_.end() && it->first == f) it->second += power;
        else den_.insert(it, {f, power});
    }
    void divide_by_image(const MultiPoly& fp, int power, const VarSpace& nsp) {
        if (fp.total_degree() > 1)
            throw std::logic_error("RationalFn::substitute: denominator image not affine");
        if (fp.is_zero())
            throw std::domain_error("RationalFn::substitute: denominator vanishes identically");
        // extract block + coefficients
        TowerScalar off;
        Block blk = Block::X;
        bool have_var = false;
        std::vector<TowerScalar> cx(nsp.nx), ck(nsp.nk);
        for (auto& [e, c] : fp.terms()) {
            int v = -1;
            for (int i = 0; i < (int)e.size(); ++i)
                if (e[i]) v = i;
            if (v < 0) { off = c; continue; }
            Block b = v < nsp.nx ? Block::X : Block::K;
            if (have_var && b != blk)
                throw std::logic_error("RationalFn::substitute: form image spans both blocks");
            blk = b;
            have_var = true;
            (b == Block::X ? cx[v] : ck[v - nsp.nx]) = c;
        }
        if (!have_var) {
            // constant, nonzero: absorb
            TowerScalar inv = off.inverse(), fac(1L);
            for (int i = 0; i < power; ++i) fac = fac * inv;
            num_ = num_ * fac;
            return;
        }
        LinearForm nf(blk, blk == Block::X ? std::move(cx) : std::move(ck), std::move(off));
        auto [g, scale] = nf.normalized();
        TowerScalar inv = scale.inverse(), fac(1L);
        for (int i = 0; i < power; ++i) fac = fac * inv;
        num_ = num_ * fac;
        insert_form(g, power);
        reduce();
    }
    void reduce() {
        if (num_.is_zero()) {
            den_.clear();
            return;
        }
        for (auto it = den_.begin(); it != den_.end();) {
            MultiPoly q(sp_.total());
            while (it->second > 0 && detail::try_divide(num_, it->first, sp_, &q)) {
                num_ = q;
                --it->second;
            }
            if (it->second == 0) it = den_.erase(it);
            else ++it;
        }
    }
};

// ---- zero testing -----------------------------------------------------

struct ZeroCertificate {
    bool zero = false;
    std::string mode;    // "exact" | "probabilistic"
    std::string detail;  // human-readable evidence
};

inline bool is_zero_exact(const RationalFn& f) { return f.is_zero(); }

inline ZeroCertificate is_zero(const RationalFn& f, const std::string& mode,
                               std::uint64_t seed = 0) {
    if (mode == "exact")
        return {is_zero_exact(f), "exact", "canonical numerator form"};
    if (mode != "probabilistic") throw std::invalid_argument("is_zero: unknown mode");

    std::mt19937_64 rng(seed ? seed : 0x10c05u);
    int deg = f.total_degree_bound();
    long B = 101 + 50L * (deg + 1);  // sample set well beyond the degree bound
    std::uniform_int_distribution<long> pick(-B, B);
    int nv = f.space().total();
    int trials = 3, hits = 0;
    for (int t = 0; t < trials; ++t) {
        for (int attempt = 0;; ++attempt) {
            if (attempt > 64) throw std::runtime_error("is_zero: could not avoid poles");
            std::vector<TowerScalar> pt;
            pt.reserve(nv);
            for (int v = 0; v < nv; ++v)
                pt.emplace_back(Rational(pick(rng), 1 + (std::uint64_t)rng() % 7));
            if (f.denominator_vanishes_at(pt)) continue;
            if (!f.eval(pt).is_zero())
                return {false, "probabilistic", "nonzero at a random rational point"};
            ++hits;
            break;
        }
    }
    std::string d = std::to_string(trials) + " random points over [-" + std::to_string(B) +
                    "," + std::to_string(B) + "], degree bound " + std::to_string(deg);
    (void)hits;
    return {true, "probabilistic", d};
}

// ---- restriction and Laurent expansion --------------------------------

namespace detail {

struct HyperplaneFrame {
    int pivot_local;       // pivot coordinate within h's block
    int pivot_global;      // same, as a global variable index
    VarSpace restricted;   // variable space after removing the pivot block coord
};

inline HyperplaneFrame frame_of(const LinearForm& h, const VarSpace& sp) {
    if (h.norm2().is_zero())
        throw std::domain_error("isotropic hyperplane normal");
    int p = h.last_nonzero();
    HyperplaneFrame fr;
    fr.pivot_local = p;
    fr.pivot_global = block_base(h.block, sp) + p;
    fr.restricted = sp;
    (h.block == Block::X ? fr.restricted.nx : fr.restricted.nk) -= 1;
    return fr;
}

// images of the old variables in the restricted space, with the pivot
// coordinate solved from h = 0
inline std::vector<MultiPoly> restriction_images(const LinearForm& h, const VarSpace& sp,
                                                 const HyperplaneFrame& fr) {
    int nt = fr.restricted.total();
    TowerScalar cp_inv = h.coeff[fr.pivot_local].inverse();
    auto new_index = [&](int g) { return g < fr.pivot_global ? g : g - 1; };
    std::vector<MultiPoly> images;
    images.reserve(sp.total());
    int base = block_base(h.block, sp);
    for (int g = 0; g < sp.total(); ++g) {
        if (g != fr.pivot_global) {
            images.push_back(MultiPoly::variable(nt, new_index(g)));
            continue;
        }
        MultiPoly img = MultiPoly::constant(nt, -h.offset * cp_inv);
        for (int q = 0; q < (int)h.coeff.size(); ++q) {
            if (q == fr.pivot_local || h.coeff[q].is_zero()) continue;
            img.add_term([&] {
                Exps e(nt, 0);
                e[new_index(base + q)] = 1;
                return e;
            }(), -h.coeff[q] * cp_inv);
        }
        images.push_back(std::move(img));
    }
    return images;
}

}  // namespace detail

// substitute the deterministic affine parametrization of {h = 0}; the result
// lives in a space with one fewer variable in h's block
inline RationalFn restrict_to_hyperplane(const RationalFn& f, const LinearForm& h) {
    auto fr = detail::frame_of(h, f.space());
    return f.substitute(detail::restriction_images(h, f.space(), fr), fr.restricted);
}

struct LaurentExpansion {
    int ord = 0;                    // leading exponent is -ord
    std::vector<RationalFn> coeffs;  // c_{-ord} .. c_{-ord + depth}, restricted space

    const RationalFn& coefficient(int s) const {
        int idx = s + ord;
        if (idx < 0 || idx >= (int)coeffs.size())
            throw std::out_of_range("LaurentExpansion: coefficient outside computed window");
        return coeffs[idx];
    }
    bool has(int s) const { return s + ord >= 0 && s + ord < (int)coeffs.size(); }
};

// coefficients of f along x = x0 + s*alpha/(alpha,alpha) + tangential part,
// in powers of s = (alpha,x) + c
inline LaurentExpansion laurent_normal_expansion(const RationalFn& f, const LinearForm& h,
                                                 int depth) {
    const VarSpace sp = f.space();
    auto fr = detail::frame_of(h, sp);
    TowerScalar aa = h.norm2();
    TowerScalar aa_inv = aa.inverse();
    int gp = fr.pivot_global;
    int base = block_base(h.block, sp);
    int nt = sp.total();

    // same-space substitution: slot gp holds s, the other block slots hold
    // the tangential parameters
    TowerScalar cp_inv = h.coeff[fr.pivot_local].inverse();
    std::vector<MultiPoly> images;
    images.reserve(nt);
    for (int g = 0; g < nt; ++g) {
        int local = g - base;
        bool in_block = local >= 0 && local < (int)h.coeff.size();
        if (!in_block) {
            images.push_back(MultiPoly::variable(nt, g));
            continue;
        }
        if (g != gp) {
            MultiPoly img = MultiPoly::variable(nt, g);
            img.add_term([&] {
                Exps e(nt, 0);
                e[gp] = 1;
                return e;
            }(), h.coeff[local] * aa_inv);
            images.push_back(std::move(img));
            continue;
        }
        MultiPoly img = MultiPoly::constant(nt, -h.offset * cp_inv);
        for (int q = 0; q < (int)h.coeff.size(); ++q) {
            if (q == fr.pivot_local || h.coeff[q].is_zero()) continue;
            img.add_term([&] {
                Exps e(nt, 0);
                e[base + q] = 1;
                return e;
            }(), -h.coeff[q] * cp_inv);
        }
        img.add_term([&] {
            Exps e(nt, 0);
            e[gp] = 1;
            return e;
        }(), h.coeff[fr.pivot_local] * aa_inv);
        images.push_back(std::move(img));
    }

    MultiPoly num_sub = f.num().substitute(images, nt);

    // classify substituted denominator forms by their restriction to s = 0
    int P = 0;                 // total order of the pole factor s^P
    TowerScalar prop_fac(1L);  // product of c^{-p} over proportional forms
    struct Regular {
        LinearForm l0;         // may have zero coefficients (pure offset)
        TowerScalar c;         // s-coefficient
        int power;
    };
    std::vector<Regular> regular;
    for (auto& [form, power] : f.den()) {
        int fbase = block_base(form.block, sp);
        MultiPoly fp = MultiPoly::constant(nt, form.offset);
        for (int i = 0; i < (int)form.coeff.size(); ++i)
            if (!form.coeff[i].is_zero()) fp = fp + images[fbase + i] * form.coeff[i];
        // split off the s (= slot gp) coefficient
        TowerScalar cs;
        LinearForm l0(form.block, std::vector<TowerScalar>(block_size(form.block, sp)));
        bool l0_zero = true;
        for (auto& [e, c] : fp.terms()) {
            int v = -1;
            for (int i = 0; i < (int)e.size(); ++i)
                if (e[i]) v = i;
            if (v == gp) { cs = c; continue; }
            if (v < 0) l0.offset = c;
            else l0.coeff[v - block_base(form.block, sp)] = c;
            l0_zero = false;
        }
        if (l0_zero || l0.is_zero()) {
            if (cs.is_zero())
                throw std::domain_error("laurent_normal_expansion: denominator vanishes");
            P += power;
            TowerScalar inv = cs.inverse();
            for (int t = 0; t < power; ++t) prop_fac = prop_fac * inv;
        } else {
            regular.push_back({std::move(l0), std::move(cs), power});
        }
    }

    // series in s with RationalFn coefficients (variable gp unused in them)
    auto compute_series = [&](int K) {
        std::vector<RationalFn> S(K + 1, RationalFn(sp));
        for (int j = 0; j <= K; ++j)
            S[j] = RationalFn::from_poly(sp, num_sub.coefficient_of(gp, j) * prop_fac);
        for (auto& reg : regular) {
            // 1/(l0 + c s)^p = l0^{-p} sum_j binom(p+j-1, j) (-c/l0)^j s^j
            RationalFn inv_l0(sp);
            if (reg.l0.first_nonzero() < 0)
                inv_l0 = RationalFn::constant(sp, reg.l0.offset.inverse());
            else
                inv_l0 = RationalFn::constant(sp, TowerScalar(1L)).divide_by_form(reg.l0, 1);
            std::vector<RationalFn> E(K + 1, RationalFn(sp));
            RationalFn term = RationalFn::constant(sp, TowerScalar(1L));
            for (int t = 0; t < reg.power; ++t) term = term * inv_l0;
            Rational binom(1);
            RationalFn ratio = inv_l0 * (-reg.c);
            for (int j = 0; j <= K; ++j) {
                E[j] = term * TowerScalar(binom);
                term = term * ratio;
                binom = binom * (reg.power + j) / (j + 1);
            }
            std::vector<RationalFn> R(K + 1, RationalFn(sp));
            for (int a = 0; a <= K; ++a) {
                if (S[a].is_zero()) continue;
                for (int b = 0; a + b <= K; ++b) R[a + b] = R[a + b] + S[a] * E[b];
            }
            S = std::move(R);
        }
        return S;
    };

    // widen the window until a leading term appears (the function may vanish
    // to high order on the hyperplane)
    int K = 2 * P + depth;
    std::vector<RationalFn> S = compute_series(K);
    int first = 0;
    while (first <= K && S[first].is_zero()) ++first;
    while (first > K && !num_sub.is_zero()) {
        K = 2 * K + 4;
        S = compute_series(K);
        while (first <= K && S[first].is_zero()) ++first;
    }
    if (first <= K && first + depth > K) {
        K = first + depth;
        S = compute_series(K);
    }

    // compress coefficients into the restricted space and trim leading zeros
    auto drop = [&](const RationalFn& g) {
        std::vector<MultiPoly> imgs;
        imgs.reserve(nt);
        int nr = fr.restricted.total();
        for (int v = 0; v < nt; ++v) {
            if (v == gp) imgs.push_back(MultiPoly(nr));  // unused
            else imgs.push_back(MultiPoly::variable(nr, v < gp ? v : v - 1));
        }
        return g.substitute(imgs, fr.restricted);
    };

    LaurentExpansion out;
    if (first > K) {  // f is identically zero
        out.ord = 0;
        out.coeffs.assign(depth + 1, RationalFn(fr.restricted));
        return out;
    }
    out.ord = P - first;
    for (int j = first; j <= K && j - first <= depth; ++j) out.coeffs.push_back(drop(S[j]));
    while ((int)out.coeffs.size() <= depth) out.coeffs.push_back(RationalFn(fr.restricted));
    return out;
}

// ---- quasipolynomials --------------------------------------------------

// prefactor * e^{(k,x)}; the space must have nx == nk
struct QuasiPoly {
    RationalFn pre;

    explicit QuasiPoly(RationalFn p) : pre(std::move(p)) {}
    bool is_zero() const { return pre.is_zero(); }
};

// (-Delta_x + u + (k,k)) [P e^{(k,x)}]  =  (-Delta_x P - 2(k, grad_x P) + u P) e^{(k,x)}
inline QuasiPoly apply_L_plus_k2(const QuasiPoly& phi, const RationalFn& u) {
    const VarSpace sp = phi.pre.space();
    if (sp.nx != sp.nk) throw std::logic_error("apply_L_plus_k2: need matching x/k blocks");
    RationalFn out = phi.pre * u;
    for (int i = 0; i < sp.nx; ++i) {
        RationalFn di = phi.pre.derivative(i);
        out = out - di.derivative(i);
        out = out - RationalFn::variable(sp, sp.nx + i) * di * TowerScalar(2L);
    }
    return QuasiPoly(std::move(out));
}

}  // namespace locuslab
