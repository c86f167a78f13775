#pragma once

// Differential operators with rational-function coefficients, represented as
// finite tables multi-index -> coefficient. Composition and commutators go
// through the Leibniz rule; application to quasipolynomials P e^{(k,x)}
// shifts each derivative by the conjugate variable.

#include <map>

#include "locuslab/ratfn.hpp"

namespace locuslab {

namespace detail {
inline Rational multi_binomial_entry(int n, int k) {
    // binom(n, k) as a rational
    Rational b(1);
    for (int t = 0; t < k; ++t) b = b * (n - t) / (t + 1);
    return b;
}
}  // namespace detail

// sum_mu  coeff_mu(x,k) * d^mu, derivatives taken in `block`
struct DiffOperator {
    VarSpace sp;
    Block block = Block::X;
    std::map<Exps, RationalFn> terms;  // mu has length block_size(block, sp)

    explicit DiffOperator(VarSpace s, Block b = Block::X) : sp(s), block(b) {}

    int nderiv() const { return block_size(block, sp); }

    void add_term(const Exps& mu, const RationalFn& c) {
        if (c.is_zero()) return;
        auto it = terms.find(mu);
        if (it == terms.end()) terms.emplace(mu, c);
        else {
            it->second = it->second + c;
            if (it->second.is_zero()) terms.erase(it);
        }
    }

    bool is_zero() const { return terms.empty(); }
    int order() const {
        int d = 0;
        for (auto& [mu, c] : terms) {
            int s = 0;
            for (int x : mu) s += x;
            d = std::max(d, s);
        }
        return d;
    }

    static DiffOperator multiplication(VarSpace sp, Block b, const RationalFn& f) {
        DiffOperator op(sp, b);
        op.add_term(Exps(block_size(b, sp), 0), f);
        return op;
    }

    DiffOperator operator+(const DiffOperator& o) const {
        DiffOperator r = *this;
        for (auto& [mu, c] : o.terms) r.add_term(mu, c);
        return r;
    }
    DiffOperator operator-() const {
        DiffOperator r(sp, block);
        for (auto& [mu, c] : terms) r.terms.emplace(mu, -c);
        return r;
    }
    DiffOperator operator-(const DiffOperator& o) const { return *this + (-o); }
    DiffOperator operator*(const TowerScalar& s) const {
        DiffOperator r(sp, block);
        if (s.is_zero()) return r;
        for (auto& [mu, c] : terms) r.terms.emplace(mu, c * s);
        return r;
    }

    RationalFn apply(const RationalFn& f) const {
        int base = block_base(block, sp);
        RationalFn out(sp);
        for (auto& [mu, c] : terms) {
            RationalFn g = f;
            for (int i = 0; i < nderiv(); ++i)
                for (int t = 0; t < mu[i]; ++t) g = g.derivative(base + i);
            out = out + c * g;
        }
        return out;
    }

    // Leibniz: d^mu (b g) = sum_{s <= mu} binom(mu, s) (d^{mu-s} b) d^s g
    DiffOperator compose(const DiffOperator& o) const {
        DiffOperator r(sp, block);
        int base = block_base(block, sp);
        int nd = nderiv();
        for (auto& [mu, a] : terms) {
            for (auto& [nu, b] : o.terms) {
                // enumerate s <= mu
                Exps s(nd, 0);
                while (true) {
                    Rational factor(1);
                    for (int i = 0; i < nd; ++i)
                        factor = factor * detail::multi_binomial_entry(mu[i], s[i]);
                    RationalFn db = b;
                    for (int i = 0; i < nd; ++i)
                        for (int t = 0; t < mu[i] - s[i]; ++t) db = db.derivative(base + i);
                    if (!db.is_zero()) {
                        Exps tot = s;
                        for (int i = 0; i < nd; ++i) tot[i] += nu[i];
                        r.add_term(tot, a * db * TowerScalar(factor));
                    }
                    int i = 0;
                    for (; i < nd; ++i) {
                        if (s[i] < mu[i]) { ++s[i]; break; }
                        s[i] = 0;
                    }
                    if (i == nd) break;
                }
            }
        }
        return r;
    }

    DiffOperator commutator(const DiffOperator& o) const {
        return compose(o) - o.compose(*this);
    }

    // apply to pre * e^{(v, w)} where v is this block and w the other:
    // each d_i becomes d_i + (conjugate variable i)
    RationalFn apply_to_quasi(const RationalFn& pre) const {
        if (sp.nx != sp.nk)
            throw std::logic_error("apply_to_quasi: need matching variable blocks");
        int base = block_base(block, sp);
        int conj = block == Block::X ? sp.nx : 0;
        int nd = nderiv();
        RationalFn out(sp);
        for (auto& [mu, c] : terms) {
            // (d + w)^mu pre = sum_{s <= mu} binom(mu, s) w^{mu-s} d^s pre
            Exps s(nd, 0);
            while (true) {
                Rational factor(1);
                for (int i = 0; i < nd; ++i)
                    factor = factor * detail::multi_binomial_entry(mu[i], s[i]);
                RationalFn g = pre;
                for (int i = 0; i < nd; ++i)
                    for (int t = 0; t < s[i]; ++t) g = g.derivative(base + i);
                if (!g.is_zero()) {
                    MultiPoly wpow = MultiPoly::constant(sp.total(), TowerScalar(factor));
                    for (int i = 0; i < nd; ++i)
                        for (int t = 0; t < mu[i] - s[i]; ++t)
                            wpow = wpow * MultiPoly::variable(sp.total(), conj + i);
                    out = out + c * g * RationalFn::from_poly(sp, wpow);
                }
                int i = 0;
                for (; i < nd; ++i) {
                    if (s[i] < mu[i]) { ++s[i]; break; }
                    s[i] = 0;
                }
                if (i == nd) break;
            }
        }
        return out;
    }
};

// L = -Delta + u with derivatives in `block`
inline DiffOperator schrodinger_operator(const RationalFn& u, Block block = Block::X) {
    VarSpace sp = u.space();
    DiffOperator L(sp, block);
    int nd = block_size(block, sp);
    for (int i = 0; i < nd; ++i) {
        Exps mu(nd, 0);
        mu[i] = 2;
        L.add_term(mu, RationalFn::constant(sp, TowerScalar(-1L)));
    }
    L.add_term(Exps(nd, 0), u);
    return L;
}

}  // namespace locuslab
