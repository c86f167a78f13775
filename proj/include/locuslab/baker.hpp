#pragma once

// Baker-Akhiezer functions: construction via the iterated (L + k^2) formula,
// the defining axioms, eigen/symmetry/bispectrality checks, quasi-invariants
// and the commuting operators obtained from the N-fold commutator formula.

#include "locuslab/config.hpp"
#include "locuslab/operators.hpp"

namespace locuslab {

// u(x) = sum_j m_j(m_j+1)(alpha_j,alpha_j) / ((alpha_j,x)+c_j)^2
inline RationalFn potential_from_config(const Configuration& c, VarSpace sp) {
    if (sp.nx != c.dimension)
        throw std::invalid_argument("potential_from_config: dimension mismatch");
    RationalFn u(sp);
    for (auto& h : c.hyperplanes) {
        TowerScalar coeff = TowerScalar(long(h.multiplicity) * (h.multiplicity + 1)) *
                            dot_vec(h.normal, h.normal);
        u = u + RationalFn::constant(sp, coeff)
                    .divide_by_form(LinearForm(Block::X, h.normal, h.offset), 2);
    }
    return u;
}

struct BAFunction {
    Configuration config;
    VarSpace sp;          // {n, n}
    int M = 0;            // total multiplicity
    MultiPoly A;          // prod (alpha,k)^{m_alpha}
    RationalFn prefactor; // psi = prefactor * e^{(k,x)}, normalized 1 + o(1)
};

struct NonTerminating : std::runtime_error {
    RationalFn excess;  // prefactor of phi_{M+1}

    explicit NonTerminating(RationalFn e)
        : std::runtime_error("iteration does not terminate after M steps: "
                             "not a locus configuration"),
          excess(std::move(e)) {}
};

inline LinearForm k_form(const Hyperplane& h) {
    return LinearForm(Block::K, h.normal);
}

namespace detail {

inline Int denominator_lcm(const TowerScalar& s) {
    Int l = 1;
    for (auto& [k, g] : s.terms()) {
        l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(g.re));
        l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(g.im));
    }
    return l;
}

// divide out the rational content (gcd of numerators over lcm of denominators
// across all coefficient components) and return it
inline Rational strip_content(MultiPoly& p) {
    Int g = 0, l = 1;
    for (auto& [mono, ts] : p.terms())
        for (auto& [key, gg] : ts.terms()) {
            g = gcd(g, boost::multiprecision::numerator(gg.re));
            g = gcd(g, boost::multiprecision::numerator(gg.im));
            l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(gg.re));
            l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(gg.im));
        }
    if (g < 0) g = -g;
    if (g == 0) return Rational(1);
    Rational content(g, l);
    if (content != 1) p = p * TowerScalar(Rational(1) / content);
    return content;
}

}  // namespace detail

inline BAFunction berest_psi(const Configuration& c) {
    int n = c.dimension;
    VarSpace sp{n, n};
    int K = (int)c.hyperplanes.size();

    // The iterate is kept as N / prod_a f_a^{e_a} with polynomial N; one
    // application of (L + k^2) to N/D e^{(k,x)} gives, over D F^2 with
    // F = prod_a f_a:
    //   C N - sum_i H_i - 2 sum_i k_i G_i F,
    // where G_i = dN/dx_i F - N sum_a e_a a_i F_a   (the gradient over D F),
    //       H_i = dG_i/dx_i F - G_i sum_a (e_a+1) a_i F_a,
    //       C   = sum_a m_a(m_a+1)(a,a) F_a^2,  F_a = F / f_a,
    // followed by a single exact-division sweep against the f_a.
    // Rescaling a single normal (with its offset) leaves psi unchanged: the
    // product of forms and A(k) pick up the same factor.  Clearing coefficient
    // denominators up front keeps every intermediate coefficient integral,
    // which makes the exact rational arithmetic far cheaper.
    std::vector<LinearForm> forms;
    Rational scale(1);  // prod_a lambda_a^{m_a}
    std::vector<TowerScalar> ca(K);
    for (int a = 0; a < K; ++a) {
        const Hyperplane& h = c.hyperplanes[a];
        Int lam = detail::denominator_lcm(h.offset);
        for (auto& t : h.normal)
            lam = boost::multiprecision::lcm(lam, detail::denominator_lcm(t));
        TowerScalar ls{Rational(lam)};
        Vec nrm = h.normal;
        for (auto& t : nrm) t = t * ls;
        forms.emplace_back(Block::X, std::move(nrm), h.offset * ls);
        for (int t = 0; t < h.multiplicity; ++t) scale *= Rational(lam);
        ca[a] = TowerScalar(long(h.multiplicity) * (h.multiplicity + 1)) *
                dot_vec(forms[a].coeff, forms[a].coeff);
    }
    MultiPoly one = MultiPoly::constant(sp.total(), TowerScalar(1L));
    MultiPoly F = one, C(sp.total());
    std::vector<MultiPoly> Fa(K, one), fpoly;
    for (int a = 0; a < K; ++a) {
        fpoly.push_back(forms[a].to_poly(sp));
        F = F * fpoly[a];
        for (int b = 0; b < K; ++b)
            if (b != a) Fa[b] = Fa[b] * fpoly[a];
    }
    for (int a = 0; a < K; ++a) C = C + Fa[a] * Fa[a] * ca[a];

    MultiPoly N = one;
    for (int a = 0; a < K; ++a)
        for (int t = 0; t < c.hyperplanes[a].multiplicity; ++t) N = N * fpoly[a];
    std::vector<int> e(K, 0);
    Rational gamma(1);  // stripped integer content, restored at the end

    auto step = [&]() {
        MultiPoly out = C * N;
        for (int i = 0; i < n; ++i) {
            MultiPoly Si(sp.total()), Ti(sp.total());
            for (int a = 0; a < K; ++a) {
                const TowerScalar& ai = forms[a].coeff[i];
                if (ai.is_zero()) continue;
                Si = Si + Fa[a] * (ai * TowerScalar(long(e[a])));
                Ti = Ti + Fa[a] * (ai * TowerScalar(long(e[a] + 1)));
            }
            MultiPoly Gi = N.derivative(i) * F - N * Si;
            MultiPoly Hi = Gi.derivative(i) * F - Gi * Ti;
            out = out - Hi -
                  Gi * F * MultiPoly::variable(sp.total(), n + i) * TowerScalar(2L);
        }
        N = std::move(out);
        for (int a = 0; a < K; ++a) {
            e[a] += 2;
            MultiPoly q;
            while (e[a] > 0 && detail::try_divide(N, forms[a], sp, &q)) {
                N = std::move(q);
                --e[a];
            }
        }
        gamma *= detail::strip_content(N);
    };

    int M = c.total_multiplicity();
    for (int i = 0; i < M; ++i) step();
    auto as_fraction = [&](const MultiPoly& num) {
        RationalFn r = RationalFn::from_poly(sp, num);
        for (int a = 0; a < K; ++a)
            if (e[a] > 0) r.divide_by_form(forms[a], e[a]);
        return r * TowerScalar(gamma / scale);
    };
    MultiPoly terminal = N;
    std::vector<int> eM = e;
    Rational gammaM = gamma;
    step();
    if (!N.is_zero()) throw NonTerminating(as_fraction(N));
    N = std::move(terminal);
    e = std::move(eM);
    gamma = std::move(gammaM);

    // divide by (-2)^M M! prod (alpha,k)^{m_alpha}
    Rational cM(1);
    for (int i = 1; i <= M; ++i) cM = cM * Rational(-2 * i);
    BAFunction psi;
    psi.config = c;
    psi.sp = sp;
    psi.M = M;
    psi.A = one;
    psi.prefactor = as_fraction(N) * TowerScalar(Rational(1) / cM);  // includes gamma/scale
    for (auto& h : c.hyperplanes) {
        MultiPoly kf = k_form(h).to_poly(sp);
        for (int t = 0; t < h.multiplicity; ++t) psi.A = psi.A * kf;
        psi.prefactor.divide_by_form(k_form(h), h.multiplicity);
    }
    return psi;
}

// the k-homogeneous components of the prefactor (the denominator A(k) is
// k-homogeneous, so these are num-component / A shifted by deg A)
inline std::map<int, RationalFn> prefactor_k_components(const BAFunction& psi) {
    int degden = 0;
    for (auto& [f, p] : psi.prefactor.den())
        if (f.block == Block::K) degden += p;
    std::map<int, RationalFn> out;
    for (auto& [d, comp] :
         psi.prefactor.num().homogeneous_components(psi.sp.nx, psi.sp.total())) {
        RationalFn r = RationalFn::from_poly(psi.sp, comp);
        for (auto& [f, p] : psi.prefactor.den()) r.divide_by_form(f, p);
        out.emplace(d - degden, std::move(r));
    }
    return out;
}

// defining axioms: for each alpha, the odd normal k-derivatives of
// psi (k,alpha)^{m} up to order 2m-1 vanish on (k,alpha) = 0; the derivative
// acts on the prefactor as  g -> (alpha, d/dk) g + (alpha, x) g
inline bool verify_ba_axioms(const BAFunction& psi, const std::string& mode = "exact",
                             std::uint64_t seed = 0) {
    const VarSpace& sp = psi.sp;
    for (auto& h : psi.config.hyperplanes) {
        RationalFn g = psi.prefactor;
        MultiPoly kf = k_form(h).to_poly(sp);
        for (int t = 0; t < h.multiplicity; ++t) g = g * RationalFn::from_poly(sp, kf);
        MultiPoly ax(sp.total());
        for (int i = 0; i < sp.nx; ++i)
            ax = ax + MultiPoly::variable(sp.total(), i) * h.normal[i];
        RationalFn axf = RationalFn::from_poly(sp, ax);
        for (int r = 1; r <= 2 * h.multiplicity - 1; ++r) {
            RationalFn d(sp);
            for (int i = 0; i < sp.nx; ++i)
                d = d + g.derivative(sp.nx + i) * h.normal[i];
            g = d + axf * g;
            if (r % 2 == 0) continue;
            RationalFn res = restrict_to_hyperplane(g, k_form(h));
            if (!is_zero(res, mode, seed + r).zero) return false;
        }
    }
    return true;
}

inline bool verify_eigen(const BAFunction& psi, const RationalFn& u) {
    return apply_L_plus_k2(QuasiPoly(psi.prefactor), u).is_zero();
}

inline bool verify_symmetry(const BAFunction& psi) {
    if (!psi.config.is_linear())
        throw std::invalid_argument("verify_symmetry: linear configurations only");
    const VarSpace& sp = psi.sp;
    std::vector<MultiPoly> swap_images;
    for (int i = 0; i < sp.total(); ++i)
        swap_images.push_back(MultiPoly::variable(
            sp.total(), i < sp.nx ? i + sp.nx : i - sp.nx));
    RationalFn swapped = psi.prefactor.substitute(swap_images, sp);
    return (psi.prefactor - swapped).is_zero();
}

// bispectral dual: L(k, d/dk) psi = -x^2 psi with the mirror potential in k
inline bool verify_bispectral(const BAFunction& psi) {
    if (!psi.config.is_linear())
        throw std::invalid_argument("verify_bispectral: linear configurations only");
    const VarSpace& sp = psi.sp;
    RationalFn uk(sp);
    for (auto& h : psi.config.hyperplanes) {
        TowerScalar coeff = TowerScalar(long(h.multiplicity) * (h.multiplicity + 1)) *
                            dot_vec(h.normal, h.normal);
        uk = uk + RationalFn::constant(sp, coeff).divide_by_form(k_form(h), 2);
    }
    DiffOperator Lk = schrodinger_operator(uk, Block::K);
    MultiPoly x2(sp.total());
    for (int i = 0; i < sp.nx; ++i)
        x2 = x2 + MultiPoly::variable(sp.total(), i) * MultiPoly::variable(sp.total(), i);
    RationalFn res =
        Lk.apply_to_quasi(psi.prefactor) + RationalFn::from_poly(sp, x2) * psi.prefactor;
    return res.is_zero();
}

// quasi-invariance: odd directional derivatives of f(k) up to order
// 2 m_alpha - 1 vanish on every (alpha, k) = 0
inline bool is_quasi_invariant(const MultiPoly& f, const Configuration& c) {
    if (!c.is_linear())
        throw std::invalid_argument("is_quasi_invariant: linear configurations only");
    VarSpace sp{c.dimension, c.dimension};
    for (auto& h : c.hyperplanes) {
        MultiPoly g = f;
        for (int r = 1; r <= 2 * h.multiplicity - 1; ++r) {
            MultiPoly d(sp.total());
            for (int i = 0; i < sp.nx; ++i)
                d = d + g.derivative(sp.nx + i) * h.normal[i];
            g = std::move(d);
            if (r % 2 == 0) continue;
            RationalFn res =
                restrict_to_hyperplane(RationalFn::from_poly(sp, g), k_form(h));
            if (!res.is_zero()) return false;
        }
    }
    return true;
}

// L_f = c_N (ad_L)^N [fhat],  c_N = (-1)^N / (2^N N!),  fhat = f(x);
// normalization satisfies L_f psi = f(k) psi
inline DiffOperator operator_from_ad_formula(const RationalFn& u, const MultiPoly& f) {
    VarSpace sp = u.space();
    int N = f.degree_in_range(sp.nx, sp.total());
    if (N < 0) N = 0;
    std::vector<MultiPoly> images;
    for (int i = 0; i < sp.total(); ++i)
        images.push_back(MultiPoly::variable(sp.total(), i < sp.nx ? i : i - sp.nx));
    MultiPoly fhat = f.substitute(images, sp.total());
    DiffOperator L = schrodinger_operator(u, Block::X);
    DiffOperator X = DiffOperator::multiplication(sp, Block::X, RationalFn::from_poly(sp, fhat));
    for (int t = 0; t < N; ++t) X = L.commutator(X);
    Rational cN(1);
    for (int i = 1; i <= N; ++i) cN = cN * Rational(-2 * i);
    return X * TowerScalar(Rational(1) / cN);
}

// Laurent data of the potential along a pole hyperplane: c_{-2} must be
// m(m+1)(alpha,alpha) and the odd coefficients c_{-1}, c_1, ..., c_{2m-1}
// must vanish (trivial monodromy)
inline bool trivial_monodromy_check(const RationalFn& u, const LinearForm& h, int m) {
    auto L = laurent_normal_expansion(u, h, 2 * m + 1);
    if (L.ord != 2) return false;
    TowerScalar target = TowerScalar(long(m) * (m + 1)) * h.norm2();
    RationalFn c2 = L.coefficient(-2);
    if (!(c2 - RationalFn::constant(c2.space(), target)).is_zero())
        throw std::domain_error("trivial_monodromy_check: c_-2 is not m(m+1)(alpha,alpha)");
    for (int s = -1; s <= 2 * m - 1; s += 2)
        if (!L.coefficient(s).is_zero()) return false;
    return true;
}

inline nlohmann::json ba_to_json(const BAFunction& psi) {
    nlohmann::json j;
    j["config"] = config_to_json(psi.config);
    j["M"] = psi.M;
    j["prefactor"] = psi.prefactor.str();
    return j;
}

}  // namespace locuslab
