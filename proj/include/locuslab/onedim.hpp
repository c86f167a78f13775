#pragma once

// One-dimensional theory: Adler-Moser polynomials and their Wronskian
// potentials, rational Baker-Akhiezer functions cut out by the Grassmannian
// conditions on the Laurent tail, the numeric trigonometric-Wronskian
// construction of planar line configurations, and the n = 1 locus verifier.

#include <algorithm>
#include <functional>
#include <utility>

#include "locuslab/bigfloat.hpp"
#include "locuslab/locus.hpp"

namespace locuslab {

// ---- univariate exact polynomials and fractions ------------------------
//
// The shared rational-function type keeps denominators as products of linear
// forms, which is the right shape for locus sums but cannot hold Wronskian
// denominators such as z^3 + tau.  The one-dimensional theory therefore gets
// a dense univariate fraction type with gcd reduction.

struct UniPoly {
    std::vector<TowerScalar> c;  // c[i] * z^i, no trailing zeros

    UniPoly() = default;
    explicit UniPoly(TowerScalar k) {
        if (!k.is_zero()) c.push_back(std::move(k));
    }

    static UniPoly z() {
        UniPoly p;
        p.c = {TowerScalar(), TowerScalar(1L)};
        return p;
    }

    void trim() {
        while (!c.empty() && c.back().is_zero()) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    int degree() const { return (int)c.size() - 1; }  // -1 for zero
    const TowerScalar& leading() const { return c.back(); }

    TowerScalar coeff(int i) const {
        return i >= 0 && i < (int)c.size() ? c[i] : TowerScalar();
    }

    UniPoly operator+(const UniPoly& o) const {
        UniPoly r = *this;
        if (o.c.size() > r.c.size()) r.c.resize(o.c.size());
        for (size_t i = 0; i < o.c.size(); ++i) r.c[i] = r.c[i] + o.c[i];
        r.trim();
        return r;
    }
    UniPoly operator-() const {
        UniPoly r = *this;
        for (auto& k : r.c) k = -k;
        return r;
    }
    UniPoly operator-(const UniPoly& o) const { return *this + (-o); }
    UniPoly operator*(const UniPoly& o) const {
        UniPoly r;
        if (is_zero() || o.is_zero()) return r;
        r.c.assign(c.size() + o.c.size() - 1, TowerScalar());
        for (size_t i = 0; i < c.size(); ++i)
            for (size_t j = 0; j < o.c.size(); ++j)
                r.c[i + j] = r.c[i + j] + c[i] * o.c[j];
        r.trim();
        return r;
    }
    UniPoly operator*(const TowerScalar& s) const {
        UniPoly r;
        if (s.is_zero()) return r;
        for (auto& k : c) r.c.push_back(k * s);
        return r;
    }

    UniPoly derivative() const {
        UniPoly r;
        for (size_t i = 1; i < c.size(); ++i)
            r.c.push_back(c[i] * TowerScalar(long(i)));
        r.trim();
        return r;
    }
    UniPoly antiderivative() const {  // constant of integration = 0
        UniPoly r;
        if (is_zero()) return r;
        r.c.assign(c.size() + 1, TowerScalar());
        for (size_t i = 0; i < c.size(); ++i)
            r.c[i + 1] = c[i] * TowerScalar(Rational(1, long(i) + 1));
        return r;
    }

    TowerScalar eval(const TowerScalar& z0) const {
        TowerScalar v;
        for (size_t i = c.size(); i-- > 0;) v = v * z0 + c[i];
        return v;
    }

    // returns (quotient, remainder) with *this = q * d + r, deg r < deg d
    std::pair<UniPoly, UniPoly> divrem(const UniPoly& d) const {
        if (d.is_zero()) throw std::domain_error("UniPoly: division by zero");
        UniPoly q, r = *this;
        TowerScalar linv = d.leading().inverse();
        while (!r.is_zero() && r.degree() >= d.degree()) {
            int shift = r.degree() - d.degree();
            TowerScalar f = r.leading() * linv;
            if ((int)q.c.size() <= shift) q.c.resize(shift + 1);
            q.c[shift] = q.c[shift] + f;
            for (size_t i = 0; i < d.c.size(); ++i)
                r.c[i + shift] = r.c[i + shift] - f * d.c[i];
            r.c.pop_back();
            r.trim();
        }
        q.trim();
        return {q, r};
    }

    UniPoly monic() const {
        if (is_zero()) return *this;
        return *this * leading().inverse();
    }

    bool operator==(const UniPoly& o) const { return (*this - o).is_zero(); }

    std::string str(const std::string& var = "z") const {
        if (is_zero()) return "0";
        std::string out;
        for (int i = degree(); i >= 0; --i) {
            if (c[i].is_zero()) continue;
            std::string k = c[i].str();
            bool neg = k.size() > 1 && k[0] == '-' && k.find(' ') == std::string::npos;
            if (out.empty()) {
                if (neg) { out = "-"; k = k.substr(1); }
            } else {
                if (neg) { out += " - "; k = k.substr(1); }
                else out += " + ";
            }
            bool sum = k.find(' ') != std::string::npos;
            std::string mono = i == 0 ? "" : (i == 1 ? var : var + "^" + std::to_string(i));
            if (mono.empty()) out += sum ? "(" + k + ")" : k;
            else if (k == "1") out += mono;
            else out += (sum ? "(" + k + ")" : k) + "*" + mono;
        }
        return out;
    }
};

inline UniPoly gcd_poly(UniPoly a, UniPoly b) {
    while (!b.is_zero()) {
        UniPoly r = a.divrem(b).second;
        a = std::move(b);
        b = r.monic();  // keep coefficient growth in check
    }
    return a.monic();
}

inline UniPoly wronskian(const std::vector<UniPoly>& fs) {
    size_t m = fs.size();
    std::vector<std::vector<UniPoly>> rows(m, std::vector<UniPoly>(m));
    for (size_t j = 0; j < m; ++j) {
        rows[0][j] = fs[j];
        for (size_t t = 1; t < m; ++t) rows[t][j] = rows[t - 1][j].derivative();
    }
    // Laplace expansion; m stays small here
    std::vector<int> cols(m);
    for (size_t j = 0; j < m; ++j) cols[j] = (int)j;
    std::function<UniPoly(int, std::vector<int>&)> det =
        [&](int row, std::vector<int>& cs) -> UniPoly {
        if (cs.empty()) return UniPoly(TowerScalar(1L));
        UniPoly sum;
        for (size_t p = 0; p < cs.size(); ++p) {
            int col = cs[p];
            if (rows[row][col].is_zero()) continue;
            std::vector<int> rest;
            for (size_t q = 0; q < cs.size(); ++q)
                if (q != p) rest.push_back(cs[q]);
            UniPoly sub = rows[row][col] * det(row + 1, rest);
            sum = p % 2 == 0 ? sum + sub : sum - sub;
        }
        return sum;
    };
    return det(0, cols);
}

struct UniFraction {
    UniPoly num, den = UniPoly(TowerScalar(1L));

    UniFraction() = default;
    explicit UniFraction(UniPoly n) : num(std::move(n)) {}
    UniFraction(UniPoly n, UniPoly d) : num(std::move(n)), den(std::move(d)) {
        reduce();
    }
    static UniFraction constant(TowerScalar k) { return UniFraction(UniPoly(std::move(k))); }

    void reduce() {
        if (den.is_zero()) throw std::domain_error("UniFraction: zero denominator");
        if (num.is_zero()) { den = UniPoly(TowerScalar(1L)); return; }
        UniPoly g = gcd_poly(num, den);
        if (g.degree() > 0) {
            num = num.divrem(g).first;
            den = den.divrem(g).first;
        }
        TowerScalar inv = den.leading().inverse();
        num = num * inv;
        den = den * inv;
    }

    bool is_zero() const { return num.is_zero(); }

    UniFraction operator+(const UniFraction& o) const {
        return UniFraction(num * o.den + o.num * den, den * o.den);
    }
    UniFraction operator-() const {
        UniFraction r = *this;
        r.num = -r.num;
        return r;
    }
    UniFraction operator-(const UniFraction& o) const { return *this + (-o); }
    UniFraction operator*(const UniFraction& o) const {
        return UniFraction(num * o.num, den * o.den);
    }
    UniFraction operator*(const TowerScalar& s) const {
        UniFraction r = *this;
        r.num = r.num * s;
        r.reduce();
        return r;
    }
    UniFraction inverse() const {
        if (is_zero()) throw std::domain_error("UniFraction: inverse of zero");
        return UniFraction(den, num);
    }
    UniFraction operator/(const UniFraction& o) const { return *this * o.inverse(); }

    UniFraction derivative() const {
        return UniFraction(num.derivative() * den - num * den.derivative(), den * den);
    }

    bool operator==(const UniFraction& o) const { return (*this - o).is_zero(); }

    std::string str(const std::string& var = "z") const {
        if (den.degree() == 0 && (den.coeff(0) - TowerScalar(1L)).is_zero())
            return num.str(var);
        std::string n = num.str(var), d = den.str(var);
        if (n.find(' ') != std::string::npos) n = "(" + n + ")";
        if (d.find(' ') != std::string::npos || d.find('*') != std::string::npos)
            d = "(" + d + ")";
        return n + "/" + d;
    }
};

// ---- Adler-Moser chain -------------------------------------------------

struct AdlerMoserData {
    int m = 0;
    std::vector<TowerScalar> constants;  // c_2 .. c_m
    std::vector<UniPoly> chain;          // chi_1 .. chi_m
    UniPoly W;                           // Wronskian of the chain
    UniFraction u;                       // -2 (log W)''
};

// chi_1 = z; chi_j'' = chi_{j-1}.  Each double integration is taken with
// zero integration constants and then shifted by the free constant c_j.
// The second free constant of the integration (the coefficient of z) would
// only add a multiple of chi_1 to chi_j and leaves the Wronskian unchanged,
// so it is gauged away.
inline AdlerMoserData adler_moser(int m, std::vector<TowerScalar> constants = {}) {
    if (m < 1) throw std::invalid_argument("adler_moser: m must be positive");
    if ((int)constants.size() != m - 1)
        throw std::invalid_argument("adler_moser: expected m-1 constants c_2..c_m");
    AdlerMoserData d;
    d.m = m;
    d.constants = constants;
    d.chain.push_back(UniPoly::z());
    for (int j = 2; j <= m; ++j)
        d.chain.push_back(d.chain.back().antiderivative().antiderivative() +
                          UniPoly(constants[j - 2]));
    d.W = wronskian(d.chain);
    if (d.W.degree() != m * (m + 1) / 2)
        throw std::logic_error("adler_moser: Wronskian degree is not m(m+1)/2");
    UniFraction logd(d.W.derivative(), d.W);  // (log W)'
    d.u = logd.derivative() * TowerScalar(-2L);
    return d;
}

// ---- rational BA functions from the Laurent-tail conditions ------------

struct XiData {
    int m = 0;
    std::vector<TowerScalar> xi;   // xi_1 .. xi_m
    std::vector<UniFraction> a;    // a_1 .. a_m in psi = (1 + sum a_i lambda^-i) e^{lambda z}
    UniFraction u;                 // 2 a_1'
    bool schrodinger_verified = false;
};

// psi = (1 + sum_{i=1}^m a_i(z) lambda^{-i}) e^{lambda z} has Laurent
// coefficients psi_s = sum_i a_i z^{s+i}/(s+i)!  (a_0 = 1, terms with
// s+i >= 0).  The m linear conditions, row r = 1..m:
//   psi_{m-2r+1} + sum_{t=1}^{m-r+1} xi_t psi_{m-2t-2(r-1)} = 0.
inline XiData ba_from_xi(int m, std::vector<TowerScalar> xi) {
    if (m < 1) throw std::invalid_argument("ba_from_xi: m must be positive");
    if ((int)xi.size() != m)
        throw std::invalid_argument("ba_from_xi: expected m parameters");
    XiData d;
    d.m = m;
    d.xi = xi;

    // monomial z^p / p! as a polynomial, or zero for p < 0
    auto mono = [](int p) {
        UniPoly r;
        if (p < 0) return r;
        r.c.assign(p + 1, TowerScalar());
        Rational f(1);
        for (int t = 2; t <= p; ++t) f = f * t;
        r.c[p] = TowerScalar(Rational(1) / f);
        return r;
    };

    // augmented system: rows of (coefficients of a_1..a_m | -rhs)
    std::vector<std::vector<UniFraction>> sys(
        m, std::vector<UniFraction>(m + 1));
    auto add_psi = [&](int row, int s, const TowerScalar& w) {
        for (int i = 1; i <= m; ++i)
            sys[row][i - 1] = sys[row][i - 1] + UniFraction(mono(s + i) * w);
        sys[row][m] = sys[row][m] - UniFraction(mono(s) * w);
    };
    for (int r = 1; r <= m; ++r) {
        add_psi(r - 1, m - 2 * r + 1, TowerScalar(1L));
        for (int t = 1; t <= m - r + 1; ++t)
            add_psi(r - 1, m - 2 * t - 2 * (r - 1), xi[t - 1]);
    }

    // Gaussian elimination over the fraction field
    for (int col = 0; col < m; ++col) {
        int piv = -1;
        for (int r = col; r < m; ++r)
            if (!sys[r][col].is_zero()) { piv = r; break; }
        if (piv < 0)
            throw std::domain_error("ba_from_xi: degenerate linear system");
        std::swap(sys[col], sys[piv]);
        UniFraction inv = sys[col][col].inverse();
        for (int j = col; j <= m; ++j) sys[col][j] = sys[col][j] * inv;
        for (int r = 0; r < m; ++r) {
            if (r == col || sys[r][col].is_zero()) continue;
            UniFraction f = sys[r][col];
            for (int j = col; j <= m; ++j)
                sys[r][j] = sys[r][j] - f * sys[col][j];
        }
    }
    for (int i = 0; i < m; ++i) d.a.push_back(sys[i][m]);
    d.u = d.a[0].derivative() * TowerScalar(2L);

    // -psi'' + u psi = -lambda^2 psi  <=>  -P'' - 2 lambda P' + u P = 0 for
    // P = 1 + sum a_i lambda^{-i}; the lambda^{-i} coefficient of the left
    // side is (-a_i'' + u a_i) - 2 a_{i+1}'  (a_0 = 1, a_{m+1} = 0)
    for (int i = 0; i <= m; ++i) {
        UniFraction ai = i == 0 ? UniFraction::constant(TowerScalar(1L)) : d.a[i - 1];
        UniFraction next = i < m ? d.a[i].derivative() : UniFraction();
        UniFraction res = -ai.derivative().derivative() + d.u * ai -
                          next * TowerScalar(2L);
        if (!res.is_zero())
            throw std::logic_error("ba_from_xi: Schrodinger identity failed");
    }
    d.schrodinger_verified = true;
    return d;
}

// ---- n = 1 locus -------------------------------------------------------

// point configuration {z + offset_j = 0} with multiplicities
inline Configuration points_configuration(
    const std::vector<std::pair<TowerScalar, int>>& points) {
    std::vector<Hyperplane> hs;
    for (auto& [p, mult] : points) hs.push_back({{TowerScalar(1L)}, -p, mult});
    return make_configuration(1, std::move(hs));
}

inline LocusReport verify_1d_locus(const std::vector<std::pair<TowerScalar, int>>& points,
                                   const std::string& mode = "exact",
                                   std::uint64_t seed = 0) {
    return verify_affine_locus(points_configuration(points), mode, seed);
}

// sum of m_j(m_j+1)/(z - p_j)^2 as a univariate fraction, for comparing
// Wronskian potentials against their pole data
inline UniFraction potential_from_points(
    const std::vector<std::pair<TowerScalar, int>>& points) {
    UniFraction u;
    for (auto& [p, m] : points) {
        UniPoly lin = UniPoly::z() - UniPoly(p);
        u = u + UniFraction(UniPoly(TowerScalar(long(m) * (m + 1))), lin * lin);
    }
    return u;
}

// ---- numeric planar construction from trigonometric Wronskians ---------

inline BigFloat big_pi() {
    static const BigFloat pi = boost::multiprecision::acos(BigFloat(-1));
    return pi;
}

struct TrigLine {
    CF v;           // e^{2 i phi}; |v| != 1 for complex line angles
    CF phi;         // line x cos(phi) + y sin(phi) = 0, Re(phi) in [0, pi)
    int mult = 0;   // locus multiplicity m_j (cluster size = m_j(m_j+1)/2)
};

struct TrigWronskianData {
    std::vector<int> k;
    std::vector<CF> theta;
    std::vector<CF> wron;        // W * w^K as a polynomial in v = w^2 = e^{2i phi}
    std::vector<TrigLine> lines;
    bool triangular = true;      // all cluster sizes of the form m(m+1)/2
    BigFloat max_locus_residual; // planar locus equations at the roots
    int precision_bits = 256;
};

inline BigFloat planar_locus_residual(const std::vector<TrigLine>& lines);

namespace detail {

// Durand-Kerner iteration on a monic-normalized polynomial; coefficients
// low -> high.  Simple roots converge essentially to working precision,
// clusters stall at the cluster radius, which is what the later clustering
// step consumes.
inline std::vector<CF> all_roots(std::vector<CF> poly, int precision_bits) {
    while (!poly.empty() && poly.back().abs() == 0) poly.pop_back();
    int n = (int)poly.size() - 1;
    if (n < 1) return {};
    CF lead = poly[n];
    for (auto& c : poly) c = c / lead;
    std::vector<CF> r(n);
    CF seed(BigFloat("0.4"), BigFloat("0.9")), p(1L);
    for (int i = 0; i < n; ++i) {
        p = p * seed;
        r[i] = p;
    }
    BigFloat tol = boost::multiprecision::ldexp(BigFloat(1), -(precision_bits + 24));
    for (int it = 0; it < 2000; ++it) {
        BigFloat step(0);
        for (int i = 0; i < n; ++i) {
            CF val = poly[n];
            for (int d = n - 1; d >= 0; --d) val = val * r[i] + poly[d];
            CF den(1L);
            for (int j = 0; j < n; ++j)
                if (j != i) den = den * (r[i] - r[j]);
            CF delta = val / den;
            r[i] -= delta;
            step = std::max(step, delta.abs());
        }
        if (step < tol) break;
    }
    return r;
}

}  // namespace detail

// W[cos(k_j phi + theta_j)] via w = e^{i phi}: each entry is a Laurent
// polynomial in w and d/dphi acts as i w d/dw; the Wronskian times w^K
// (K = sum k_j) only involves even powers of w, i.e. is a polynomial in
// v = e^{2i phi}, whose roots give the line angles mod pi directly.
inline TrigWronskianData berest_lutsenko(const std::vector<int>& k,
                                         const std::vector<CF>& theta,
                                         int precision_bits = 256) {
    if (k.empty() || k.size() != theta.size())
        throw std::invalid_argument("berest_lutsenko: need matching k and theta lists");
    for (size_t j = 0; j < k.size(); ++j)
        if (k[j] <= 0 || (j + 1 < k.size() && k[j] >= k[j + 1]))
            throw std::invalid_argument("berest_lutsenko: need 0 < k_1 < ... < k_M");
    if (precision_bits < 53 || precision_bits > kBigFloatBits)
        throw std::domain_error("berest_lutsenko: unsupported precision");
    TrigWronskianData out;
    out.k = k;
    out.theta = theta;
    out.precision_bits = precision_bits;

    int M = (int)k.size(), K = 0;
    for (int kj : k) K += kj;
    using Laurent = std::map<int, CF>;
    auto lmul = [](const Laurent& a, const Laurent& b) {
        Laurent r;
        for (auto& [e, c] : a)
            for (auto& [f, d] : b) r[e + f] += c * d;
        return r;
    };
    // rows[t][j] = (d/dphi)^t cos(k_j phi + theta_j)
    std::vector<std::vector<Laurent>> rows(M, std::vector<Laurent>(M));
    for (int j = 0; j < M; ++j) {
        CF eip = {boost::multiprecision::exp(-theta[j].im) *
                      boost::multiprecision::cos(theta[j].re),
                  boost::multiprecision::exp(-theta[j].im) *
                      boost::multiprecision::sin(theta[j].re)};
        CF eim = CF(1L) / eip;
        CF half(BigFloat("0.5"));
        rows[0][j] = {{k[j], eip * half}, {-k[j], eim * half}};
        for (int t = 1; t < M; ++t)
            for (auto& [e, c] : rows[t - 1][j])
                rows[t][j][e] = c * CF(BigFloat(0), BigFloat(e));  // i*e per d/dphi
    }
    std::vector<int> cols(M);
    for (int j = 0; j < M; ++j) cols[j] = j;
    std::function<Laurent(int, std::vector<int>&)> det =
        [&](int row, std::vector<int>& cs) -> Laurent {
        if (cs.empty()) return Laurent{{0, CF(1L)}};
        Laurent sum;
        for (size_t p = 0; p < cs.size(); ++p) {
            std::vector<int> rest;
            for (size_t q = 0; q < cs.size(); ++q)
                if (q != p) rest.push_back(cs[q]);
            Laurent sub = lmul(rows[row][cs[p]], det(row + 1, rest));
            for (auto& [e, c] : sub)
                sum[e] += p % 2 == 0 ? c : -c;
        }
        return sum;
    };
    Laurent W = det(0, cols);

    out.wron.assign(K + 1, CF());
    for (auto& [e, c] : W) {
        if ((e + K) % 2 != 0 || e + K < 0 || e + K > 2 * K)
            throw std::logic_error("berest_lutsenko: unexpected Wronskian support");
        out.wron[(e + K) / 2] += c;
    }

    std::vector<CF> roots = detail::all_roots(out.wron, precision_bits);
    BigFloat pi = big_pi();

    // cluster in v (phi mod pi corresponds to v exactly), radius 2^-100
    BigFloat radius = boost::multiprecision::ldexp(BigFloat(1), -100);
    std::vector<std::pair<CF, int>> clusters;  // representative, size
    for (auto& v : roots) {
        bool placed = false;
        for (auto& [rep, size] : clusters)
            if ((v - rep).abs() < radius) {
                ++size;
                placed = true;
                break;
            }
        if (!placed) clusters.push_back({v, 1});
    }
    for (auto& [rep, size] : clusters) {
        int m = 0;
        while (m * (m + 1) / 2 < size) ++m;
        if (m * (m + 1) / 2 != size) out.triangular = false;
        BigFloat re = boost::multiprecision::atan2(rep.im, rep.re) / 2;
        while (re < 0) re += pi;
        BigFloat im = -boost::multiprecision::log(rep.abs()) / 2;
        out.lines.push_back({rep, CF(re, im), m});
    }
    std::sort(out.lines.begin(), out.lines.end(),
              [](const TrigLine& a, const TrigLine& b) { return a.phi.re < b.phi.re; });

    out.max_locus_residual = planar_locus_residual(out.lines);
    return out;
}

namespace detail {

// cos(phi_i - phi_l) and sin(phi_i - phi_l) through q = v_i / v_l = e^{2i d}:
// cos d = (sqrt(q) + 1/sqrt(q))/2, sin d = (sqrt(q) - 1/sqrt(q))/(2i); the
// branch of the square root flips both signs at once, and both residual
// formulas below only use them in odd powers whose total count is even.
inline std::pair<CF, CF> cos_sin_of_half_log(const CF& q) {
    CF s = locuslab::sqrt(q), inv = CF(1L) / s;
    CF two(2L), twoi(BigFloat(0), BigFloat(2));
    return {(s + inv) / two, (s - inv) / twoi};
}

}  // namespace detail

// planar locus residuals of a line configuration with unit normals
// (cos phi_j, sin phi_j): for each line i and s = 1..m_i the sum over l != i
// of m_l(m_l+1) cos^{2s-1}(phi_i-phi_l) / sin^{2s+1}(phi_i-phi_l), which is
// the locus equation evaluated at a point of line i
inline BigFloat planar_locus_residual(const std::vector<TrigLine>& lines) {
    BigFloat worst(0);
    for (size_t i = 0; i < lines.size(); ++i)
        for (int s = 1; s <= lines[i].mult; ++s) {
            CF res;
            for (size_t l = 0; l < lines.size(); ++l) {
                if (l == i) continue;
                auto [cd, sd] = detail::cos_sin_of_half_log(lines[i].v / lines[l].v);
                CF term(BigFloat(lines[l].mult * (lines[l].mult + 1)));
                for (int t = 0; t < 2 * s - 1; ++t) term = term * cd;
                for (int t = 0; t < 2 * s + 1; ++t) term = term / sd;
                res += term;
            }
            worst = std::max(worst, res.abs());
        }
    return worst;
}

// one-dimensional trigonometric locus residuals for lines at the given
// angles: (d/dphi)^{2s-1} sum_{j != i} m_j(m_j+1)/sin^2(phi - phi_j) at
// phi = phi_i, s = 1..m_i.  Derivatives are taken through polynomials in
// c = cot(phi - phi_j) using 1/sin^2 = 1 + c^2 and c' = -(1 + c^2).
inline BigFloat trig_locus_residual(const std::vector<TrigLine>& lines) {
    int maxm = 0;
    for (auto& ln : lines) maxm = std::max(maxm, ln.mult);
    if (maxm == 0) return BigFloat(0);
    // p_r = r-th phi-derivative of 1/sin^2 as a polynomial in c
    std::vector<std::vector<long>> p(2 * maxm);
    p[0] = {1, 0, 1};  // 1 + c^2
    for (int r = 1; r < 2 * maxm; ++r) {
        std::vector<long> dp(p[r - 1].size() >= 2 ? p[r - 1].size() - 1 : 0);
        for (size_t t = 1; t < p[r - 1].size(); ++t) dp[t - 1] = p[r - 1][t] * (long)t;
        p[r].assign(dp.size() + 2, 0);  // times -(1 + c^2)
        for (size_t t = 0; t < dp.size(); ++t) {
            p[r][t] -= dp[t];
            p[r][t + 2] -= dp[t];
        }
    }
    BigFloat worst(0);
    for (size_t i = 0; i < lines.size(); ++i)
        for (int s = 1; s <= lines[i].mult; ++s) {
            CF res;
            for (size_t j = 0; j < lines.size(); ++j) {
                if (j == i) continue;
                auto [cd, sd] = detail::cos_sin_of_half_log(lines[i].v / lines[j].v);
                CF c = cd / sd;
                CF val;
                for (size_t t = p[2 * s - 1].size(); t-- > 0;)
                    val = val * c + CF(BigFloat(p[2 * s - 1][t]));
                res += CF(BigFloat(lines[j].mult * (lines[j].mult + 1))) * val;
            }
            worst = std::max(worst, res.abs());
        }
    return worst;
}

inline nlohmann::json trig_to_json(const TrigWronskianData& d) {
    nlohmann::json j;
    j["k"] = d.k;
    j["triangular"] = d.triangular;
    j["precision_bits"] = d.precision_bits;
    j["lines"] = nlohmann::json::array();
    for (auto& ln : d.lines) {
        nlohmann::json lj;
        lj["phi"] = ln.phi.re.str(40);
        if (ln.phi.im != 0) lj["phi_imag"] = ln.phi.im.str(40);
        lj["multiplicity"] = ln.mult;
        j["lines"].push_back(std::move(lj));
    }
    j["max_locus_residual"] = d.max_locus_residual.str(8);
    return j;
}

}  // namespace locuslab
