#pragma once

// Exact arithmetic in multi-quadratic extensions of the Gaussian rationals.
//
// A TowerScalar is a finite sum  sum_T (a_T + b_T i) * sqrt(D_T) * prod_j sqrt(r_{T,j})
// where D_T is a square-free positive integer and each r_{T,j} is a "nested"
// radicand: an element of the flat field Q(i, sqrt d1, sqrt d2, ...) itself.
// The flat part is fully canonical (keys are square-free integers, so
// sqrt2*sqrt3 and sqrt6 collapse to the same basis element). Nested radicands
// are compared structurally; they are needed for configurations such as the
// dihedral I2(5) whose trace field is a cyclic quartic extension.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace locuslab {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline int cmp(const Int& a, const Int& b) { return a < b ? -1 : (b < a ? 1 : 0); }
inline int cmp(const Rational& a, const Rational& b) { return a < b ? -1 : (b < a ? 1 : 0); }

// ---------------------------------------------------------------------------
// Gaussian rationals a + b i
// ---------------------------------------------------------------------------

struct Gaussian {
    Rational re, im;

    Gaussian() = default;
    Gaussian(Rational r) : re(std::move(r)) {}
    Gaussian(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    Gaussian(long n) : re(n) {}

    bool is_zero() const { return re == 0 && im == 0; }
    Gaussian operator-() const { return {-re, -im}; }
    Gaussian operator+(const Gaussian& o) const { return {re + o.re, im + o.im}; }
    Gaussian operator-(const Gaussian& o) const { return {re - o.re, im - o.im}; }
    Gaussian operator*(const Gaussian& o) const {
        if (im == 0) {
            if (o.im == 0) return {re * o.re};
            return {re * o.re, re * o.im};
        }
        if (o.im == 0) return {re * o.re, im * o.re};
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    Gaussian conj() const { return {re, -im}; }
    Gaussian inverse() const {
        Rational n = re * re + im * im;
        if (n == 0) throw std::domain_error("division by zero (Gaussian)");
        return {re / n, -im / n};
    }
    Gaussian scaled(const Rational& s) const { return {re * s, im * s}; }
    bool operator==(const Gaussian& o) const { return re == o.re && im == o.im; }
};

inline int cmp(const Gaussian& a, const Gaussian& b) {
    if (int c = cmp(a.re, b.re)) return c;
    return cmp(a.im, b.im);
}

// ---------------------------------------------------------------------------
// Square-free decomposition helpers
// ---------------------------------------------------------------------------

// n > 0  ->  (s, d) with n = s^2 * d, d square-free.
inline std::pair<Int, Int> extract_square(Int n) {
    Int s = 1, d = 1;
    for (Int p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        for (int i = 0; i < e / 2; ++i) s *= p;
        if (e % 2) d *= p;
    }
    d *= n;  // leftover prime
    return {s, d};
}

inline Int gcd(Int a, Int b) { return boost::multiprecision::gcd(a, b); }

// ---------------------------------------------------------------------------
// TowerScalar
// ---------------------------------------------------------------------------

class TowerScalar;
using RadMap = std::map<Int, Gaussian>;  // flat element: D -> coefficient

int cmp(const RadMap& a, const RadMap& b);

struct TermKey {
    Int D = 1;                    // square-free positive integer under the radical
    std::vector<RadMap> nested;   // sorted; each a nonzero non-rational flat element

    bool operator<(const TermKey& o) const {
        if (int c = cmp(D, o.D)) return c < 0;
        if (nested.size() != o.nested.size()) return nested.size() < o.nested.size();
        for (size_t i = 0; i < nested.size(); ++i)
            if (int c = cmp(nested[i], o.nested[i])) return c < 0;
        return false;
    }
    bool operator==(const TermKey& o) const { return !(*this < o) && !(o < *this); }
    bool is_rational_key() const { return D == 1 && nested.empty(); }
};

inline int cmp(const RadMap& a, const RadMap& b) {
    auto ia = a.begin(), ib = b.begin();
    for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
        if (int c = cmp(ia->first, ib->first)) return c;
        if (int c = cmp(ia->second, ib->second)) return c;
    }
    if (ia != a.end()) return 1;
    if (ib != b.end()) return -1;
    return 0;
}

class TowerScalar {
public:
    using Terms = std::map<TermKey, Gaussian>;

    TowerScalar() = default;
    TowerScalar(long n) { if (n) terms_[TermKey{}] = Gaussian(n); }
    TowerScalar(const Int& n) {
        if (n != 0) terms_[TermKey{}] = Gaussian(Rational(n));
    }
    TowerScalar(Rational r) { if (r != 0) terms_[TermKey{}] = Gaussian(std::move(r)); }
    TowerScalar(Gaussian g) { if (!g.is_zero()) terms_[TermKey{}] = std::move(g); }

    static TowerScalar imaginary() { return TowerScalar(Gaussian(Rational(0), Rational(1))); }

    // sqrt of a nonzero integer, square factors extracted, sqrt(-d) = i*sqrt(d)
    static TowerScalar sqrt_int(const Int& d) {
        if (d == 0) return TowerScalar();
        auto [s, d0] = extract_square(boost::multiprecision::abs(d));
        Gaussian coeff = d < 0 ? Gaussian(Rational(0), Rational(s)) : Gaussian(Rational(s));
        TowerScalar r;
        r.terms_[TermKey{d0, {}}] = coeff;
        return r;
    }

    static TowerScalar sqrt_rational(const Rational& q) {
        if (q == 0) return TowerScalar();
        Int num = boost::multiprecision::numerator(q);
        Int den = boost::multiprecision::denominator(q);
        // sqrt(n/d) = sqrt(n*d)/d
        TowerScalar r = sqrt_int(num * den);
        return r * TowerScalar(Rational(1, den));
    }

    // sqrt of a flat (integer-radicand) tower element; rational inputs are
    // handled exactly, anything else becomes a nested radicand.
    static TowerScalar sqrt_scalar(const TowerScalar& s) {
        if (s.is_zero()) return TowerScalar();
        if (auto q = s.as_rational()) return sqrt_rational(*q);
        RadMap flat;
        for (auto& [k, g] : s.terms_) {
            if (!k.nested.empty())
                throw std::domain_error("sqrt of doubly nested radicand not supported");
            flat[k.D] = g;
        }
        TowerScalar r;
        TermKey key;
        key.nested.push_back(std::move(flat));
        r.terms_[key] = Gaussian(1);
        return r;
    }

    bool is_zero() const { return terms_.empty(); }

    std::optional<Rational> as_rational() const {
        if (terms_.empty()) return Rational(0);
        if (terms_.size() != 1) return std::nullopt;
        auto& [k, g] = *terms_.begin();
        if (!k.is_rational_key() || g.im != 0) return std::nullopt;
        return g.re;
    }

    std::optional<Int> as_integer() const {
        auto q = as_rational();
        if (!q || boost::multiprecision::denominator(*q) != 1) return std::nullopt;
        return boost::multiprecision::numerator(*q);
    }

    TowerScalar operator-() const {
        TowerScalar r;
        for (auto& [k, g] : terms_) r.terms_[k] = -g;
        return r;
    }

    void add_in_place(const TowerScalar& o) {
        for (auto& [k, g] : o.terms_) {
            auto it = terms_.find(k);
            if (it == terms_.end()) terms_[k] = g;
            else {
                it->second = it->second + g;
                if (it->second.is_zero()) terms_.erase(it);
            }
        }
    }

    TowerScalar operator+(const TowerScalar& o) const {
        TowerScalar r = *this;
        r.add_in_place(o);
        return r;
    }

    TowerScalar operator-(const TowerScalar& o) const { return *this + (-o); }

    TowerScalar operator*(const TowerScalar& o) const {
        if (terms_.size() == 1 && o.terms_.size() == 1) {
            auto& [ka, ga] = *terms_.begin();
            auto& [kb, gb] = *o.terms_.begin();
            if (ka.is_rational_key() && kb.is_rational_key())
                return TowerScalar(ga * gb);
        }
        TowerScalar r;
        for (auto& [ka, ga] : terms_)
            for (auto& [kb, gb] : o.terms_)
                r.add_term_product(ka, ga, kb, gb);
        return r;
    }

    TowerScalar inverse() const {
        if (terms_.empty()) throw std::domain_error("division by zero (TowerScalar)");
        // Base case: pure Gaussian rational.
        if (terms_.size() == 1 && terms_.begin()->first.is_rational_key())
            return TowerScalar(terms_.begin()->second.inverse());
        // Split off one radicand r:  a = b + sqrt(r) c, then
        // 1/a = conj / (b^2 - r c^2) with the norm in a strictly smaller field.
        TowerScalar b, c, rad;
        if (auto nu = find_nested()) {
            const RadMap& v = *nu;
            for (auto& [k, g] : terms_) {
                bool has = false;
                for (auto& n : k.nested) if (cmp(n, v) == 0) { has = true; break; }
                TermKey k2 = k;
                if (has) {
                    k2.nested.clear();
                    for (auto& n : k.nested) if (cmp(n, v) != 0) k2.nested.push_back(n);
                    c.terms_[k2] = g;
                } else {
                    b.terms_[k2] = g;
                }
            }
            for (auto& [D, g] : v) {
                if (!g.is_zero()) rad.terms_[TermKey{D, {}}] = g;
            }
        } else {
            Int p = largest_prime_factor();
            for (auto& [k, g] : terms_) {
                if (k.D % p == 0) {
                    TermKey k2 = k;
                    k2.D = k.D / p;
                    c.terms_[k2] = g;
                } else {
                    b.terms_[k] = g;
                }
            }
            rad = TowerScalar(Int(p));
        }
        TowerScalar conj = b - sqrt_mul(rad, c);
        TowerScalar norm = b * b - rad * (c * c);
        return conj * norm.inverse();
    }

    TowerScalar operator/(const TowerScalar& o) const { return *this * o.inverse(); }

    bool operator==(const TowerScalar& o) const { return terms_ == o.terms_; }
    bool operator!=(const TowerScalar& o) const { return !(*this == o); }

    bool operator<(const TowerScalar& o) const {
        auto ia = terms_.begin(), ib = o.terms_.begin();
        for (; ia != terms_.end() && ib != o.terms_.end(); ++ia, ++ib) {
            if (ia->first < ib->first) return true;
            if (ib->first < ia->first) return false;
            if (int c = cmp(ia->second, ib->second)) return c < 0;
        }
        return ia == terms_.end() && ib != o.terms_.end();
    }

    const Terms& terms() const { return terms_; }

    std::string str() const;

private:
    Terms terms_;

    const RadMap* find_nested() const {
        for (auto& [k, g] : terms_)
            if (!k.nested.empty()) return &k.nested.front();
        return nullptr;
    }

    Int largest_prime_factor() const {
        Int best = 1;
        for (auto& [k, g] : terms_) {
            Int n = k.D;
            for (Int p = 2; p * p <= n; ++p)
                while (n % p == 0) { n /= p; if (p > best) best = p; }
            if (n > best) best = n;
        }
        if (best == 1) throw std::logic_error("no radicand to split on");
        return best;
    }

    // multiply by sqrt-product structure only used internally by inverse()
    static TowerScalar sqrt_mul(const TowerScalar& rad, const TowerScalar& c) {
        // rad is either an integer (then sqrt via sqrt_int-like key) or a flat
        // element (then a nested radicand); returns sqrt(rad)*c.
        TowerScalar root;
        if (auto n = rad.as_integer()) root = sqrt_int(*n);
        else root = sqrt_scalar(rad);
        return root * c;
    }

    void accumulate(TermKey k, Gaussian g) {
        if (g.is_zero()) return;
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_.emplace(std::move(k), std::move(g));
        } else {
            it->second = it->second + g;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    void add_term_product(const TermKey& ka, const Gaussian& ga,
                          const TermKey& kb, const Gaussian& gb) {
        // flat-by-flat products need no temporary: the key and coefficient
        // are immediate
        if (ka.nested.empty() && kb.nested.empty()) {
            if (ka.D == 1 && kb.D == 1) {
                accumulate(TermKey{}, ga * gb);
                return;
            }
            Int g = gcd(ka.D, kb.D);
            TermKey k;
            k.D = (ka.D / g) * (kb.D / g);
            Gaussian coeff = ga * gb;
            if (g != 1) coeff = coeff.scaled(Rational(g));
            accumulate(std::move(k), std::move(coeff));
            return;
        }
        Int g = gcd(ka.D, kb.D);
        TermKey k;
        k.D = (ka.D / g) * (kb.D / g);
        Gaussian coeff = (ga * gb).scaled(Rational(g));
        // symmetric difference of nested radicands; coincident pairs square out
        std::vector<const RadMap*> common;
        {
            size_t i = 0, j = 0;
            while (i < ka.nested.size() && j < kb.nested.size()) {
                int c = cmp(ka.nested[i], kb.nested[j]);
                if (c < 0) k.nested.push_back(ka.nested[i++]);
                else if (c > 0) k.nested.push_back(kb.nested[j++]);
                else { common.push_back(&ka.nested[i]); ++i; ++j; }
            }
            while (i < ka.nested.size()) k.nested.push_back(ka.nested[i++]);
            while (j < kb.nested.size()) k.nested.push_back(kb.nested[j++]);
        }
        TowerScalar contrib;
        contrib.terms_[k] = coeff;
        for (const RadMap* v : common) {
            TowerScalar val;
            for (auto& [D, c2] : *v) val.terms_[TermKey{D, {}}] = c2;
            contrib = contrib * val;
        }
        for (auto& [kk, gg] : contrib.terms_) {
            auto it = terms_.find(kk);
            if (it == terms_.end()) { if (!gg.is_zero()) terms_[kk] = gg; }
            else {
                it->second = it->second + gg;
                if (it->second.is_zero()) terms_.erase(it);
            }
        }
    }
};

inline TowerScalar operator*(const Rational& q, const TowerScalar& s) {
    return TowerScalar(q) * s;
}

// ---------------------------------------------------------------------------
// Printing (canonical; the parser below round-trips it exactly)
// ---------------------------------------------------------------------------

namespace detail {

inline std::string rational_str(const Rational& q) {
    std::ostringstream os;
    os << boost::multiprecision::numerator(q);
    if (boost::multiprecision::denominator(q) != 1)
        os << '/' << boost::multiprecision::denominator(q);
    return os.str();
}

std::string radmap_str(const RadMap& m);

// one additive piece: coeff * [i] * [rD] * [r(..)]...
inline void append_piece(std::string& out, const Rational& coeff, bool imag,
                         const TermKey& key) {
    if (coeff == 0) return;
    Rational a = coeff < 0 ? Rational(-coeff) : coeff;
    if (out.empty()) {
        if (coeff < 0) out += "-";
    } else {
        out += coeff < 0 ? " - " : " + ";
    }
    std::vector<std::string> factors;
    bool unit_coeff = (a == 1);
    if (!unit_coeff) factors.push_back(rational_str(a));
    if (imag) factors.push_back("i");
    if (key.D != 1) factors.push_back("r" + key.D.str());
    for (auto& n : key.nested) factors.push_back("r(" + radmap_str(n) + ")");
    if (factors.empty()) factors.push_back("1");
    for (size_t i = 0; i < factors.size(); ++i) {
        if (i) out += "*";
        out += factors[i];
    }
}

inline std::string radmap_str(const RadMap& m) {
    std::string out;
    for (auto& [D, g] : m) {
        TermKey k{D, {}};
        append_piece(out, g.re, false, k);
        append_piece(out, g.im, true, k);
    }
    if (out.empty()) out = "0";
    return out;
}

}  // namespace detail

inline std::string TowerScalar::str() const {
    std::string out;
    for (auto& [k, g] : terms_) {
        detail::append_piece(out, g.re, false, k);
        detail::append_piece(out, g.im, true, k);
    }
    if (out.empty()) out = "0";
    return out;
}

// ---------------------------------------------------------------------------
// Parsing of scalar literals:  signed rationals p/q, `i`, `r<d>`, `r(<expr>)`,
// combined with + - * and parentheses. Whitespace insignificant.
// ---------------------------------------------------------------------------

class ScalarParser {
public:
    explicit ScalarParser(std::string_view s) : s_(s) {}

    TowerScalar parse() {
        TowerScalar v = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing input");
        return v;
    }

    struct Error : std::runtime_error {
        size_t column;
        Error(const std::string& msg, size_t col)
            : std::runtime_error(msg + " at column " + std::to_string(col + 1)), column(col) {}
    };

private:
    std::string_view s_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw Error(msg, pos_); }

    void skip_ws() { while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) ++pos_; }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
        return false;
    }

    TowerScalar expr() {
        bool neg = false;
        skip_ws();
        if (eat('-')) neg = true;
        else eat('+');
        TowerScalar v = term();
        if (neg) v = -v;
        for (;;) {
            skip_ws();
            if (eat('+')) v = v + term();
            else if (eat('-')) v = v - term();
            else break;
        }
        return v;
    }

    TowerScalar term() {
        TowerScalar v = factor();
        while (eat('*')) v = v * factor();
        return v;
    }

    TowerScalar factor() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            TowerScalar v = expr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (c == 'i') {
            ++pos_;
            return TowerScalar::imaginary();
        }
        if (c == 'r') {
            ++pos_;
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == '(') {
                ++pos_;
                TowerScalar inner = expr();
                if (!eat(')')) fail("expected ')'");
                return TowerScalar::sqrt_scalar(inner);
            }
            Int d = integer();
            return TowerScalar::sqrt_int(d);
        }
        if (std::isdigit((unsigned char)c)) {
            Int num = integer();
            if (eat('/')) {
                Int den = integer();
                if (den == 0) fail("zero denominator");
                return TowerScalar(Rational(num, den));
            }
            return TowerScalar(Rational(num));
        }
        fail("unexpected character");
    }

    Int integer() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
        if (pos_ == start) fail("expected number");
        return Int(std::string(s_.substr(start, pos_ - start)));
    }
};

inline TowerScalar parse_scalar(std::string_view s) { return ScalarParser(s).parse(); }

// ---------------------------------------------------------------------------
// FieldTower: bookkeeping of the radicands in use (for reports / JSON).
// The scalar representation itself is tower-free and fully canonical, so the
// tower carries no arithmetic state.
// ---------------------------------------------------------------------------

struct FieldTower {
    std::set<Int> radicands;  // square-free integers > 1 (absolute values; i is implicit)

    void merge(const FieldTower& o) { radicands.insert(o.radicands.begin(), o.radicands.end()); }

    void absorb(const TowerScalar& s) {
        for (auto& [k, g] : s.terms()) {
            if (k.D != 1) add_reduced(k.D);
            for (auto& n : k.nested)
                for (auto& [D, c] : n)
                    if (D != 1) add_reduced(D);
        }
    }

    // Basis reduction over GF(2) on prime supports: a radicand whose prime
    // support is a product of existing ones (mod squares) adds nothing.
    void add_reduced(const Int& d) {
        Int cur = d;
        for (auto& r : radicands) {
            Int g = locuslab::gcd(cur, r);
            if (g > 1) {
                Int prod = (cur / g) * (r / g);
                auto [s, sf] = extract_square(prod);
                (void)s;
                if (sf < cur) cur = sf;
            }
        }
        if (cur > 1) radicands.insert(cur);
    }
};

// adjoin_sqrt: returns the (possibly extended) tower and the scalar sqrt(d).
inline std::pair<FieldTower, TowerScalar> adjoin_sqrt(FieldTower tower, const Int& d) {
    if (d == 0) throw std::domain_error("adjoin_sqrt(0)");
    TowerScalar s = TowerScalar::sqrt_int(d);
    tower.absorb(s);
    return {std::move(tower), std::move(s)};
}

inline std::pair<FieldTower, TowerScalar> adjoin_sqrt(FieldTower tower, const Rational& q) {
    if (q == 0) throw std::domain_error("adjoin_sqrt(0)");
    TowerScalar s = TowerScalar::sqrt_rational(q);
    tower.absorb(s);
    return {std::move(tower), std::move(s)};
}

}  // namespace locuslab
