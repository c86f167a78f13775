#pragma once

// High-precision numeric backend: ~110 decimal digits (365 bits), enough for
// the 256-bit requirements of the trigonometric root finder.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "locuslab/scalar.hpp"

namespace locuslab {

using BigFloat = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<110, boost::multiprecision::backends::digit_base_10>>;

inline constexpr int kBigFloatBits = 365;

struct CF {
    BigFloat re, im;

    CF() = default;
    CF(BigFloat r) : re(std::move(r)) {}
    CF(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}
    CF(long n) : re(n) {}

    CF operator-() const { return {-re, -im}; }
    CF operator+(const CF& o) const { return {re + o.re, im + o.im}; }
    CF operator-(const CF& o) const { return {re - o.re, im - o.im}; }
    CF operator*(const CF& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    CF operator/(const CF& o) const {
        BigFloat n = o.re * o.re + o.im * o.im;
        return {(re * o.re + im * o.im) / n, (im * o.re - re * o.im) / n};
    }
    CF& operator+=(const CF& o) { re += o.re; im += o.im; return *this; }
    CF& operator-=(const CF& o) { re -= o.re; im -= o.im; return *this; }
    CF& operator*=(const CF& o) { *this = *this * o; return *this; }

    BigFloat abs() const { return boost::multiprecision::sqrt(re * re + im * im); }
};

inline CF sqrt(const CF& z) {
    using boost::multiprecision::sqrt;
    BigFloat r = z.abs();
    if (r == 0) return CF();
    BigFloat re = sqrt((r + z.re) / 2);
    BigFloat im = sqrt((r - z.re) / 2);
    if (z.im < 0) im = -im;
    return {re, im};
}

inline BigFloat to_bigfloat(const Rational& q) {
    return BigFloat(boost::multiprecision::numerator(q)) /
           BigFloat(boost::multiprecision::denominator(q));
}

// Correctly-rounded numeric image of an exact scalar.
inline CF embed_complex(const TowerScalar& s, int precision_bits = 256) {
    if (precision_bits < 53 || precision_bits > kBigFloatBits)
        throw std::domain_error("embed_complex: unsupported precision");
    using boost::multiprecision::sqrt;
    CF total;
    for (auto& [key, g] : s.terms()) {
        CF v{to_bigfloat(g.re), to_bigfloat(g.im)};
        v *= CF(sqrt(BigFloat(key.D)));
        for (auto& nmap : key.nested) {
            CF inner;
            for (auto& [D, c] : nmap) {
                CF t{to_bigfloat(c.re), to_bigfloat(c.im)};
                inner += t * CF(sqrt(BigFloat(D)));
            }
            v *= locuslab::sqrt(inner);
        }
        total += v;
    }
    return total;
}

}  // namespace locuslab
