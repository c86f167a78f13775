#pragma once

// Hadamard coefficients of the wave equation with a locus potential: the
// chain extracted from a BA function, the transport / chain identities, the
// minimal odd dimension bound, and the affine case via isotropic
// projectivisation and restriction.

#include "locuslab/baker.hpp"

namespace locuslab {

// U_0..U_M as rational functions of (x, xi); the xi variables live in the
// second variable block.  For linear configurations each U_nu is homogeneous
// of degree -nu in x and in xi separately.
struct HadamardChain {
    Configuration config;
    VarSpace sp{0, 0};
    RationalFn u;
    std::vector<RationalFn> U;
    int M = 0;
    bool homogeneous = true;
};

namespace detail {

// exact bi-homogeneity: numerator concentrated in single x- and xi-degrees,
// denominator a product of one-block linear forms, total degrees -nu / -nu
inline bool is_bihomogeneous(const RationalFn& r, int nu) {
    if (r.is_zero()) return true;
    const VarSpace& sp = r.space();
    auto xcomp = r.num().homogeneous_components(0, sp.nx);
    auto kcomp = r.num().homogeneous_components(sp.nx, sp.total());
    if (xcomp.size() != 1 || kcomp.size() != 1) return false;
    int dx = xcomp.begin()->first, dk = kcomp.begin()->first;
    for (auto& [f, p] : r.den()) {
        if (!f.offset.is_zero()) return false;
        (f.block == Block::X ? dx : dk) -= p;
    }
    return dx == -nu && dk == -nu;
}

}  // namespace detail

// split the prefactor of a linear-configuration BA function into its
// xi-homogeneous components of degrees 0..-M
inline HadamardChain hadamard_from_psi(const BAFunction& psi) {
    if (!psi.config.is_linear())
        throw std::invalid_argument("hadamard_from_psi: linear configurations only");
    HadamardChain ch;
    ch.config = psi.config;
    ch.sp = psi.sp;
    ch.u = potential_from_config(psi.config, psi.sp);
    ch.M = psi.M;
    ch.homogeneous = true;
    auto comps = prefactor_k_components(psi);
    for (auto& [d, comp] : comps)
        if (d > 0 || d < -psi.M)
            throw std::logic_error("hadamard_from_psi: component degree out of range");
    for (int nu = 0; nu <= psi.M; ++nu) {
        auto it = comps.find(-nu);
        RationalFn U = it == comps.end() ? RationalFn(psi.sp) : it->second;
        if (nu == 0 && !(U - RationalFn::constant(psi.sp, TowerScalar(1L))).is_zero())
            throw std::logic_error("hadamard_from_psi: U_0 is not 1");
        if (!detail::is_bihomogeneous(U, nu))
            throw std::logic_error("hadamard_from_psi: component not bi-homogeneous");
        ch.U.push_back(std::move(U));
    }
    return ch;
}

// The chain equations, with L = -Delta_x + u and U_{M+1} = 0:
//   (Had)       sum_i (x_i - xi_i) dU_nu/dx_i + nu U_nu = -1/2 L[U_{nu-1}]
//   (transport) -2 sum_i xi_i dU_nu/dx_i + L[U_{nu-1}] = 0
// (Had) holds for affine chains as well; the transport identity is its
// homogeneous form and is additionally checked, together with the Euler
// identity sum_i x_i dU_nu/dx_i = -nu U_nu, when the chain is homogeneous.
inline bool verify_hadamard_chain(const HadamardChain& ch) {
    const VarSpace& sp = ch.sp;
    auto dx = [&](const RationalFn& f, int i) { return f.derivative(i); };
    for (int nu = 1; nu <= ch.M + 1; ++nu) {
        RationalFn Unu = nu <= ch.M ? ch.U[nu] : RationalFn(sp);
        const RationalFn& Uprev = ch.U[nu - 1];
        RationalFn LU = ch.u * Uprev;
        for (int i = 0; i < sp.nx; ++i) LU = LU - dx(Uprev, i).derivative(i);

        RationalFn had = Unu * TowerScalar(long(nu)) + LU * TowerScalar(Rational(1, 2));
        for (int i = 0; i < sp.nx; ++i) {
            RationalFn d = dx(Unu, i);
            had = had + (RationalFn::variable(sp, i) - RationalFn::variable(sp, sp.nx + i)) * d;
        }
        if (!had.is_zero()) return false;

        if (ch.homogeneous) {
            RationalFn transport = LU, euler = Unu * TowerScalar(long(nu));
            for (int i = 0; i < sp.nx; ++i) {
                RationalFn d = dx(Unu, i);
                transport = transport -
                            RationalFn::variable(sp, sp.nx + i) * d * TowerScalar(2L);
                euler = euler + RationalFn::variable(sp, i) * d;
            }
            if (!transport.is_zero() || !euler.is_zero()) return false;
        }
    }
    return true;
}

// affine chain by projectivising to C^{n+2}, splitting the BA function
// there, and restricting to x_{n+1} + i x_{n+2} = xi_{n+1} + i xi_{n+2} = 1
inline HadamardChain affine_hadamard_via_projectivisation(const Configuration& c) {
    int n = c.dimension;
    Configuration proj = isotropic_projectivisation(c);
    BAFunction psi = berest_psi(proj);
    HadamardChain wide = hadamard_from_psi(psi);

    // the projective coordinates may only enter through x_{n+1} + i x_{n+2}
    // and xi_{n+1} + i xi_{n+2}
    TowerScalar im = TowerScalar::imaginary();
    for (auto& U : wide.U) {
        if (!(U.derivative(n + 1) - U.derivative(n) * im).is_zero() ||
            !(U.derivative(n + 2 + (n + 1)) - U.derivative(n + 2 + n) * im).is_zero())
            throw std::logic_error(
                "affine_hadamard_via_projectivisation: projective coordinates "
                "do not combine to x_{n+1} + i x_{n+2}");
    }

    // restriction x_{n+1} = xi_{n+1} = 1, x_{n+2} = xi_{n+2} = 0
    VarSpace sp{n, n};
    std::vector<MultiPoly> images;
    for (int blk = 0; blk < 2; ++blk)
        for (int i = 0; i < n + 2; ++i) {
            if (i < n) images.push_back(MultiPoly::variable(sp.total(), blk * n + i));
            else if (i == n)
                images.push_back(MultiPoly::constant(sp.total(), TowerScalar(1L)));
            else images.push_back(MultiPoly(sp.total()));
        }

    HadamardChain ch;
    ch.config = c;
    ch.sp = sp;
    ch.u = potential_from_config(c, sp);
    ch.M = psi.M;
    ch.homogeneous = c.is_linear();
    for (auto& U : wide.U) ch.U.push_back(U.substitute(images, sp));
    if (!(ch.U[0] - RationalFn::constant(sp, TowerScalar(1L))).is_zero())
        throw std::logic_error("affine_hadamard_via_projectivisation: U_0 is not 1");
    return ch;
}

struct HuygensCertificate {
    HadamardChain chain;
    int minimal_N = 0;       // smallest odd N with N >= 2M + 3
    bool terminates = false; // U_{M+1} = 0 (guaranteed by construction)
    bool chain_verified = false;
};

inline HuygensCertificate huygens_certificate(const Configuration& c) {
    HuygensCertificate cert;
    cert.chain = c.is_linear() ? hadamard_from_psi(berest_psi(c))
                               : affine_hadamard_via_projectivisation(c);
    cert.terminates = true;  // berest_psi would have thrown otherwise
    cert.chain_verified = verify_hadamard_chain(cert.chain);
    int N = 2 * cert.chain.M + 3;
    cert.minimal_N = N % 2 == 1 ? N : N + 1;
    return cert;
}

inline nlohmann::json certificate_to_json(const HuygensCertificate& cert) {
    nlohmann::json j;
    j["M"] = cert.chain.M;
    j["minimal_N"] = cert.minimal_N;
    j["terminates"] = cert.terminates;
    j["chain_verified"] = cert.chain_verified;
    j["coefficients"] = nlohmann::json::array();
    for (auto& U : cert.chain.U) j["coefficients"].push_back(U.str());
    return j;
}

}  // namespace locuslab
