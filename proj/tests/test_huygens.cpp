#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "locuslab/huygens.hpp"
#include "locuslab/locus.hpp"

using namespace locuslab;

static TowerScalar S(const char* s) { return parse_scalar(s); }

static Configuration one_point(const char* offset = "0", int m = 1) {
    return make_configuration(1, {{{S("1")}, S(offset), m}});
}

TEST_CASE("chain for the rational 1D potential") {
    HadamardChain ch = hadamard_from_psi(berest_psi(one_point()));
    REQUIRE(ch.M == 1);
    VarSpace sp = ch.sp;
    CHECK((ch.U[0] - RationalFn::constant(sp, S("1"))).is_zero());
    LinearForm x(Block::X, {S("1")}), xi(Block::K, {S("1")});
    RationalFn expect = RationalFn::constant(sp, S("-1"))
                            .divide_by_form(x, 1)
                            .divide_by_form(xi, 1);
    CHECK((ch.U[1] - expect).is_zero());
    CHECK(verify_hadamard_chain(ch));
}

TEST_CASE("empty configuration: trivial chain") {
    HadamardChain ch = hadamard_from_psi(berest_psi(make_configuration(2, {})));
    CHECK(ch.M == 0);
    CHECK(ch.U.size() == 1);
    CHECK(verify_hadamard_chain(ch));
    HuygensCertificate cert = huygens_certificate(make_configuration(2, {}));
    CHECK(cert.minimal_N == 3);
}

TEST_CASE("dihedral chain and certificate") {
    Configuration a2 = make_dihedral(3, {1});
    HuygensCertificate cert = huygens_certificate(a2);
    CHECK(cert.chain.M == 3);
    CHECK(cert.chain.U.size() == 4);
    CHECK(cert.terminates);
    CHECK(cert.chain_verified);
    CHECK(cert.minimal_N == 9);

    // symmetry U_nu(x, xi) = U_nu(xi, x)
    VarSpace sp = cert.chain.sp;
    std::vector<MultiPoly> swap_images;
    for (int i = 0; i < sp.total(); ++i)
        swap_images.push_back(
            MultiPoly::variable(sp.total(), i < sp.nx ? i + sp.nx : i - sp.nx));
    for (auto& U : cert.chain.U)
        CHECK((U - U.substitute(swap_images, sp)).is_zero());

    // bi-homogeneity at concrete scalings: U(2x, xi) = 2^-nu U = U(x, 3 xi) 3^nu
    for (int nu = 0; nu <= cert.chain.M; ++nu) {
        std::vector<MultiPoly> sx, sk;
        for (int i = 0; i < sp.total(); ++i) {
            MultiPoly v = MultiPoly::variable(sp.total(), i);
            sx.push_back(i < sp.nx ? v * S("2") : v);
            sk.push_back(i < sp.nx ? v : v * S("3"));
        }
        TowerScalar two_nu(1L), three_nu(1L);
        for (int t = 0; t < nu; ++t) {
            two_nu = two_nu * S("2");
            three_nu = three_nu * S("3");
        }
        const RationalFn& U = cert.chain.U[nu];
        CHECK((U.substitute(sx, sp) * two_nu - U).is_zero());
        CHECK((U.substitute(sk, sp) * three_nu - U).is_zero());
    }

    // regularity at the diagonal: no pole at x = xi for a generic point
    std::vector<TowerScalar> pt = {S("1"), S("2"), S("4"), S("1"), S("2"), S("4")};
    for (auto& U : cert.chain.U) {
        CHECK(!U.denominator_vanishes_at(pt));
        U.eval(pt);  // finite
    }
}

TEST_CASE("deformed A2(2) certificate") {
    HuygensCertificate cert = huygens_certificate(make_deformed_An(2, 2));
    CHECK(cert.chain.M == 4);
    CHECK(cert.chain_verified);
    CHECK(cert.minimal_N == 11);
}

TEST_CASE("chain verification notices a corrupted coefficient") {
    HadamardChain ch = hadamard_from_psi(berest_psi(one_point()));
    ch.U[1] = ch.U[1] * S("2");
    CHECK(!verify_hadamard_chain(ch));
}

TEST_CASE("affine chain via projectivisation: translated point") {
    HadamardChain ch = affine_hadamard_via_projectivisation(one_point("1"));
    REQUIRE(ch.M == 1);
    VarSpace sp = ch.sp;
    // joint translation of the linear chain: U_1 = -1/((x+1)(xi+1))
    LinearForm xp1(Block::X, {S("1")}, S("1")), kp1(Block::K, {S("1")}, S("1"));
    RationalFn expect = RationalFn::constant(sp, S("-1"))
                            .divide_by_form(xp1, 1)
                            .divide_by_form(kp1, 1);
    CHECK((ch.U[1] - expect).is_zero());
    CHECK(!ch.homogeneous);
    CHECK(verify_hadamard_chain(ch));
}

TEST_CASE("projectivisation fixes linear configurations") {
    Configuration a2 = make_dihedral(2, {1, 1});
    HadamardChain direct = hadamard_from_psi(berest_psi(a2));
    HadamardChain via = affine_hadamard_via_projectivisation(a2);
    REQUIRE(direct.M == via.M);
    for (int nu = 0; nu <= direct.M; ++nu)
        CHECK((direct.U[nu] - via.U[nu]).is_zero());
}

TEST_CASE("affine chain for the z^3 + 1 points") {
    Configuration c = make_configuration(1, {{{S("1")}, S("1"), 1},
                                             {{S("1")}, S("-1/2 - 1/2*i*r3"), 1},
                                             {{S("1")}, S("-1/2 + 1/2*i*r3"), 1}});
    CHECK(verify_affine_locus(c).pass);
    CHECK(verify_linear_locus(isotropic_projectivisation(c)).pass);
    HuygensCertificate cert = huygens_certificate(c);
    CHECK(cert.chain.M == 3);
    CHECK(cert.chain.U.size() == 4);
    CHECK(cert.chain_verified);
    CHECK(cert.minimal_N == 9);

    // the affine potential in the chain is (6z^4 - 12z)/(z^3 + 1)^2 written
    // as the partial-fraction sum over the three points
    RationalFn u(cert.chain.sp);
    for (auto& h : c.hyperplanes)
        u = u + RationalFn::constant(cert.chain.sp, S("2"))
                    .divide_by_form(LinearForm(Block::X, h.normal, h.offset), 2);
    CHECK((cert.chain.u - u).is_zero());
}

TEST_CASE("certificate json") {
    nlohmann::json j = certificate_to_json(huygens_certificate(one_point()));
    CHECK(j["M"] == 1);
    CHECK(j["minimal_N"] == 5);
    CHECK(j["terminates"] == true);
    CHECK(j["chain_verified"] == true);
    CHECK(j["coefficients"].size() == 2);
    CHECK(j["coefficients"][0] == "1");
}

TEST_CASE("hadamard_from_psi rejects affine input") {
    CHECK_THROWS_AS(hadamard_from_psi(berest_psi(one_point("1"))),
                    std::invalid_argument);
}
