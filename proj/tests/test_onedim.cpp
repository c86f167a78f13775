#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "locuslab/baker.hpp"
#include "locuslab/onedim.hpp"

using namespace locuslab;

static TowerScalar S(const char* s) { return parse_scalar(s); }

static UniPoly P(std::initializer_list<const char*> coeffs) {
    UniPoly p;
    for (auto c : coeffs) p.c.push_back(S(c));
    p.trim();
    return p;
}

TEST_CASE("univariate polynomial arithmetic") {
    UniPoly z = UniPoly::z();
    UniPoly f = z * z * z + UniPoly(S("1"));  // z^3 + 1
    UniPoly g = z + UniPoly(S("1"));
    auto [q, r] = f.divrem(g);
    CHECK(r.is_zero());
    CHECK(q == P({"1", "-1", "1"}));
    CHECK((q * g) == f);

    CHECK(gcd_poly(f, g) == g);                 // z + 1 divides z^3 + 1
    CHECK(gcd_poly(f, z + UniPoly(S("2"))).degree() == 0);

    CHECK(f.derivative() == P({"0", "0", "3"}));
    CHECK(P({"0", "0", "3"}).antiderivative() == z * z * z);
    CHECK((f.eval(S("i")) - S("1 - i")).is_zero());
    CHECK(f.str() == "z^3 + 1");

    UniFraction h(UniPoly(S("2")), z * z);
    CHECK(h.derivative() == UniFraction(UniPoly(S("-4")), z * z * z));
    CHECK((h - h).is_zero());
    CHECK(h.str() == "2/z^2");
}

TEST_CASE("adler_moser chains and potentials") {
    AdlerMoserData d1 = adler_moser(1);
    CHECK(d1.W == UniPoly::z());
    CHECK(d1.u == UniFraction(UniPoly(S("2")), UniPoly::z() * UniPoly::z()));

    // level 2: chi_2 = z^3/6 + c2, W = z^3/3 - c2, u = (6z^4 - 12 tau z)/(z^3 + tau)^2
    // with tau = -3 c2
    for (const char* c2s : {"0", "-1/3", "5"}) {
        TowerScalar c2 = S(c2s), tau = S("-3") * c2;
        AdlerMoserData d2 = adler_moser(2, {c2});
        UniPoly z = UniPoly::z();
        CHECK(d2.chain[1] == z * z * z * S("1/6") + UniPoly(c2));
        UniPoly den = z * z * z + UniPoly(tau);
        UniPoly num = z * z * z * z * S("6") - z * S("12") * tau;
        CHECK(d2.u == UniFraction(num, den * den));
    }

    // level 3 with zero constants collapses to the confluent 12/z^2
    AdlerMoserData d3 = adler_moser(3, {S("0"), S("0")});
    CHECK(d3.W.degree() == 6);
    CHECK(d3.u == UniFraction(UniPoly(S("12")), UniPoly::z() * UniPoly::z()));

    CHECK_THROWS_AS(adler_moser(0), std::invalid_argument);
    CHECK_THROWS_AS(adler_moser(2, {}), std::invalid_argument);
}

TEST_CASE("adler_moser pole configurations satisfy the 1D locus") {
    // tau = 1: simple poles at the roots of z^3 + 1
    std::vector<std::pair<TowerScalar, int>> pts = {
        {S("-1"), 1}, {S("1/2 + 1/2*i*r3"), 1}, {S("1/2 - 1/2*i*r3"), 1}};
    CHECK(verify_1d_locus(pts).pass);

    AdlerMoserData d2 = adler_moser(2, {S("-1/3")});
    CHECK(potential_from_points(pts) == d2.u);

    // tau = 0: one pole of multiplicity 2
    CHECK(verify_1d_locus({{S("0"), 2}}).pass);
    CHECK(potential_from_points({{S("0"), 2}}) ==
          adler_moser(2, {S("0")}).u);

    // non-example: {0, 1} with simple poles
    CHECK(!verify_1d_locus({{S("0"), 1}, {S("1"), 1}}).pass);
}

TEST_CASE("ba_from_xi solves the tail conditions") {
    UniPoly z = UniPoly::z();

    XiData x1 = ba_from_xi(1, {S("0")});
    CHECK(x1.a[0] == UniFraction(UniPoly(S("-1")), z));
    CHECK(x1.u == UniFraction(UniPoly(S("2")), z * z));
    CHECK(x1.schrodinger_verified);

    // generic xi_1 is a translation
    XiData xt = ba_from_xi(1, {S("7")});
    UniPoly sh = z + UniPoly(S("7"));
    CHECK(xt.a[0] == UniFraction(UniPoly(S("-1")), sh));
    CHECK(xt.u == UniFraction(UniPoly(S("2")), sh * sh));

    XiData x2 = ba_from_xi(2, {S("0"), S("0")});
    CHECK(x2.u == UniFraction(UniPoly(S("6")), z * z));
    CHECK(x2.schrodinger_verified);

    // a higher level with generic parameters still solves Schrodinger exactly
    XiData x3 = ba_from_xi(3, {S("1"), S("i"), S("-2")});
    CHECK(x3.schrodinger_verified);
}

TEST_CASE("xi family covers the tau family") {
    // (xi_1, xi_2) = (0, -tau/3) reproduces adler_moser(2, c2 = -tau/3)
    for (const char* taus : {"0", "1", "-2"}) {
        TowerScalar c2 = S(taus) * S("-1/3");
        CHECK(ba_from_xi(2, {S("0"), c2}).u == adler_moser(2, {c2}).u);
    }
}

TEST_CASE("wronskian pole data feeds the Berest iteration") {
    // the tau = 1 pole configuration admits a BA function (Darboux ladder)
    std::vector<std::pair<TowerScalar, int>> pts = {
        {S("-1"), 1}, {S("1/2 + 1/2*i*r3"), 1}, {S("1/2 - 1/2*i*r3"), 1}};
    Configuration c = points_configuration(pts);
    BAFunction psi = berest_psi(c);
    CHECK(psi.M == 3);
    CHECK(verify_eigen(psi, potential_from_config(c, psi.sp)));
}

TEST_CASE("berest_lutsenko: single cosine") {
    // W = cos(phi): one line at phi = pi/2
    TrigWronskianData d = berest_lutsenko({1}, {CF(0L)});
    REQUIRE(d.lines.size() == 1);
    CHECK(d.lines[0].mult == 1);
    CHECK(boost::multiprecision::abs(d.lines[0].phi.re - big_pi() / 2) <
          BigFloat("1e-30"));
    CHECK(boost::multiprecision::abs(d.lines[0].phi.im) < BigFloat("1e-30"));
    CHECK(d.triangular);
}

TEST_CASE("berest_lutsenko: cos(2 phi) gives the perpendicular pair") {
    TrigWronskianData d = berest_lutsenko({2}, {CF(0L)});
    REQUIRE(d.lines.size() == 2);
    CHECK(boost::multiprecision::abs(d.lines[0].phi.re - big_pi() / 4) <
          BigFloat("1e-30"));
    CHECK(boost::multiprecision::abs(d.lines[1].phi.re - 3 * big_pi() / 4) <
          BigFloat("1e-30"));
    CHECK(d.lines[0].mult == 1);
    CHECK(d.lines[1].mult == 1);
    CHECK(d.max_locus_residual < BigFloat("1e-25"));
}

TEST_CASE("berest_lutsenko: two cosines, generic phases") {
    TrigWronskianData d = berest_lutsenko({1, 2}, {CF(BigFloat("0.3")),
                                                   CF(BigFloat("0.7"))});
    int total = 0;
    for (auto& ln : d.lines) {
        total += ln.mult * (ln.mult + 1) / 2;
        CHECK((ln.mult == 1 || ln.mult == 2));
    }
    CHECK(total == 3);  // = deg of the Wronskian in e^{2 i phi}
    CHECK(d.triangular);
    CHECK(d.max_locus_residual < BigFloat("1e-25"));
    CHECK(trig_locus_residual(d.lines) < BigFloat("1e-25"));

    // complex phases stay within the complexified family
    TrigWronskianData dc = berest_lutsenko(
        {1, 2}, {CF(BigFloat("0.2"), BigFloat("0.1")), CF(BigFloat("-0.4"))});
    CHECK(dc.triangular);
    CHECK(dc.max_locus_residual < BigFloat("1e-25"));
}

TEST_CASE("trig and planar residuals vanish together on dihedral angles") {
    // I2(3) angles 0, pi/3, 2pi/3 with multiplicity 1: exact locus holds,
    // both numeric residual families agree
    std::vector<TrigLine> lines;
    for (int j = 0; j < 3; ++j) {
        BigFloat phi = BigFloat(j) * big_pi() / 3;
        CF v = {boost::multiprecision::cos(2 * phi),
                boost::multiprecision::sin(2 * phi)};
        lines.push_back({v, CF(phi), 1});
    }
    CHECK(planar_locus_residual(lines) < BigFloat("1e-100"));
    CHECK(trig_locus_residual(lines) < BigFloat("1e-100"));

    // perturb one angle: both residuals become visibly nonzero
    lines[2].phi.re += BigFloat("0.05");
    BigFloat p2 = 2 * lines[2].phi.re;
    lines[2].v = {boost::multiprecision::cos(p2), boost::multiprecision::sin(p2)};
    CHECK(planar_locus_residual(lines) > BigFloat("1e-3"));
    CHECK(trig_locus_residual(lines) > BigFloat("1e-3"));
}

TEST_CASE("berest_lutsenko validation and json") {
    CHECK_THROWS_AS(berest_lutsenko({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(berest_lutsenko({2, 1}, {CF(0L), CF(0L)}), std::invalid_argument);
    CHECK_THROWS_AS(berest_lutsenko({1}, {CF(0L)}, 1000), std::domain_error);

    TrigWronskianData d = berest_lutsenko({2}, {CF(0L)});
    nlohmann::json j = trig_to_json(d);
    CHECK(j["lines"].size() == 2);
    CHECK(j["triangular"] == true);
    CHECK(j["precision_bits"] == 256);
}
