#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "locuslab/poly.hpp"

using namespace locuslab;

static TowerScalar S(const char* s) { return parse_scalar(s); }

static MultiPoly X(int nv, int i) { return MultiPoly::variable(nv, i); }

TEST_CASE("arithmetic and derivative") {
    // d/dx1 (x1^2 x2) = 2 x1 x2
    MultiPoly p = X(2, 0) * X(2, 0) * X(2, 1);
    CHECK(p.derivative(0) == X(2, 0) * X(2, 1) * S("2"));
    CHECK(p.derivative(1) == X(2, 0) * X(2, 0));
    CHECK((p - p).is_zero());

    MultiPoly q = (X(2, 0) + X(2, 1)) * (X(2, 0) - X(2, 1));
    CHECK(q == X(2, 0) * X(2, 0) - X(2, 1) * X(2, 1));
}

TEST_CASE("homogeneous components") {
    // x1^2 + x2 splits into degree-1 part x2 and degree-2 part x1^2
    MultiPoly p = X(2, 0) * X(2, 0) + X(2, 1);
    auto comps = p.homogeneous_components(0, 2);
    CHECK(comps.size() == 2);
    CHECK(comps.at(1) == X(2, 1));
    CHECK(comps.at(2) == X(2, 0) * X(2, 0));

    MultiPoly five = MultiPoly::constant(1, S("5"));
    auto c5 = five.homogeneous_components(0, 1);
    CHECK(c5.size() == 1);
    CHECK(c5.at(0) == five);

    // cubic k1 k2 (k1 + k2) plus linear k1, split over the k-block of (x,k) space
    VarSpace sp{2, 2};
    MultiPoly k1 = X(4, 2), k2 = X(4, 3);
    MultiPoly A = k1 * k2 * (k1 + k2);
    auto parts = (A + k1).homogeneous_components(sp.nx, sp.total());
    CHECK(parts.size() == 2);
    CHECK(parts.at(1) == k1);
    CHECK(parts.at(3) == A);
    MultiPoly sum(4);
    for (auto& [d, part] : parts) sum = sum + part;
    CHECK(sum == A + k1);
}

TEST_CASE("substitution and evaluation") {
    // p(x1, x2) = x1^2 + x2 under x1 -> y1 + y2, x2 -> 2 y1
    MultiPoly p = X(2, 0) * X(2, 0) + X(2, 1);
    std::vector<MultiPoly> images = {X(2, 0) + X(2, 1), X(2, 0) * S("2")};
    MultiPoly q = p.substitute(images, 2);
    MultiPoly expect = (X(2, 0) + X(2, 1)) * (X(2, 0) + X(2, 1)) + X(2, 0) * S("2");
    CHECK(q == expect);

    CHECK(p.eval({S("1/2"), S("r2")}) == S("1/4") + S("r2"));
}

TEST_CASE("mixed partial derivatives commute") {
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> deg(0, 3), coef(-5, 5), var(0, 2);
    for (int trial = 0; trial < 25; ++trial) {
        MultiPoly p(3);
        for (int t = 0; t < 6; ++t) {
            Exps e = {deg(rng), deg(rng), deg(rng)};
            p.add_term(e, TowerScalar(long(coef(rng))));
        }
        int i = var(rng), j = var(rng);
        CHECK(p.derivative(i).derivative(j) == p.derivative(j).derivative(i));
    }
}

TEST_CASE("printing") {
    VarSpace sp{2, 1};
    MultiPoly p = X(3, 0) * X(3, 0) * S("1/2") + X(3, 2) * S("-1") +
                  MultiPoly::constant(3, S("r2"));
    CHECK(p.str(xk_names(sp)) == "r2 - k1 + 1/2*x1^2");
}
