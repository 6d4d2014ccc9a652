#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "dicubic/systems.hpp"
#include "doctest.h"

using namespace dicubic;

static CubicPairSystem ones(int l, int m, int n) {
    return CubicPairSystem::validate(std::vector<i64>(l, 1), std::vector<i64>(l, 1),
                                     std::vector<i64>(m, 1), std::vector<i64>(n, 1));
}

TEST_CASE("validate accepts the all-ones (3,4,4) system") {
    CubicPairSystem sys = ones(3, 4, 4);
    CHECK(sys.s() == 11);
    CHECK(sys.q0star() == 7);
    CHECK(sys.eta() == doctest::Approx(0.1));
    CHECK(sys.nu() == doctest::Approx(0.25));
}

TEST_CASE("validate rejects zero coefficients") {
    CHECK_THROWS_AS(CubicPairSystem::validate({1, 1, 1}, {1, 1, 1}, {1, 0, 1, 1},
                                              {1, 1, 1, 1}),
                    ZeroCoefficient);
}

TEST_CASE("validate rejects m < n") {
    CHECK_THROWS_AS(CubicPairSystem::validate({1, 1, 1, 1}, {1, 1, 1, 1},
                                              {1, 1, 1}, {1, 1, 1, 1}),
                    BlockOrder);
}

TEST_CASE("validate rejects out-of-range eta and nu") {
    CHECK_THROWS_AS(CubicPairSystem::validate({1}, {1}, {1}, {1}, 0.75, 0.25),
                    ParamRange);
    CHECK_THROWS_AS(CubicPairSystem::validate({1}, {1}, {1}, {1}, 0.1, 1.5),
                    ParamRange);
    CHECK_THROWS_AS(CubicPairSystem::validate({1}, {1}, {1}, {1}, 0.1, 0.0),
                    ParamRange);
}

TEST_CASE("classification covers the full case list") {
    CHECK(ones(3, 4, 4).classify() == SystemClass::A);
    CHECK(ones(3, 5, 4).classify() == SystemClass::A);
    CHECK(ones(4, 4, 3).classify() == SystemClass::B);
    CHECK(ones(4, 4, 4).classify() == SystemClass::B);
    CHECK(ones(4, 5, 3).classify() == SystemClass::B);
    CHECK(ones(5, 4, 3).classify() == SystemClass::B);
    CHECK(ones(2, 5, 5).classify() == SystemClass::C);
    CHECK(ones(5, 5, 2).classify() == SystemClass::D);
    CHECK(ones(4, 5, 4).classify() == SystemClass::E);
    CHECK(ones(5, 4, 4).classify() == SystemClass::E);
    CHECK(ones(3, 5, 5).classify() == SystemClass::F);
    CHECK(ones(5, 5, 3).classify() == SystemClass::G);
    CHECK(ones(2, 2, 2).classify() == SystemClass::OutOfClassification);
    CHECK(ones(1, 1, 1).classify() == SystemClass::OutOfClassification);
}

TEST_CASE("classified triples satisfy the s and q0star side conditions") {
    struct Row { int l, m, n; };
    const Row classed[] = {{3, 4, 4}, {3, 5, 4}, {4, 4, 3}, {4, 4, 4},
                           {4, 5, 3}, {5, 4, 3}, {2, 5, 5}, {5, 5, 2},
                           {4, 5, 4}, {5, 4, 4}, {3, 5, 5}, {5, 5, 3}};
    for (const Row& r : classed) {
        CubicPairSystem sys = ones(r.l, r.m, r.n);
        SystemClass c = sys.classify();
        REQUIRE(c != SystemClass::OutOfClassification);
        bool seven_family = c == SystemClass::A || c == SystemClass::B ||
                            c == SystemClass::C || c == SystemClass::D;
        if (seven_family) {
            CHECK(sys.s() >= 11);
            CHECK(sys.s() <= 12);
            CHECK(sys.q0star() >= 7);
        } else {
            CHECK(sys.s() >= 12);
            CHECK(sys.s() <= 13);
            CHECK(sys.q0star() >= 8);
        }
    }
}

TEST_CASE("q0star examples") {
    CHECK(ones(3, 4, 4).q0star() == 7);
    CHECK(ones(5, 5, 2).q0star() == 7);
    CHECK(ones(4, 4, 4).q0star() == 8);
}

TEST_CASE("classify and q0star invariant under in-block permutation") {
    CubicPairSystem s1 = CubicPairSystem::validate({2, 3, 5}, {7, 11, 13},
                                                   {1, 2, 3, 4}, {5, 6, 7, 8});
    CubicPairSystem s2 = CubicPairSystem::validate({3, 2, 5}, {11, 7, 13},
                                                   {4, 3, 2, 1}, {8, 7, 6, 5});
    CHECK(s1.classify() == s2.classify());
    CHECK(s1.q0star() == s2.q0star());
}

TEST_CASE("dissection constants") {
    DissectionConstants dc = DissectionConstants::standard();
    double inv = 1.0 / dc.tau0;
    CHECK(inv > 1703.6);
    CHECK(inv < 1703.7);
    CHECK(inv == doctest::Approx(852.0 + 16.0 * std::sqrt(2833.0)).epsilon(1e-12));
    CHECK(dc.tau == doctest::Approx(dc.tau0 / 10.0));
}

TEST_CASE("config round-trip is lossless") {
    CubicPairSystem sys = CubicPairSystem::validate(
        {49, 98, 147}, {49, 196, 196}, {1, 2, 7, 14}, {1, 2, 7, 14}, 0.2, 0.3);
    CubicPairSystem back = CubicPairSystem::from_config(sys.to_config());
    CHECK(back.a() == sys.a());
    CHECK(back.b() == sys.b());
    CHECK(back.c() == sys.c());
    CHECK(back.d() == sys.d());
    CHECK(back.eta() == sys.eta());
    CHECK(back.nu() == sys.nu());
    CHECK(back.to_config() == sys.to_config());
}

TEST_CASE("omega sums absolute coefficient values") {
    CubicPairSystem sys = CubicPairSystem::validate({1, -2, 3}, {-4, 5, -6},
                                                    {7, 8}, {9, 10});
    CHECK(sys.omega() == 21);
    CHECK(sys.omega_a() == 6);
    CHECK(sys.omega_b() == 15);
    CHECK(sys.omega_c() == 15);
    CHECK(sys.omega_d() == 19);
}
