#include <doctest.h>

#include <cmath>

#include "dyad/rng.hpp"
#include "dyad/serialization.hpp"
#include "dyad/young.hpp"
#include "support.hpp"

using namespace dyad;
using testsupport::uniform1;

TEST_CASE("power-family basics") {
    YoungFunction A = YoungFunction::power(2.0);
    CHECK(A(0.0) == 0.0);
    CHECK(A(3.0) == 9.0);
    CHECK(A.inverse(9.0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK_THROWS_AS(YoungFunction::power(0.5), std::invalid_argument);
}

TEST_CASE("log-bump evaluation and inverse") {
    YoungFunction A = YoungFunction::log_bump(2.0, -1.5);
    CHECK(A(0.0) == 0.0);
    for (double t : {0.01, 0.5, 3.0, 100.0}) {
        CHECK(A.inverse(A(t)) == doctest::Approx(t).epsilon(1e-10));
    }
    CHECK_THROWS_AS(YoungFunction::log_bump(1.0, 0.5), std::invalid_argument);
}

TEST_CASE("associate of a power is the dual power") {
    for (double r : {1.5, 2.0, 3.0}) {
        YoungFunction A = YoungFunction::power(r);
        YoungFunction Abar = A.associate();
        CHECK(Abar.family() == YoungFunction::Family::Power);
        CHECK(Abar.exponent() == doctest::Approx(r / (r - 1.0)).epsilon(1e-14));
        // Young's inequality both ways on a grid
        for (int i = 1; i <= 10; ++i)
            for (int j = 1; j <= 10; ++j) {
                const double s = 0.3 * i, t = 0.3 * j;
                CHECK(s * t <= A(s) + Abar(t) + 1e-12);
            }
        // sharpness: sup_s (st - A(s)) equals Abar(t)
        for (int j = 1; j <= 5; ++j) {
            const double t = 0.5 * j;
            double sup = 0.0;
            for (int k = 0; k <= 4000; ++k) {
                const double s = k * 0.002;
                sup = std::max(sup, s * t - A(s));
            }
            CHECK(sup == doctest::Approx(Abar(t)).epsilon(1e-4));
        }
    }
}

TEST_CASE("bidual returns the original within 1 percent") {
    SUBCASE("power") {
        YoungFunction A = YoungFunction::power(2.5, 0.7);
        YoungFunction Abb = A.associate().associate();
        for (double t : {0.2, 1.0, 5.0, 40.0})
            CHECK(Abb(t) == doctest::Approx(A(t)).epsilon(0.01));
    }
    SUBCASE("log bump (numeric associate)") {
        YoungFunction A = YoungFunction::log_bump(2.0, 1.0);
        YoungFunction Abb = A.associate().associate();
        for (double t : {0.5, 1.0, 4.0, 32.0})
            CHECK(Abb(t) == doctest::Approx(A(t)).epsilon(0.01));
    }
}

TEST_CASE("Young's inequality for numeric associates on a grid") {
    YoungFunction A = YoungFunction::log_bump(2.0, 1.5);
    YoungFunction Abar = A.associate();
    for (int i = 1; i <= 100; ++i)
        for (int j = 1; j <= 100; ++j) {
            const double s = 0.08 * i, t = 0.08 * j;
            CHECK(s * t <= (A(s) + Abar(t)) * (1 + 1e-9) + 1e-12);
        }
}

TEST_CASE("B_p classification") {
    // power(2) in B_3; power(p) not in B_p; r < p iff in
    CHECK(bp_classify(YoungFunction::power(2.0), 3.0) == BpVerdict::In);
    CHECK(bp_classify(YoungFunction::power(3.0), 3.0) == BpVerdict::Out);
    CHECK(bp_classify(YoungFunction::power(3.5), 3.0) == BpVerdict::Out);
    CHECK(bp_classify(YoungFunction::power(1.0), 2.0) == BpVerdict::In);
    // log bumps at the critical exponent: a < -1 decides
    for (double p : {2.0, 3.0}) {
        CHECK(bp_classify(YoungFunction::log_bump(p, -1.25), p) == BpVerdict::In);
        CHECK(bp_classify(YoungFunction::log_bump(p, -0.75), p) == BpVerdict::Out);
        CHECK(bp_classify(YoungFunction::log_bump(p, -1.0), p) == BpVerdict::Out);
        CHECK(bp_classify(YoungFunction::log_bump(p, 1.0), p) == BpVerdict::Out);
        CHECK(bp_classify(YoungFunction::log_bump(p - 0.5, 2.0), p) == BpVerdict::In);
        CHECK(bp_classify(YoungFunction::log_bump(p + 0.5, -2.0), p) == BpVerdict::Out);
    }
    // numeric fallback for customs without asymptotics
    YoungFunction C1 = YoungFunction::custom("t2", [](double t) { return t * t; });
    CHECK(bp_classify(C1, 3.0) == BpVerdict::In);
    CHECK(bp_classify(C1, 2.0) != BpVerdict::In);
}

TEST_CASE("associate of a log bump carries the dual asymptotic") {
    // A = t^p log^{p-1+d} has Abar ~ t^{p'} log^{-1-d/(p-1)}
    const double p = 2.0, d = 0.5;
    YoungFunction A = YoungFunction::log_bump(p, p - 1.0 + d);
    YoungFunction Abar = A.associate();
    REQUIRE(Abar.asymptotic().has_value());
    CHECK(Abar.asymptotic()->r == doctest::Approx(2.0));
    CHECK(Abar.asymptotic()->a == doctest::Approx(-1.5));
    CHECK(bp_classify(Abar, 2.0) == BpVerdict::In);
}

TEST_CASE("luxemburg norm") {
    const DyadicCube root = DyadicCube::root(1);
    SUBCASE("power case equals the closed form") {
        YoungFunction A = YoungFunction::power(2.0);
        CHECK(luxemburg_norm(A, StepFunction::constant(1, 1.0), root) ==
              doctest::Approx(1.0).epsilon(1e-12));
        StepFunction f = uniform1({2, 0});
        CHECK(luxemburg_norm(A, f, root) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    }
    SUBCASE("zero function") {
        CHECK(luxemburg_norm(YoungFunction::power(3.0), StepFunction::constant(1, 0.0), root) ==
              0.0);
    }
    SUBCASE("random power cases match (avg |f|^p)^{1/p} to 1e-12") {
        Rng rng(88);
        for (int t = 0; t < 60; ++t) {
            Rng local = rng.fork(t);
            const double r = local.uniform(1.1, 4.0);
            YoungFunction A = YoungFunction::power(r);
            StepFunction f = random_step_function(1, local, {});
            DyadicCube q = random_cube(1, local, 0, 3);
            double mean = 0.0;
            for (const auto& [cube, v] : leaf_pieces(f, q))
                mean += std::pow(std::abs(v), r) * cube.measure();
            const double closed = std::pow(mean / q.measure(), 1.0 / r);
            const double lux = luxemburg_norm(A, f, q);
            if (closed == 0.0)
                CHECK(lux == 0.0);
            else
                CHECK(lux == doctest::Approx(closed).epsilon(1e-12));
        }
    }
}

TEST_CASE("young descriptor JSON") {
    auto j = YoungFunction::log_bump(2.0, -1.5).to_json();
    YoungFunction back = YoungFunction::from_json(j);
    CHECK(back.family() == YoungFunction::Family::LogBump);
    CHECK(back.exponent() == 2.0);
    CHECK(back.log_exponent() == -1.5);
    CHECK_THROWS_AS(YoungFunction::from_json(nlohmann::json{{"family", "exp"}}), SchemaError);
}
