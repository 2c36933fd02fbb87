#include <doctest.h>

#include <cmath>

#include "dyad/oscillation.hpp"
#include "dyad/rng.hpp"
#include "support.hpp"

using namespace dyad;
using testsupport::brute_force_omega;
using testsupport::uniform1;

TEST_CASE("rearrangement examples") {
    StepFunction f = uniform1({3, 1, 2, 1});
    const DyadicCube root = DyadicCube::root(1);
    CHECK(rearrangement_value(f, root, 0.25) == 3.0);
    CHECK(rearrangement_value(f, root, 0.3) == 2.0);
    CHECK(rearrangement_value(StepFunction::constant(1, -2.5), root, 0.7) == 2.5);
    CHECK_THROWS_AS(rearrangement_value(f, root, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(rearrangement_value(f, root, 1.5), std::invalid_argument);
}

TEST_CASE("rearrangement satisfies the weak and strong bounds of the basic lemma") {
    Rng rng(31);
    int checked = 0;
    for (int trial = 0; trial < 400; ++trial) {
        Rng local = rng.fork(trial);
        const int dim = 1 + static_cast<int>(local.below(2));
        RandomTreeOptions o;
        o.max_depth = dim == 1 ? 6 : 4;
        StepFunction f = random_step_function(dim, local, o);
        DyadicCube q = random_cube(dim, local, 0, 3);
        const double lambda = local.uniform(0.02, 0.98);
        const double p = local.uniform(0.3, 4.0);
        const double star = rearrangement_value(f, q, lambda * q.measure());
        const double weak = weak_lp_norm(f, q, p);
        CHECK(star <= std::pow(lambda, -1.0 / p) * weak * (1 + 1e-12));
        double strong = 0.0;
        for (const auto& [cube, v] : leaf_pieces(f, q))
            strong += std::pow(std::abs(v), p) * cube.measure();
        strong = std::pow(strong / (lambda * q.measure()), 1.0 / p);
        CHECK(star <= strong * (1 + 1e-12));
        ++checked;
    }
    CHECK(checked == 400);
}

TEST_CASE("median examples") {
    const DyadicCube root = DyadicCube::root(1);
    SUBCASE("constant") {
        MedianResult m = median(StepFunction::constant(1, 3.25), root);
        CHECK(m.lo == 3.25);
        CHECK(m.hi == 3.25);
        CHECK(m.canonical == 3.25);
    }
    SUBCASE("four distinct cells") {
        MedianResult m = median(uniform1({1, 2, 3, 4}), root);
        CHECK(m.lo == 2.0);
        CHECK(m.hi == 3.0);
        CHECK(m.canonical == 2.0);
    }
    SUBCASE("spike") {
        MedianResult m = median(uniform1({0, 0, 0, 5}), root);
        CHECK(m.lo == 0.0);
        CHECK(m.hi == 0.0);
    }
}

TEST_CASE("every value in the median interval is a median; just outside is not") {
    Rng rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        Rng local = rng.fork(trial);
        StepFunction f = random_step_function(1, local, {});
        DyadicCube q = random_cube(1, local, 0, 3);
        const MedianResult m = median(f, q);
        auto is_median = [&](double c) {
            double above = 0.0, below = 0.0;
            for (const auto& [cube, v] : leaf_pieces(f, q)) {
                if (v > c) above += cube.measure();
                if (v < c) below += cube.measure();
            }
            return std::max(above, below) <= q.measure() / 2.0;
        };
        CHECK(is_median(m.lo));
        CHECK(is_median(m.hi));
        CHECK(is_median(0.5 * (m.lo + m.hi)));
        CHECK(!is_median(m.lo - 1e-6));
        CHECK(!is_median(m.hi + 1e-6));
        // (3.4): |m| <= (f chi_Q)^*(|Q|/2) for every median
        const double bound = rearrangement_value(f, q, q.measure() / 2.0);
        CHECK(std::abs(m.lo) <= bound);
        CHECK(std::abs(m.hi) <= bound);
    }
}

TEST_CASE("local mean oscillation examples") {
    const DyadicCube root = DyadicCube::root(1);
    CHECK(local_mean_oscillation(StepFunction::constant(1, 9.0), root, 0.37) == 0.0);
    StepFunction f = uniform1({0, 0, 0, 1});
    CHECK(local_mean_oscillation(f, root, 0.25) == 0.5);
    CHECK(local_mean_oscillation(f, root, 0.5) == 0.0);
    CHECK_THROWS_AS(local_mean_oscillation(f, root, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(local_mean_oscillation(f, root, 1.0), std::invalid_argument);
}

TEST_CASE("window algorithm equals the brute-force oracle exactly") {
    Rng rng(123);
    for (int trial = 0; trial < 800; ++trial) {
        Rng local = rng.fork(trial);
        const int dim = 1 + static_cast<int>(local.below(2));
        RandomTreeOptions o;
        o.max_depth = dim == 1 ? 6 : 3;
        StepFunction f = random_step_function(dim, local, o);
        DyadicCube q = random_cube(dim, local, 0, 2);
        const double lambda = (1.0 + static_cast<double>(local.below(254))) / 256.0;
        CHECK(local_mean_oscillation(f, q, lambda) == brute_force_omega(f, q, lambda));
    }
}

TEST_CASE("oscillation is monotone in lambda, translation invariant, homogeneous") {
    Rng rng(321);
    for (int trial = 0; trial < 200; ++trial) {
        Rng local = rng.fork(trial);
        StepFunction f = random_step_function(1, local, {});
        DyadicCube q = random_cube(1, local, 0, 3);
        const double l1 = local.uniform(0.05, 0.45);
        const double l2 = l1 + local.uniform(0.05, 0.5);
        CHECK(local_mean_oscillation(f, q, l2) <= local_mean_oscillation(f, q, l1));
        const double c = (static_cast<double>(local.below(33)) - 16.0) / 8.0;
        CHECK(local_mean_oscillation(f + c, q, l1) == local_mean_oscillation(f, q, l1));
        const double om = local_mean_oscillation(f, q, l1);
        CHECK(local_mean_oscillation(-2.0 * f, q, l1) == doctest::Approx(2.0 * om).epsilon(1e-14));
    }
}

TEST_CASE("median oscillation sandwich") {
    const DyadicCube root = DyadicCube::root(1);
    SUBCASE("constant gives (0,0)") {
        auto [om, centered] = median_oscillation_bounds(StepFunction::constant(1, 1.0), root, 0.5);
        CHECK(om == 0.0);
        CHECK(centered == 0.0);
    }
    SUBCASE("spike at lambda = 1/2 gives (0,0)") {
        auto [om, centered] = median_oscillation_bounds(uniform1({0, 0, 0, 1}), root, 0.5);
        CHECK(om == 0.0);
        CHECK(centered == 0.0);
    }
    SUBCASE("holds on 500 random instances") {
        Rng rng(999);
        for (int trial = 0; trial < 500; ++trial) {
            Rng local = rng.fork(trial);
            const int dim = 1 + static_cast<int>(local.below(2));
            RandomTreeOptions o;
            o.max_depth = dim == 1 ? 6 : 4;
            StepFunction f = random_step_function(dim, local, o);
            DyadicCube q = random_cube(dim, local, 0, 3);
            const double lambda = local.uniform(0.02, 0.5);
            auto [om, centered] = median_oscillation_bounds(f, q, lambda);
            CHECK(om <= centered * (1 + 1e-12) + 1e-300);
            CHECK(centered <= 2.0 * om * (1 + 1e-12) + 1e-300);
        }
    }
}

TEST_CASE("local sharp maximal function") {
    const DyadicCube root = DyadicCube::root(1);
    SUBCASE("constant f gives zero") {
        StepFunction m = local_sharp_maximal(StepFunction::constant(1, 3.0), root, 0.25);
        CHECK(max_abs_diff(m, StepFunction::constant(1, 0.0)) == 0.0);
    }
    SUBCASE("spike at x = 7/8, lambda = 1/4") {
        StepFunction f = uniform1({0, 0, 0, 1});
        StepFunction m = local_sharp_maximal(f, root, 0.25);
        // cubes containing 7/8: root (omega = 1/2), [1/2,1) (omega = 1/2), [3/4,1) (omega = 0)
        CHECK(local_mean_oscillation(f, DyadicCube(1, 1, {1}), 0.25) == 0.5);
        CHECK(m.value_on(DyadicCube(1, 2, {3})) == 0.5);
    }
    SUBCASE("positively homogeneous") {
        Rng rng(55);
        StepFunction f = random_step_function(1, rng, {});
        StepFunction m1 = local_sharp_maximal(f, root, 0.3);
        StepFunction m2 = local_sharp_maximal(2.0 * f, root, 0.3);
        CHECK(max_abs_diff(2.0 * m1, m2) <= 1e-13);
    }
}
