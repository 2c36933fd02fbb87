#include <doctest.h>

#include <cmath>

#include "dyad/rng.hpp"
#include "dyad/step_function.hpp"
#include "support.hpp"

using namespace dyad;
using testsupport::uniform1;

TEST_CASE("from_uniform basics") {
    SUBCASE("constant") {
        StepFunction f = StepFunction::from_uniform(1, 0, std::vector<double>{3.5});
        CHECK(f.leaf_count() == 1);
        const double x[] = {0.7};
        CHECK(f.value_at(std::span<const double>(x, 1)) == 3.5);
    }
    SUBCASE("the Haar pattern at depth 2") {
        StepFunction f = uniform1({1, 1, -1, -1});
        const double a[] = {0.1}, b[] = {0.3}, c[] = {0.6};
        CHECK(f.value_at(std::span<const double>(a, 1)) == 1.0);
        CHECK(f.value_at(std::span<const double>(b, 1)) == 1.0);
        CHECK(f.value_at(std::span<const double>(c, 1)) == -1.0);
    }
    SUBCASE("quadrant cells in 2d, lexicographic order") {
        StepFunction f = StepFunction::from_uniform(2, 1, std::vector<double>{10, 20, 30, 40});
        // coords (0,0) -> 10, (0,1) -> 20, (1,0) -> 30, (1,1) -> 40
        CHECK(f.value_on(DyadicCube(2, 1, {0, 0})) == 10);
        CHECK(f.value_on(DyadicCube(2, 1, {0, 1})) == 20);
        CHECK(f.value_on(DyadicCube(2, 1, {1, 0})) == 30);
        CHECK(f.value_on(DyadicCube(2, 1, {1, 1})) == 40);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(StepFunction::from_uniform(1, 1, std::vector<double>{1.0}),
                        std::invalid_argument);
        CHECK_THROWS_AS(
            StepFunction::from_uniform(1, 0, std::vector<double>{std::nan("")}),
            std::invalid_argument);
    }
}

TEST_CASE("cube averages") {
    StepFunction f = uniform1({1, 1, -1, -1});
    CHECK(f.average_over(DyadicCube::root(1)) == 0.0);
    CHECK(f.average_over(DyadicCube(1, 1, {0})) == 1.0);
    StepFunction g = uniform1({1, 0, 0, 0});
    CHECK(g.average_over(DyadicCube(1, 1, {0})) == 0.5);
    // below-leaf cubes return the leaf value
    CHECK(g.average_over(DyadicCube(1, 5, {1})) == 1.0);
    CHECK_THROWS_AS(g.average_over(DyadicCube(2, 0, {0, 0})), std::invalid_argument);
}

TEST_CASE("average is linear and parents average their children") {
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        Rng local = rng.fork(trial);
        StepFunction f = random_step_function(1, local, {});
        StepFunction g = random_step_function(1, local, {});
        DyadicCube q = random_cube(1, local, 0, 4);
        const double lin = zip(f, g, [](double a, double b) { return 2.0 * a - 3.0 * b; })
                               .average_over(q);
        CHECK(lin == doctest::Approx(2.0 * f.average_over(q) - 3.0 * g.average_over(q))
                         .epsilon(1e-13));
        if (q.level() <= 3) {
            double child_sum = 0.0;
            for (unsigned i = 0; i < q.child_count(); ++i) child_sum += f.average_over(q.child(i));
            CHECK(f.average_over(q) ==
                  doctest::Approx(child_sum / q.child_count()).epsilon(1e-13));
        }
    }
}

TEST_CASE("common refinement") {
    SUBCASE("identical input") {
        StepFunction f = uniform1({2, 5});
        auto [a, b] = common_refinement(f, f);
        CHECK(same_partition(a, b));
        CHECK(max_abs_diff(a, f) == 0.0);
    }
    SUBCASE("coarse against fine duplicates values") {
        StepFunction f = uniform1({2, 7});
        StepFunction g = uniform1({1, 2, 3, 4});
        auto [a, b] = common_refinement(f, g);
        CHECK(same_partition(a, b));
        CHECK(a.leaf_count() == 4);
        CHECK(a.value_on(DyadicCube(1, 2, {0})) == 2);
        CHECK(a.value_on(DyadicCube(1, 2, {1})) == 2);
        CHECK(max_abs_diff(a, f) == 0.0);
        CHECK(max_abs_diff(b, g) == 0.0);
    }
    SUBCASE("pointwise product after refinement") {
        StepFunction f = StepFunction::constant(1, 2.0);
        StepFunction g = uniform1({1, 3});
        StepFunction prod = f * g;
        CHECK(prod.value_on(DyadicCube(1, 1, {0})) == 2.0);
        CHECK(prod.value_on(DyadicCube(1, 1, {1})) == 6.0);
    }
}

TEST_CASE("common refinement is idempotent and preserves values at sample points") {
    Rng rng(7);
    StepFunction f = random_step_function(2, rng, {});
    StepFunction g = random_step_function(2, rng, {});
    auto [a, b] = common_refinement(f, g);
    auto [a2, b2] = common_refinement(a, b);
    CHECK(same_partition(a, a2));
    CHECK(same_partition(b, b2));
    for (int i = 0; i < 1000; ++i) {
        const double x[2] = {rng.next_double(), rng.next_double()};
        std::span<const double> xs(x, 2);
        CHECK(a.value_at(xs) == f.value_at(xs));
        CHECK(b.value_at(xs) == g.value_at(xs));
    }
}

TEST_CASE("masking zeroes the complement") {
    StepFunction f = uniform1({1, 2, 3, 4});
    DyadicCube q(1, 1, {1});
    StepFunction m = f.masked_to(q);
    CHECK(m.value_on(DyadicCube(1, 2, {2})) == 3.0);
    CHECK(m.value_on(DyadicCube(1, 1, {0})) == 0.0);
    CHECK(m.integral() == doctest::Approx(f.integral_over(q)).epsilon(1e-15));
}

TEST_CASE("builder accumulates on cubes") {
    StepBuilder b(1);
    b.add_on_cube(DyadicCube(1, 1, {0}), 1.0);
    b.add_on_cube(DyadicCube(1, 2, {1}), 0.5);
    StepFunction f = b.take();
    CHECK(f.value_on(DyadicCube(1, 2, {0})) == 1.0);
    CHECK(f.value_on(DyadicCube(1, 2, {1})) == 1.5);
    CHECK(f.value_on(DyadicCube(1, 1, {1})) == 0.0);
}

TEST_CASE("leaf partition covers the root exactly") {
    Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        Rng local = rng.fork(trial);
        StepFunction f = random_step_function(2, local, {.max_depth = 5});
        double total = 0.0;
        f.visit_leaves([&](const DyadicCube& q, double) { total += q.measure(); });
        CHECK(total == 1.0);
    }
}
