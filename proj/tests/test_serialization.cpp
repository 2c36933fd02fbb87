#include <doctest.h>

#include <cstring>

#include "dyad/rng.hpp"
#include "dyad/serialization.hpp"
#include "support.hpp"

using namespace dyad;

namespace {

bool bit_equal(double a, double b) {
    std::uint64_t ua, ub;
    std::memcpy(&ua, &a, 8);
    std::memcpy(&ub, &b, 8);
    return ua == ub;
}

}  // namespace

TEST_CASE("step function JSON round trip is bit exact") {
    Rng rng(101);
    for (int t = 0; t < 40; ++t) {
        Rng local = rng.fork(t);
        const int dim = 1 + static_cast<int>(local.below(2));
        RandomTreeOptions o;
        o.max_depth = dim == 1 ? 7 : 4;
        o.lattice = (t % 2) == 0;  // mix exact dyadic and arbitrary doubles
        StepFunction f = random_step_function(dim, local, o);
        StepFunction g = step_function_from_json(step_function_to_json(f));
        CHECK(same_partition(f, g));
        bool bits_ok = true;
        std::vector<double> va, vb;
        f.visit_leaves([&](const DyadicCube&, double v) { va.push_back(v); });
        g.visit_leaves([&](const DyadicCube&, double v) { vb.push_back(v); });
        REQUIRE(va.size() == vb.size());
        for (std::size_t i = 0; i < va.size(); ++i) bits_ok = bits_ok && bit_equal(va[i], vb[i]);
        CHECK(bits_ok);
    }
}

TEST_CASE("tiny and huge magnitudes survive the round trip") {
    std::vector<std::pair<DyadicCube, double>> leaves;
    leaves.emplace_back(DyadicCube(1, 1, {0}), 0x1.fffffffffffffp+1023);
    leaves.emplace_back(DyadicCube(1, 1, {1}), 0x1p-1074);
    StepFunction f = StepFunction::from_leaves(1, leaves);
    StepFunction g = step_function_from_json(step_function_to_json(f));
    CHECK(bit_equal(g.value_on(DyadicCube(1, 1, {0})), 0x1.fffffffffffffp+1023));
    CHECK(bit_equal(g.value_on(DyadicCube(1, 1, {1})), 0x1p-1074));
}

TEST_CASE("schema violations are rejected") {
    auto good = nlohmann::json::parse(
        R"({"dim":1,"leaves":[{"level":1,"coords":[0],"value":1.0},
                              {"level":1,"coords":[1],"value":2.0}]})");
    CHECK_NOTHROW(step_function_from_json(good));

    SUBCASE("unknown keys") {
        auto j = good;
        j["extra"] = true;
        CHECK_THROWS_AS(step_function_from_json(j), SchemaError);
    }
    SUBCASE("missing leaf fields") {
        auto j = nlohmann::json::parse(R"({"dim":1,"leaves":[{"level":0,"coords":[0]}]})");
        CHECK_THROWS_AS(step_function_from_json(j), SchemaError);
    }
    SUBCASE("incomplete partition") {
        auto j = nlohmann::json::parse(
            R"({"dim":1,"leaves":[{"level":1,"coords":[0],"value":1.0}]})");
        CHECK_THROWS_AS(step_function_from_json(j), SchemaError);
    }
    SUBCASE("overlapping leaves") {
        auto j = nlohmann::json::parse(
            R"({"dim":1,"leaves":[{"level":0,"coords":[0],"value":1.0},
                                  {"level":1,"coords":[1],"value":2.0}]})");
        CHECK_THROWS_AS(step_function_from_json(j), SchemaError);
    }
    SUBCASE("bad coordinates") {
        auto j = nlohmann::json::parse(
            R"({"dim":1,"leaves":[{"level":1,"coords":[2],"value":1.0},
                                  {"level":1,"coords":[1],"value":2.0}]})");
        CHECK_THROWS_AS(step_function_from_json(j), SchemaError);
    }
}

TEST_CASE("file round trip through the atomic writer") {
    Rng rng(7);
    StepFunction f = random_step_function(1, rng, {});
    const std::string path = "/tmp/dyad_test_roundtrip.json";
    save_step_function(f, path);
    StepFunction g = load_step_function(path);
    CHECK(same_partition(f, g));
    CHECK(max_abs_diff(f, g) == 0.0);
}
