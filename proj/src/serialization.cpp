#include "dyad/serialization.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace dyad {

using nlohmann::json;

json cube_to_json(const DyadicCube& q) {
    return json{{"level", q.level()}, {"coords", q.coords()}};
}

DyadicCube cube_from_json(const json& j, int expect_dim) {
    if (!j.is_object() || !j.contains("level") || !j.contains("coords"))
        throw SchemaError("cube: expected {level, coords}");
    reject_unknown_keys(j, {"level", "coords"}, "cube");
    if (!j["level"].is_number_integer()) throw SchemaError("cube: level must be an integer");
    if (!j["coords"].is_array()) throw SchemaError("cube: coords must be an array");
    std::vector<std::uint64_t> coords;
    for (const auto& c : j["coords"]) {
        if (!c.is_number_integer() || c.get<std::int64_t>() < 0)
            throw SchemaError("cube: coords must be non-negative integers");
        coords.push_back(c.get<std::uint64_t>());
    }
    const int dim = static_cast<int>(coords.size());
    if (expect_dim && dim != expect_dim) throw SchemaError("cube: dimension mismatch");
    try {
        return DyadicCube(dim, j["level"].get<int>(), std::move(coords));
    } catch (const std::invalid_argument& e) {
        throw SchemaError(std::string("cube: ") + e.what());
    }
}

json step_function_to_json(const StepFunction& f) {
    json leaves = json::array();
    f.visit_leaves([&](const DyadicCube& q, double v) {
        json leaf = cube_to_json(q);
        leaf["value"] = v;
        leaves.push_back(std::move(leaf));
    });
    return json{{"dim", f.dim()}, {"leaves", std::move(leaves)}};
}

StepFunction step_function_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("leaves"))
        throw SchemaError("step function: expected {dim, leaves}");
    reject_unknown_keys(j, {"dim", "leaves"}, "step function");
    if (!j["dim"].is_number_integer() || j["dim"].get<int>() < 1)
        throw SchemaError("step function: dim must be a positive integer");
    if (!j["leaves"].is_array() || j["leaves"].empty())
        throw SchemaError("step function: leaves must be a non-empty array");
    const int dim = j["dim"].get<int>();
    std::vector<std::pair<DyadicCube, double>> leaves;
    for (const auto& L : j["leaves"]) {
        if (!L.is_object() || !L.contains("value"))
            throw SchemaError("step function leaf: expected {level, coords, value}");
        reject_unknown_keys(L, {"level", "coords", "value"}, "step function leaf");
        if (!L["value"].is_number()) throw SchemaError("step function leaf: value must be a number");
        json cj{{"level", L["level"]}, {"coords", L["coords"]}};
        leaves.emplace_back(cube_from_json(cj, dim), L["value"].get<double>());
    }
    try {
        return StepFunction::from_leaves(dim, leaves);
    } catch (const std::invalid_argument& e) {
        throw SchemaError(std::string("step function: ") + e.what());
    }
}

StepFunction load_step_function(const std::string& path) {
    return step_function_from_json(load_json_file(path));
}

void save_step_function(const StepFunction& f, const std::string& path) {
    write_file_atomic(path, step_function_to_json(f).dump(2) + "\n");
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) {
                ok = true;
                break;
            }
        if (!ok) throw SchemaError(where + ": unknown key '" + key + "'");
    }
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("parse error in ") + path + ": " + e.what());
    }
    return j;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << contents;
        if (!out) throw std::runtime_error("write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace dyad
