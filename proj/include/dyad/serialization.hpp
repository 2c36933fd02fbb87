#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "dyad/cube.hpp"
#include "dyad/step_function.hpp"

namespace dyad {

/// Malformed or schema-violating input (CLI exit code 2).
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

nlohmann::json cube_to_json(const DyadicCube& q);
DyadicCube cube_from_json(const nlohmann::json& j, int expect_dim = 0);

/// {dim, leaves:[{level, coords, value}]}. Round-trips are bit-exact for
/// finite doubles (shortest round-trip decimal printing).
nlohmann::json step_function_to_json(const StepFunction& f);
StepFunction step_function_from_json(const nlohmann::json& j);

StepFunction load_step_function(const std::string& path);
void save_step_function(const StepFunction& f, const std::string& path);

/// Throws SchemaError when j has keys outside `allowed`.
void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                         const std::string& where);

nlohmann::json load_json_file(const std::string& path);
/// Writes via a temp file + rename so failed runs never leave partial output.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace dyad
