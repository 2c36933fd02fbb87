// Experiment CLI: runs dyadic operators, weight audits, decomposition
// verification, and sharpness sweeps from JSON config files.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dyad/experiments.hpp"
#include "dyad/lerner.hpp"
#include "dyad/operators.hpp"
#include "dyad/oscillation.hpp"
#include "dyad/serialization.hpp"
#include "dyad/shifts.hpp"

namespace {

using dyad::SchemaError;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitSchema = 2;
constexpr int kExitDomain = 3;

struct CliArgs {
    std::string config_path;
    std::uint64_t seed = 0;
    std::optional<std::string> out_override;
    int threads = 1;
};

double require_number(const json& j, const char* key, const char* where) {
    if (!j.contains(key) || !j[key].is_number())
        throw SchemaError(std::string(where) + ": needs numeric '" + key + "'");
    return j[key].get<double>();
}

int require_int(const json& j, const char* key, const char* where) {
    if (!j.contains(key) || !j[key].is_number_integer())
        throw SchemaError(std::string(where) + ": needs integer '" + key + "'");
    return j[key].get<int>();
}

std::string require_string(const json& j, const char* key, const char* where) {
    if (!j.contains(key) || !j[key].is_string())
        throw SchemaError(std::string(where) + ": needs string '" + key + "'");
    return j[key].get<std::string>();
}

void emit(const json& payload, const std::optional<std::string>& path) {
    if (path)
        dyad::write_file_atomic(*path, payload.dump(2) + "\n");
    else
        std::cout << payload.dump(2) << "\n";
}

std::optional<std::string> output_path(const json& cfg, const char* key, const CliArgs& args) {
    if (args.out_override) return args.out_override;
    if (cfg.contains(key)) {
        if (!cfg[key].is_string())
            throw SchemaError(std::string("config: '") + key + "' must be a string");
        return cfg[key].get<std::string>();
    }
    return std::nullopt;
}

dyad::OperatorTag sweep_tag(const std::string& name) {
    if (name == "maximal") return dyad::OperatorTag::MaximalD;
    if (name == "hilbert_d") return dyad::OperatorTag::HilbertD;
    if (name == "square") return dyad::OperatorTag::SquareD;
    if (name == "vmaximal") return dyad::OperatorTag::VectorMaximalD;
    throw SchemaError("sweep: unknown operator tag '" + name + "'");
}

int cmd_transform(const json& cfg, const CliArgs& args) {
    dyad::reject_unknown_keys(cfg,
                              {"command", "operator", "input", "inputs", "output", "spec", "b",
                               "alpha", "sigma", "q", "young", "s", "iterations", "epsilon"},
                              "transform");
    const std::string op = require_string(cfg, "operator", "transform");
    const auto out = output_path(cfg, "output", args);

    auto input = [&]() {
        return dyad::load_step_function(require_string(cfg, "input", "transform"));
    };
    dyad::StepFunction result = dyad::StepFunction::constant(1, 0.0);

    if (op == "hilbert_d") {
        result = dyad::dyadic_hilbert(input());
    } else if (op == "shift") {
        auto spec = dyad::HaarShiftSpec::from_json(
            dyad::load_json_file(require_string(cfg, "spec", "transform")));
        result = dyad::haar_shift(spec, input());
    } else if (op == "gshift" || op == "maximal_shift") {
        auto spec = dyad::GeneralizedShiftSpec::from_json(
            dyad::load_json_file(require_string(cfg, "spec", "transform")));
        if (op == "maximal_shift")
            result = dyad::maximal_haar_shift(spec, input());
        else if (cfg.contains("epsilon"))
            result =
                dyad::truncated_shift(spec, input(), require_number(cfg, "epsilon", "transform"));
        else
            result = dyad::generalized_haar_shift(spec, input());
    } else if (op == "paraproduct") {
        auto b = dyad::load_step_function(require_string(cfg, "b", "transform"));
        result = dyad::paraproduct(b, input());
    } else if (op == "multiplier") {
        if (!cfg.contains("alpha")) throw SchemaError("transform: multiplier needs 'alpha'");
        const json& a = cfg["alpha"];
        if (a.is_number()) {
            result = dyad::haar_multiplier(a.get<double>(), input());
        } else if (a.is_object()) {
            dyad::reject_unknown_keys(a, {"default", "entries"}, "multiplier alpha");
            const double def = a.contains("default") ? require_number(a, "default", "alpha") : 0.0;
            std::map<dyad::DyadicCube, double> table;
            if (a.contains("entries"))
                for (const auto& e : a["entries"]) {
                    dyad::reject_unknown_keys(e, {"cube", "value"}, "multiplier alpha entry");
                    table.emplace(dyad::cube_from_json(e.at("cube")),
                                  require_number(e, "value", "alpha entry"));
                }
            result = dyad::haar_multiplier(
                [&table, def](const dyad::DyadicCube& I) {
                    const auto it = table.find(I);
                    return it == table.end() ? def : it->second;
                },
                input());
        } else {
            throw SchemaError("transform: 'alpha' must be a number or an object");
        }
    } else if (op == "square") {
        result = dyad::square_function(input());
    } else if (op == "maximal") {
        result = dyad::dyadic_maximal(input());
    } else if (op == "wmaximal") {
        dyad::Weight sigma(dyad::load_step_function(require_string(cfg, "sigma", "transform")));
        result = dyad::weighted_dyadic_maximal(sigma, input());
    } else if (op == "vmaximal") {
        if (!cfg.contains("inputs") || !cfg["inputs"].is_array() || cfg["inputs"].empty())
            throw SchemaError("transform: vmaximal needs non-empty 'inputs'");
        std::vector<dyad::StepFunction> comps;
        for (const auto& p : cfg["inputs"])
            comps.push_back(dyad::load_step_function(p.get<std::string>()));
        result = dyad::vector_maximal(require_number(cfg, "q", "transform"), comps);
    } else if (op == "orlicz_maximal") {
        if (!cfg.contains("young")) throw SchemaError("transform: orlicz_maximal needs 'young'");
        result = dyad::orlicz_maximal(dyad::YoungFunction::from_json(cfg["young"]), input());
    } else if (op == "rdf") {
        result = dyad::rubio_de_francia(input(), require_number(cfg, "s", "transform"),
                                        require_int(cfg, "iterations", "transform"));
    } else {
        throw SchemaError("transform: unknown operator tag '" + op + "'");
    }

    if (!out) {
        std::cout << dyad::step_function_to_json(result).dump(2) << "\n";
        return kExitOk;
    }
    dyad::write_file_atomic(*out, dyad::step_function_to_json(result).dump(2) + "\n");
    return kExitOk;
}

int cmd_audit(const json& cfg, const CliArgs& args) {
    dyad::reject_unknown_keys(cfg, {"command", "p", "weight", "u", "v", "A", "B", "bmo", "output"},
                              "audit");
    json report;
    if (cfg.contains("weight")) {
        const double p = require_number(cfg, "p", "audit");
        dyad::Weight w(dyad::load_step_function(require_string(cfg, "weight", "audit")));
        report["ap"] = dyad::ap_constant(w, p);
    } else if (cfg.contains("u") && cfg.contains("v")) {
        const double p = require_number(cfg, "p", "audit");
        dyad::Weight u(dyad::load_step_function(require_string(cfg, "u", "audit")));
        dyad::Weight v(dyad::load_step_function(require_string(cfg, "v", "audit")));
        if (!cfg.contains("A") || !cfg.contains("B"))
            throw SchemaError("audit: pair needs A and B");
        auto A = dyad::YoungFunction::from_json(cfg["A"]);
        auto B = dyad::YoungFunction::from_json(cfg["B"]);
        report["ap_u"] = dyad::ap_constant(u, p);
        report["ap_v"] = dyad::ap_constant(v, p);
        report["bump"] = dyad::bump_constant(u, v, p, A, B);
        auto verdict = [](dyad::BpVerdict v) {
            return v == dyad::BpVerdict::In    ? "in"
                   : v == dyad::BpVerdict::Out ? "out"
                                               : "inconclusive";
        };
        report["A_bar_in_Bp_dual"] = verdict(dyad::bp_classify(A.associate(), p / (p - 1.0)));
        report["B_bar_in_Bp"] = verdict(dyad::bp_classify(B.associate(), p));
    } else if (cfg.contains("bmo")) {
        report["bmo"] =
            dyad::bmo_dyadic_norm(dyad::load_step_function(require_string(cfg, "bmo", "audit")));
    } else {
        throw SchemaError("audit: expected 'weight', a pair 'u'/'v', or 'bmo'");
    }
    emit(report, output_path(cfg, "output", args));
    return kExitOk;
}

int cmd_sweep(const json& cfg, const CliArgs& args) {
    dyad::reject_unknown_keys(cfg,
                              {"command", "operator", "p", "epsilons", "depth", "q",
                               "random_candidates", "output_csv", "output_json"},
                              "sweep");
    const dyad::OperatorTag tag = sweep_tag(require_string(cfg, "operator", "sweep"));
    const double p = require_number(cfg, "p", "sweep");
    if (!cfg.contains("epsilons") || !cfg["epsilons"].is_array())
        throw SchemaError("sweep: needs 'epsilons' array");
    std::vector<double> eps;
    for (const auto& e : cfg["epsilons"]) eps.push_back(e.get<double>());
    dyad::SweepOptions opt;
    opt.seed = args.seed;
    opt.threads = args.threads;
    if (cfg.contains("depth")) opt.depth = require_int(cfg, "depth", "sweep");
    if (cfg.contains("q")) opt.q = require_number(cfg, "q", "sweep");
    if (cfg.contains("random_candidates"))
        opt.random_candidates = require_int(cfg, "random_candidates", "sweep");

    const dyad::SweepResult result = dyad::sharpness_sweep(tag, p, eps, opt);
    if (cfg.contains("output_csv"))
        dyad::write_file_atomic(cfg["output_csv"].get<std::string>(), dyad::sweep_to_csv(result));
    emit(dyad::sweep_to_json(result), output_path(cfg, "output_json", args));
    return kExitOk;
}

int cmd_extremal(const json& cfg, const CliArgs& args) {
    dyad::reject_unknown_keys(cfg, {"command", "J", "ps", "output_json"}, "extremal");
    const int J = require_int(cfg, "J", "extremal");
    if (!cfg.contains("ps") || !cfg["ps"].is_array()) throw SchemaError("extremal: needs 'ps'");
    std::vector<double> ps;
    for (const auto& p : cfg["ps"]) ps.push_back(p.get<double>());
    const dyad::ExtremalReport rep = dyad::extremal_sd(J, ps);
    emit(dyad::extremal_to_json(rep), output_path(cfg, "output_json", args));
    return kExitOk;
}

int cmd_lerner_verify(const json& cfg, const CliArgs& args) {
    dyad::reject_unknown_keys(cfg, {"command", "input", "cube", "output_json"}, "lerner_verify");
    const dyad::StepFunction f =
        dyad::load_step_function(require_string(cfg, "input", "lerner_verify"));
    dyad::DyadicCube q0 = cfg.contains("cube") ? dyad::cube_from_json(cfg["cube"], f.dim())
                                               : dyad::DyadicCube::root(f.dim());
    const dyad::LernerDecomposition d = dyad::lerner_decompose(f, q0);
    const dyad::LernerResidualReport rep = dyad::verify_lerner_bound(f, q0, d);
    const bool structural = dyad::lerner_invariants_hold(d);
    json out{{"max_residual", rep.max_residual},
             {"max_ratio", rep.max_ratio},
             {"leaves", rep.leaves},
             {"structural_invariants", structural},
             {"pass", rep.pass && structural},
             {"decomposition", dyad::lerner_to_json(d)}};
    std::cout << "max residual: " << rep.max_residual << "\n"
              << ((rep.pass && structural) ? "PASS" : "FAIL") << "\n";
    if (auto path = output_path(cfg, "output_json", args)) emit(out, path);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dyadic operators, weight audits and sharpness experiments"};
    CliArgs args;
    app.add_option("--config", args.config_path, "JSON run configuration")->required();
    app.add_option("--seed", args.seed, "RNG seed (default 0)");
    app.add_option("--out", args.out_override, "override the primary output path");
    int threads_flag = 0;
    app.add_option("--threads", threads_flag, "worker threads (default 1)");
    CLI11_PARSE(app, argc, argv);

    if (threads_flag > 0) {
        args.threads = threads_flag;
    } else if (const char* env = std::getenv("DYADIC_SHARP_THREADS")) {
        args.threads = std::max(1, std::atoi(env));
    }

    try {
        const json cfg = dyad::load_json_file(args.config_path);
        if (!cfg.is_object() || !cfg.contains("command") || !cfg["command"].is_string())
            throw SchemaError("config: needs a 'command' string");
        const std::string command = cfg["command"].get<std::string>();
        if (command == "transform") return cmd_transform(cfg, args);
        if (command == "audit") return cmd_audit(cfg, args);
        if (command == "sweep") return cmd_sweep(cfg, args);
        if (command == "extremal") return cmd_extremal(cfg, args);
        if (command == "lerner_verify") return cmd_lerner_verify(cfg, args);
        throw SchemaError("config: unknown command '" + command + "'");
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const std::invalid_argument& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitOk;
}
