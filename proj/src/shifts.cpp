#include "dyad/shifts.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "dyad/haar.hpp"
#include "dyad/serialization.hpp"

namespace dyad {

namespace {

double inv_sqrt_measure(const DyadicCube& q) {
    return std::sqrt(std::ldexp(1.0, q.level() * q.dim()));
}

}  // namespace

HaarShiftSpec::HaarShiftSpec(int tau, std::vector<ShiftEntry> entries, double normalization)
    : tau_(tau), normalization_(normalization), entries_(std::move(entries)) {
    if (tau_ < 0) throw std::invalid_argument("HaarShiftSpec: tau must be >= 0");
    if (!(normalization_ > 0.0)) throw std::invalid_argument("HaarShiftSpec: bad normalization");
    const double c2 = normalization_ * normalization_;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const ShiftEntry& e = entries_[i];
        if (e.outer.dim() != 1 || e.from.dim() != 1 || e.to.dim() != 1)
            throw ShiftSpecError(i, "only n = 1 cubes are supported");
        if (!e.outer.contains(e.from) || !e.outer.contains(e.to))
            throw ShiftSpecError(i, "Q', Q'' must lie inside Q");
        if (e.from.level() > e.outer.level() + tau_ || e.to.level() > e.outer.level() + tau_)
            throw ShiftSpecError(i, "|Q'|,|Q''| must be >= 2^{-tau n}|Q|");
        // |a|^2 |Q|^2 <= C^2 |Q'||Q''| in exact powers of two.
        const double lhs = e.a * e.a * std::ldexp(1.0, -2 * e.outer.level());
        const double rhs = c2 * std::ldexp(1.0, -e.from.level() - e.to.level());
        if (lhs > rhs * (1.0 + 1e-12))
            throw ShiftSpecError(i, "coefficient bound |a| <= C sqrt(|Q'||Q''|)/|Q| violated");
    }
}

HaarShiftSpec HaarShiftSpec::dyadic_hilbert_spec(int max_level) {
    std::vector<ShiftEntry> entries;
    for (int l = 0; l <= max_level; ++l) {
        for (std::uint64_t k = 0; k < (std::uint64_t{1} << l); ++k) {
            const DyadicCube I(1, l, {k});
            entries.push_back({I, I, I.child(0), 1.0});
            entries.push_back({I, I, I.child(1), -1.0});
        }
    }
    return HaarShiftSpec(1, std::move(entries), std::sqrt(2.0));
}

nlohmann::json HaarShiftSpec::to_json() const {
    nlohmann::json ents = nlohmann::json::array();
    for (const auto& e : entries_)
        ents.push_back(nlohmann::json{{"Q", cube_to_json(e.outer)},
                                      {"Qp", cube_to_json(e.from)},
                                      {"Qpp", cube_to_json(e.to)},
                                      {"a", e.a}});
    return nlohmann::json{{"tau", tau_}, {"c", normalization_}, {"entries", std::move(ents)}};
}

HaarShiftSpec HaarShiftSpec::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("tau") || !j.contains("entries"))
        throw SchemaError("shift spec: expected {tau, entries}");
    reject_unknown_keys(j, {"tau", "c", "entries"}, "shift spec");
    if (!j["tau"].is_number_integer()) throw SchemaError("shift spec: tau must be an integer");
    double c = 1.0;
    if (j.contains("c")) {
        if (!j["c"].is_number()) throw SchemaError("shift spec: c must be a number");
        c = j["c"].get<double>();
    }
    std::vector<ShiftEntry> entries;
    for (const auto& e : j["entries"]) {
        if (!e.is_object()) throw SchemaError("shift spec: entry must be an object");
        reject_unknown_keys(e, {"Q", "Qp", "Qpp", "a"}, "shift spec entry");
        if (!e.contains("Q") || !e.contains("Qp") || !e.contains("Qpp") || !e.contains("a"))
            throw SchemaError("shift spec: entry needs Q, Qp, Qpp, a");
        if (!e["a"].is_number()) throw SchemaError("shift spec: a must be a number");
        entries.push_back({cube_from_json(e["Q"]), cube_from_json(e["Qp"]), cube_from_json(e["Qpp"]),
                           e["a"].get<double>()});
    }
    return HaarShiftSpec(j["tau"].get<int>(), std::move(entries), c);
}

StepFunction haar_shift(const HaarShiftSpec& spec, const StepFunction& f) {
    if (f.dim() != 1) throw std::invalid_argument("haar_shift: only defined for n = 1");
    StepBuilder out(1);
    for (const auto& e : spec.entries()) {
        const double coeff = haar_coefficient(f, e.from);
        if (coeff == 0.0) continue;
        const double amp = e.a * coeff * inv_sqrt_measure(e.to);
        out.add_on_cube(e.to.child(0), amp);
        out.add_on_cube(e.to.child(1), -amp);
    }
    return out.take();
}

namespace {

void validate_term(std::size_t i, int tau, double norm_scale, const GeneralizedShiftTerm& t) {
    const auto check = [&](const StepFunction& g, const char* which) {
        if (g.dim() != t.cube.dim()) throw ShiftSpecError(i, "dimension mismatch");
        const double bound = norm_scale * inv_sqrt_measure(t.cube) * (1.0 + 1e-12);
        // support in cube, sup bound
        g.visit_leaves([&](const DyadicCube& q, double v) {
            if (!t.cube.contains(q) && v != 0.0)
                throw ShiftSpecError(i, std::string(which) + " not supported in its cube");
            if (std::abs(v) > bound)
                throw ShiftSpecError(i, std::string(which) + " exceeds the |Q|^{-1/2} bound");
        });
        // constancy on subcubes Q' with |Q'| <= 2^{-tau n}|Q|: every node at
        // level cube.level + tau inside the cube carries a constant value.
        std::function<void(const DyadicCube&)> walk = [&](const DyadicCube& q) {
            if (q.level() >= t.cube.level() + tau) {
                if (leaf_spread(g, q) != 0.0)
                    throw ShiftSpecError(i, std::string(which) + " not constant at index depth");
                return;
            }
            const auto pieces = leaf_pieces(g, q);
            if (pieces.size() == 1) return;
            for (unsigned c = 0; c < q.child_count(); ++c) walk(q.child(c));
        };
        walk(t.cube);
    };
    check(t.g, "g_Q");
    check(t.gamma, "gamma_Q");
}

}  // namespace

GeneralizedShiftSpec::GeneralizedShiftSpec(int tau, std::vector<GeneralizedShiftTerm> terms,
                                           double norm_scale)
    : tau_(tau), norm_scale_(norm_scale), terms_(std::move(terms)) {
    if (tau_ < 0) throw std::invalid_argument("GeneralizedShiftSpec: tau must be >= 0");
    if (!(norm_scale_ > 0.0)) throw std::invalid_argument("GeneralizedShiftSpec: bad norm scale");
    for (std::size_t i = 0; i < terms_.size(); ++i) validate_term(i, tau_, norm_scale_, terms_[i]);
}

GeneralizedShiftSpec GeneralizedShiftSpec::dyadic_hilbert_spec(int max_level) {
    std::vector<GeneralizedShiftTerm> terms;
    for (int l = 0; l <= max_level; ++l)
        for (std::uint64_t k = 0; k < (std::uint64_t{1} << l); ++k) {
            const DyadicCube I(1, l, {k});
            StepFunction gamma = haar_function(I.child(0)) - haar_function(I.child(1));
            terms.push_back({I, haar_function(I), std::move(gamma)});
        }
    return GeneralizedShiftSpec(2, std::move(terms), std::sqrt(2.0));
}

GeneralizedShiftSpec GeneralizedShiftSpec::paraproduct_spec(const StepFunction& b, int max_level) {
    std::vector<GeneralizedShiftTerm> terms;
    for (int l = 0; l <= max_level; ++l)
        for (std::uint64_t k = 0; k < (std::uint64_t{1} << l); ++k) {
            const DyadicCube I(1, l, {k});
            StepBuilder gb(1);
            gb.add_on_cube(I, inv_sqrt_measure(I));
            const double cb = haar_coefficient(b, I);
            StepFunction gamma = (cb * inv_sqrt_measure(I)) * haar_function(I);
            terms.push_back({I, gb.take(), std::move(gamma)});
        }
    return GeneralizedShiftSpec(1, std::move(terms), 1.0);
}

nlohmann::json GeneralizedShiftSpec::to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : terms_)
        terms.push_back(nlohmann::json{{"cube", cube_to_json(t.cube)},
                                       {"g", step_function_to_json(t.g)},
                                       {"gamma", step_function_to_json(t.gamma)}});
    return nlohmann::json{
        {"tau", tau_}, {"norm_scale", norm_scale_}, {"terms", std::move(terms)}};
}

GeneralizedShiftSpec GeneralizedShiftSpec::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("tau") || !j.contains("terms"))
        throw SchemaError("generalized shift spec: expected {tau, terms}");
    reject_unknown_keys(j, {"tau", "norm_scale", "terms"}, "generalized shift spec");
    if (!j["tau"].is_number_integer())
        throw SchemaError("generalized shift spec: tau must be an integer");
    double scale = 1.0;
    if (j.contains("norm_scale")) {
        if (!j["norm_scale"].is_number())
            throw SchemaError("generalized shift spec: norm_scale must be a number");
        scale = j["norm_scale"].get<double>();
    }
    std::vector<GeneralizedShiftTerm> terms;
    for (const auto& t : j["terms"]) {
        if (!t.is_object() || !t.contains("cube") || !t.contains("g") || !t.contains("gamma"))
            throw SchemaError("generalized shift spec: term needs cube, g, gamma");
        reject_unknown_keys(t, {"cube", "g", "gamma"}, "generalized shift term");
        terms.push_back({cube_from_json(t["cube"]), step_function_from_json(t["g"]),
                         step_function_from_json(t["gamma"])});
    }
    return GeneralizedShiftSpec(j["tau"].get<int>(), std::move(terms), scale);
}

namespace {

StepFunction shift_sum(const GeneralizedShiftSpec& spec, const StepFunction& f,
                       const std::function<bool(const DyadicCube&)>& include) {
    StepFunction out = StepFunction::constant(f.dim(), 0.0);
    for (const auto& t : spec.terms()) {
        if (!include(t.cube)) continue;
        double inner = 0.0;
        const StepFunction prod = f * t.g;
        inner = prod.integral();
        if (inner == 0.0) continue;
        out = out + inner * t.gamma;
    }
    return out;
}

}  // namespace

StepFunction generalized_haar_shift(const GeneralizedShiftSpec& spec, const StepFunction& f) {
    return shift_sum(spec, f, [](const DyadicCube&) { return true; });
}

StepFunction truncated_shift(const GeneralizedShiftSpec& spec, const StepFunction& f,
                             double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("truncated_shift: epsilon must be positive");
    // |Q| >= epsilon^n is equivalent to side(Q) >= epsilon.
    return shift_sum(spec, f,
                     [epsilon](const DyadicCube& q) { return q.side_length() >= epsilon; });
}

StepFunction maximal_haar_shift(const GeneralizedShiftSpec& spec, const StepFunction& f) {
    std::set<int> levels;
    for (const auto& t : spec.terms()) levels.insert(t.cube.level());
    StepFunction best = StepFunction::constant(f.dim(), 0.0);  // empty truncation
    for (int l : levels) {
        const StepFunction te = truncated_shift(spec, f, std::ldexp(1.0, -l));
        best = zip(best, te, [](double a, double b) { return std::max(a, std::abs(b)); });
    }
    return best;
}

}  // namespace dyad
