#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "dyad/cube.hpp"
#include "dyad/step_function.hpp"

namespace dyad {

/// Asymptotic growth powers t^r log(e+t)^a, used to classify B_p membership.
struct GrowthPowers {
    double r;
    double a;
};

/// Young function descriptor: power(r) = scale*t^r, log_bump(r,a) =
/// scale*t^r*log(e+t)^a, or a custom evaluator. The associate (Legendre dual)
/// is closed-form for powers and a numeric upper envelope otherwise, tagged
/// with its asymptotic growth for B_p classification.
class YoungFunction {
public:
    enum class Family { Power, LogBump, Custom };

    static YoungFunction power(double r, double scale = 1.0);
    static YoungFunction log_bump(double r, double a, double scale = 1.0);
    static YoungFunction custom(std::string name, std::function<double(double)> eval,
                                std::optional<GrowthPowers> asymptotic = std::nullopt);

    double operator()(double t) const;
    /// Monotone inverse on [0, inf).
    double inverse(double y) const;

    YoungFunction associate() const;

    Family family() const { return family_; }
    double exponent() const { return r_; }
    double log_exponent() const { return a_; }
    double scale() const { return scale_; }
    const std::string& name() const { return name_; }
    const std::optional<GrowthPowers>& asymptotic() const { return asymptotic_; }

    nlohmann::json to_json() const;
    static YoungFunction from_json(const nlohmann::json& j);

private:
    YoungFunction() = default;

    Family family_ = Family::Power;
    double r_ = 1.0, a_ = 0.0, scale_ = 1.0;
    std::function<double(double)> eval_;
    std::optional<GrowthPowers> asymptotic_;
    std::string name_;
};

enum class BpVerdict { In, Out, Inconclusive };

/// A in B_p iff int^inf A(t)/t^p dt/t < inf. Analytic for power/log-bump
/// families (and for customs carrying an asymptotic tag); numeric quadrature
/// with a divergence heuristic otherwise.
BpVerdict bp_classify(const YoungFunction& A, double p);

/// Localized Luxemburg norm ||f||_{A,Q} = inf{l>0 : avg_Q A(|f|/l) <= 1},
/// bisection to relative tolerance 1e-12 (returns the feasible endpoint).
double luxemburg_norm(const YoungFunction& A, const StepFunction& f, const DyadicCube& q);

}  // namespace dyad
