#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dyad/cube.hpp"
#include "dyad/step_function.hpp"

namespace dyad {

/// Rejected shift specifications carry the violating entry.
class ShiftSpecError : public std::invalid_argument {
public:
    ShiftSpecError(std::size_t entry, const std::string& why)
        : std::invalid_argument("shift spec entry " + std::to_string(entry) + ": " + why),
          entry_index(entry) {}
    std::size_t entry_index;
};

/// One coefficient a_{Q',Q''} of the outer cube Q.
struct ShiftEntry {
    DyadicCube outer;  // Q
    DyadicCube from;   // Q'
    DyadicCube to;     // Q''
    double a;
};

/// Haar shift operator of index tau:
///   H_tau f = sum_Q sum_{Q',Q'' in Delta(Q), |Q'|,|Q''| >= 2^{-tau n}|Q|}
///             a_{Q',Q''} <f,h_{Q'}> h_{Q''}
/// with |a| <= C (|Q'||Q''|/|Q|^2)^{1/2}. The normalization constant C is part
/// of the spec (the dyadic Hilbert realization needs C = sqrt(2) to carry its
/// a = ±1 coefficients). n = 1 (canonical Haar system).
class HaarShiftSpec {
public:
    HaarShiftSpec(int tau, std::vector<ShiftEntry> entries, double normalization = 1.0);

    /// H^d on scales 0..max_level: tau = 1, a = ±1, C = sqrt(2).
    static HaarShiftSpec dyadic_hilbert_spec(int max_level);

    int tau() const { return tau_; }
    double normalization() const { return normalization_; }
    const std::vector<ShiftEntry>& entries() const { return entries_; }

    nlohmann::json to_json() const;
    static HaarShiftSpec from_json(const nlohmann::json& j);

private:
    int tau_;
    double normalization_;
    std::vector<ShiftEntry> entries_;
};

StepFunction haar_shift(const HaarShiftSpec& spec, const StepFunction& f);

/// Generalized Haar shift T f = sum_Q <f, g_Q> gamma_Q where g_Q, gamma_Q are
/// supported in Q, constant on subcubes Q' with |Q'| <= 2^{-tau n}|Q|, and
/// bounded by norm_scale * |Q|^{-1/2}.
struct GeneralizedShiftTerm {
    DyadicCube cube;
    StepFunction g;
    StepFunction gamma;
};

class GeneralizedShiftSpec {
public:
    GeneralizedShiftSpec(int tau, std::vector<GeneralizedShiftTerm> terms, double norm_scale = 1.0);

    /// Exact H^d realization: g_Q = h_Q, gamma_Q = h_{Q-} - h_{Q+} on scales
    /// 0..max_level (tau = 2, norm_scale = sqrt(2)).
    static GeneralizedShiftSpec dyadic_hilbert_spec(int max_level);
    /// Paraproduct realization: g_Q = |Q|^{-1/2} chi_Q, gamma_Q = <b,h_Q>|Q|^{-1/2} h_Q.
    static GeneralizedShiftSpec paraproduct_spec(const StepFunction& b, int max_level);

    int tau() const { return tau_; }
    double norm_scale() const { return norm_scale_; }
    const std::vector<GeneralizedShiftTerm>& terms() const { return terms_; }

    nlohmann::json to_json() const;
    static GeneralizedShiftSpec from_json(const nlohmann::json& j);

private:
    int tau_;
    double norm_scale_;
    std::vector<GeneralizedShiftTerm> terms_;
};

StepFunction generalized_haar_shift(const GeneralizedShiftSpec& spec, const StepFunction& f);

/// Sum restricted to cubes with |Q| >= epsilon^n.
StepFunction truncated_shift(const GeneralizedShiftSpec& spec, const StepFunction& f,
                             double epsilon);

/// T_* f = sup over epsilon of |T_epsilon f| (finitely many distinct scales;
/// the empty truncation contributes 0, so T_* f >= 0).
StepFunction maximal_haar_shift(const GeneralizedShiftSpec& spec, const StepFunction& f);

}  // namespace dyad
