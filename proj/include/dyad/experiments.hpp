#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dyad/step_function.hpp"
#include "dyad/weights.hpp"
#include "dyad/young.hpp"

namespace dyad {

struct FitResult {
    double slope;
    double intercept;
    double r2;
};

/// Ordinary least squares through (x, y) pairs; throws on < 2 points or
/// degenerate abscissae.
FitResult exponent_fit(std::span<const std::pair<double, double>> points);

enum class OperatorTag {
    MaximalD,        // M^d
    HilbertD,        // H^d
    SquareD,         // S_d
    VectorMaximalD,  // Mbar_q^d (q from options)
};

std::string to_string(OperatorTag tag);

struct SweepPoint {
    double epsilon;
    double ap;
    double ratio;
};

struct SweepResult {
    std::string op;
    double p;
    std::vector<SweepPoint> points;
    FitResult fit;
};

struct SweepOptions {
    /// Buckley family depth. 0 = resolution-matched: the geometric tree is
    /// deepened to ~7.5/epsilon (capped so the centered family stays inside
    /// double range), which is what the power-law regime requires.
    int depth = 40;
    int random_candidates = 50;  // extra random lower-bound probes per point
    std::uint64_t seed = 0;
    double q = 2.0;  // ell^q exponent for the vector maximal
    int threads = 1;
};

/// Norm-ratio sweep over the Buckley family w_eps = x^{(1-eps)(p-1)},
/// f_eps = x^{-1+eps}: points are (log [w]_{A_p}, log ||Op f||/||f||) and the
/// fitted slope is a lower estimate of the sharp exponent alpha(p).
SweepResult sharpness_sweep(OperatorTag op, double p, std::span<const double> epsilons,
                            const SweepOptions& options = {});

nlohmann::json sweep_to_json(const SweepResult& r);
std::string sweep_to_csv(const SweepResult& r);

struct ExtremalReport {
    int J;
    std::vector<double> averages;       // F_i on [0,2^{-i}), i = 0..2J+1
    std::vector<double> ps;
    std::vector<double> f_norms;        // ||f||_p
    std::vector<double> sd_norms;       // ||S_d f||_p
    FitResult fit;                      // log(ratio) vs log(p)
    double last_pair_slope;             // slope between the two largest p
    double min_square_margin;           // min over shells of S_d^2 - i/9
};

/// The truncated spike chain f = sum_{j<=J} chi_{[2^{-2j-1}, 2^{-2j})} and its
/// square-function statistics.
ExtremalReport extremal_sd(int J, std::span<const double> ps);

StepFunction extremal_sd_function(int J);

nlohmann::json extremal_to_json(const ExtremalReport& r);

enum class LemmaTag {
    HilbertWeak11,      // sup_t t |{|H^d f| > t}| / ||f||_1
    HilbertOscillation, // lambda omega_lambda(H^d f, Q0) / avg_{Q0^1}|f|
    SquareOscillation,  // lambda^2 omega_lambda((S_d f)^2, Q0) / (avg_{Q0}|f|)^2
    VectorMaxLocal,     // (Mbar_q^q - K_0^q) / Mbar_q(f chi_Q0)^q  (<= 1 exactly)
};

struct CalibrationResult {
    double max_ratio;
    int trials_used;
};

/// Brute-force maximum of the lemma ratio over random instances; deterministic
/// in (tag, trials, depth, seed).
CalibrationResult lemma_constant_calibration(LemmaTag tag, int trials, int depth,
                                             std::uint64_t seed);

struct TwoWeightRow {
    int depth;
    double bump;
    double max_ratio;
};

struct TwoWeightReport {
    std::string op;
    double p;
    std::vector<TwoWeightRow> rows;
    bool blow_up;  // some consecutive-depth ratio grew by more than 2x
};

struct TwoWeightOptions {
    double gamma_u = 0.5;
    double gamma_v = 0.5;
    int functions_per_depth = 20;
    std::uint64_t seed = 0;
    double q = 2.0;
};

/// Log-bump two-weight check: verifies the B_p preconditions of (A, B); for
/// each depth reports the bump constant of the power-weight pair and the
/// worst ratio ||Op f||_{L^p(u)} / ||f||_{L^p(v)} over random f.
TwoWeightReport two_weight_singular_check(OperatorTag op, double p, const YoungFunction& A,
                                          const YoungFunction& B, std::span<const int> depths,
                                          const TwoWeightOptions& options = {});

nlohmann::json two_weight_to_json(const TwoWeightReport& r);

}  // namespace dyad
