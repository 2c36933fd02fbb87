#pragma once

#include <vector>

#include "dyad/cube.hpp"
#include "dyad/step_function.hpp"

namespace dyad {

/// Distinct |values| with their measures, as seen on Q. Used by the
/// rearrangement and the weak-norm suprema.
struct ValueDistribution {
    std::vector<double> values;    // ascending, distinct
    std::vector<double> measures;  // aligned with values
    double total = 0.0;            // |Q|
};

ValueDistribution value_distribution(const StepFunction& f, const DyadicCube& q);

/// (f chi_Q)^*(t) = inf{a>0 : |{|f|>a}| < t}, left-continuous convention.
/// Computed exactly from the finite leaf distribution. Requires 0 < t <= |Q|.
double rearrangement_value(const StepFunction& f, const DyadicCube& q, double t);

/// ||f||_{L^{p,inf}(Q, |Q|^{-1}dx)} = sup_a a (|{x in Q : |f|>a}|/|Q|)^{1/p}.
double weak_lp_norm(const StepFunction& f, const DyadicCube& q, double p);

/// All medians of f on Q form the interval [lo, hi]; canonical is the minimal
/// median lo.
struct MedianResult {
    double lo;
    double hi;
    double canonical;  // = lo
};

MedianResult median(const StepFunction& f, const DyadicCube& q);

/// Local mean oscillation omega_lambda(f,Q) = inf_c ((f-c)chi_Q)^*(lambda|Q|),
/// computed by the sliding-window algorithm over the sorted leaf values. The
/// infimum is attained; *center (optional) receives an optimal c.
double local_mean_oscillation(const StepFunction& f, const DyadicCube& q, double lambda,
                              double* center = nullptr);

/// (omega_lambda(f,Q), ((f - m_f(Q))chi_Q)^*(lambda |Q|)) for lambda <= 1/2;
/// the sandwich omega <= centered <= 2 omega holds.
std::pair<double, double> median_oscillation_bounds(const StepFunction& f, const DyadicCube& q,
                                                    double lambda);

/// M^{#,d}_{lambda,Q0} f = sup over dyadic Q' in Delta(Q0) containing x of
/// omega_lambda(f,Q'). Piecewise constant on the leaves under Q0; zero outside.
StepFunction local_sharp_maximal(const StepFunction& f, const DyadicCube& q0, double lambda);

}  // namespace dyad
