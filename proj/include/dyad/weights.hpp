#pragma once

#include "dyad/cube.hpp"
#include "dyad/step_function.hpp"
#include "dyad/young.hpp"

namespace dyad {

/// A weight is a step function with strictly positive leaf values.
class Weight {
public:
    explicit Weight(StepFunction w);

    const StepFunction& fn() const { return w_; }
    int dim() const { return w_.dim(); }

private:
    StepFunction w_;
};

/// [w]_{A_p} = max over tree nodes of (avg_Q w)(avg_Q w^{1-p'})^{p-1}.
/// Below-leaf cubes contribute exactly 1 and never exceed node values.
double ap_constant(const Weight& w, double p);

/// sup over tree nodes (common refinement of u, v) of
/// ||u^{1/p}||_{A,Q} ||v^{-1/p}||_{B,Q}.
double bump_constant(const Weight& u, const Weight& v, double p, const YoungFunction& A,
                     const YoungFunction& B);

/// Generic two-norm node supremum: sup_Q ||g1||_{A,Q}^{e1} ||g2||_{B,Q}^{e2}
/// over nodes of the common refinement of g1, g2 (used for the square-function
/// and vector-maximal bump variants).
double bump_supremum(const StepFunction& g1, const YoungFunction& A, double e1,
                     const StepFunction& g2, const YoungFunction& B, double e2);

/// (int |f|^p w)^{1/p}; the integrand is accumulated as (|f| w^{1/p})^p per
/// leaf so widely-scaled weights cannot overflow intermediates.
double weighted_lp_norm(const StepFunction& f, double p, const Weight& w);

/// ||b||_{*,d} = sup over nodes of (avg_I |b - b_I|^2)^{1/2}; n = 1 only.
double bmo_dyadic_norm(const StepFunction& b);

/// Step approximation of x^gamma on [0,1): exact cell averages on the
/// geometric leaves [2^{-k-1}, 2^{-k}), k < depth, plus the bottom cell
/// [0, 2^{-depth}). log2_scale shifts the whole weight by 2^{log2_scale}
/// (A_p constants and norm ratios are scale-invariant; deep singular familes
/// need centering to stay inside double range). Requires gamma > -1.
Weight power_weight(double gamma, int depth, double log2_scale = 0.0);

}  // namespace dyad
