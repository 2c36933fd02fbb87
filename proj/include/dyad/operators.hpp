#pragma once

#include <functional>
#include <map>
#include <vector>

#include "dyad/cube.hpp"
#include "dyad/step_function.hpp"
#include "dyad/weights.hpp"
#include "dyad/young.hpp"

namespace dyad {

/// H^d f = sum_I <f,h_I>(h_{I-} - h_{I+}), the Haar shift of index 1 with
/// coefficients ±1 (dyadic Hilbert transform). n = 1 only.
StepFunction dyadic_hilbert(const StepFunction& f);

/// pi_b f = sum_I f_I <b,h_I> h_I. n = 1 only.
StepFunction paraproduct(const StepFunction& b, const StepFunction& f);

/// T_alpha f = sum_I alpha(I) <f,h_I> h_I. On the root cube alpha == 1 gives
/// f - f_{[0,1)} (the grid has a coarsest scale). n = 1 only.
StepFunction haar_multiplier(const std::function<double(const DyadicCube&)>& alpha,
                             const StepFunction& f);
StepFunction haar_multiplier(double alpha_const, const StepFunction& f);
/// Map form: missing intervals get coefficient 0.
StepFunction haar_multiplier(const std::map<DyadicCube, double>& alpha, const StepFunction& f);

/// S_d f = (sum over Q strictly inside the root of (f_Q - f_{Qhat})^2 chi_Q)^{1/2}.
StepFunction square_function(const StepFunction& f);

/// sum over Q with Q0 <= Q < root of (f_Q - f_{Qhat})^2: the part of S_d f^2
/// contributed by scales at or above Q0, constant on Q0.
double square_tail_constant(const StepFunction& f, const DyadicCube& q0);

/// M^d f(x) = sup over dyadic Q containing x of avg_Q |f|.
StepFunction dyadic_maximal(const StepFunction& f);

/// M^d_sigma f(x) = sup over Q containing x of (1/sigma(Q)) int_Q |f| sigma.
StepFunction weighted_dyadic_maximal(const Weight& sigma, const StepFunction& f);

/// Mbar_q^d F = (sum_i (M^d f_i)^q)^{1/q}, 1 < q < infinity.
StepFunction vector_maximal(double q, std::span<const StepFunction> components);

/// K_0 = (sum_i (sup over Q containing q0 of avg_Q |f_i|)^q)^{1/q}: the
/// above-Q0 part of the vector maximal, constant on q0.
double vector_tail_sup(double q, std::span<const StepFunction> components, const DyadicCube& q0);

/// M_A f(x) = sup over dyadic Q containing x of ||f||_{A,Q} (Luxemburg norms
/// over the ancestor chain).
StepFunction orlicz_maximal(const YoungFunction& A, const StepFunction& f);

/// Rubio de Francia iteration R h = sum_{k=0}^{K-1} (M^d)^k h / (2 s')^k with
/// the analytic bound ||M^d||_{L^s} <= s'. Requires h >= 0, s > 1, K >= 1.
StepFunction rubio_de_francia(const StepFunction& h, double s, int iterations);

}  // namespace dyad
