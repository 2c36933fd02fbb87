#pragma once

#include "dyad/cube.hpp"
#include "dyad/step_function.hpp"

namespace dyad {

/// h_I = |I|^{-1/2} (chi_{I-} - chi_{I+}) as a step function on [0,1). n=1 only.
StepFunction haar_function(const DyadicCube& I);

/// <f, h_I> = |I|^{-1/2} (int_{I-} f - int_{I+} f); zero when f is constant on I.
double haar_coefficient(const StepFunction& f, const DyadicCube& I);

/// f_{Q0} + sum over I in Delta(Q0) of <f,h_I> h_I. Equals f on Q0 (and the
/// constant f_{Q0} outside Q0).
StepFunction haar_reconstruct(const StepFunction& f, const DyadicCube& q0);

}  // namespace dyad
