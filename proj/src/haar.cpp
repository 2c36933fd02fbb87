#include "dyad/haar.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace dyad {

namespace {

void require_line(int dim, const char* who) {
    if (dim != 1) throw std::invalid_argument(std::string(who) + ": only defined for n = 1");
}

double inv_sqrt_measure(const DyadicCube& I) { return std::sqrt(std::ldexp(1.0, I.level())); }

}  // namespace

StepFunction haar_function(const DyadicCube& I) {
    require_line(I.dim(), "haar_function");
    const double amp = inv_sqrt_measure(I);
    StepBuilder b(1);
    b.add_on_cube(I.child(0), amp);
    b.add_on_cube(I.child(1), -amp);
    return b.take();
}

double haar_coefficient(const StepFunction& f, const DyadicCube& I) {
    require_line(f.dim(), "haar_coefficient");
    require_line(I.dim(), "haar_coefficient");
    const double il = f.integral_over(I.child(0));
    const double ir = f.integral_over(I.child(1));
    return (il - ir) * inv_sqrt_measure(I);
}

StepFunction haar_reconstruct(const StepFunction& f, const DyadicCube& q0) {
    require_line(f.dim(), "haar_reconstruct");
    require_line(q0.dim(), "haar_reconstruct");
    StepBuilder out(StepFunction::constant(1, f.average_over(q0)));
    // Coefficients vanish below leaf level, so the sum stops where f is constant.
    std::function<void(const DyadicCube&)> rec = [&](const DyadicCube& I) {
        if (leaf_pieces(f, I).size() == 1) return;
        const double amp = haar_coefficient(f, I) * inv_sqrt_measure(I);
        out.add_on_cube(I.child(0), amp);
        out.add_on_cube(I.child(1), -amp);
        rec(I.child(0));
        rec(I.child(1));
    };
    rec(q0);
    return out.take();
}

}  // namespace dyad
