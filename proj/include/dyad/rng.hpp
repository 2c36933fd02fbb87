#pragma once

#include <cstdint>

#include "dyad/step_function.hpp"

namespace dyad {

/// Counter-based generator (splitmix64). Deterministic across platforms;
/// fork(i) derives an independent stream for sub-task i, so parallel
/// schedules cannot change the outputs.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0,1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    Rng fork(std::uint64_t i) const {
        Rng r(state_ ^ (0x632be59bd9b4e019ULL * (i + 1)));
        r.next_u64();
        return r;
    }

private:
    std::uint64_t state_;
};

struct RandomTreeOptions {
    int max_depth = 6;
    double split_probability = 0.6;
    /// Values drawn from the dyadic lattice k/denominator (exact in binary
    /// floating point) when lattice=true, else uniform in [lo,hi].
    bool lattice = true;
    int lattice_numerator_range = 64;  // k in [-range, range]
    double lattice_denominator = 16.0;
    double lo = -4.0, hi = 4.0;
};

/// Random adaptive step function; the root is always split.
StepFunction random_step_function(int dim, Rng& rng, const RandomTreeOptions& opts = {});

/// Random positive weight: exp2 of a lattice exponent, values in [2^-r, 2^r].
StepFunction random_weight(int dim, Rng& rng, int max_depth = 6, int exp_range = 3);

/// Random dyadic sub-cube of the root, level in [min_level, max_level].
DyadicCube random_cube(int dim, Rng& rng, int min_level, int max_level);

}  // namespace dyad
