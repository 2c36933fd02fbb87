#include "dyad/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

namespace dyad {

namespace {

/// Sorted distinct (value, measure) pairs of f on q, without taking |.|.
struct SignedDistribution {
    std::vector<double> values;    // ascending
    std::vector<double> measures;  // aligned
    double total = 0.0;
};

SignedDistribution signed_distribution(const StepFunction& f, const DyadicCube& q) {
    std::map<double, double> acc;
    for (const auto& [cube, v] : leaf_pieces(f, q)) acc[v] += cube.measure();
    SignedDistribution d;
    d.values.reserve(acc.size());
    d.measures.reserve(acc.size());
    for (const auto& [v, m] : acc) {
        d.values.push_back(v);
        d.measures.push_back(m);
        d.total += m;
    }
    d.total = q.measure();
    return d;
}

double rearrangement_from_distribution(const ValueDistribution& d, double t) {
    // Walk values in descending order accumulating measure; the first value at
    // which the accumulated measure reaches t is the rearrangement.
    double cum = 0.0;
    for (std::size_t i = d.values.size(); i-- > 0;) {
        cum += d.measures[i];
        if (cum >= t) return d.values[i];
    }
    return 0.0;  // t > |Q| is rejected by callers
}

}  // namespace

ValueDistribution value_distribution(const StepFunction& f, const DyadicCube& q) {
    std::map<double, double> acc;
    for (const auto& [cube, v] : leaf_pieces(f, q)) acc[std::abs(v)] += cube.measure();
    ValueDistribution d;
    d.values.reserve(acc.size());
    d.measures.reserve(acc.size());
    for (const auto& [v, m] : acc) {
        d.values.push_back(v);
        d.measures.push_back(m);
    }
    d.total = q.measure();
    return d;
}

double rearrangement_value(const StepFunction& f, const DyadicCube& q, double t) {
    if (!(t > 0.0 && t <= q.measure()))
        throw std::invalid_argument("rearrangement_value: t must lie in (0, |Q|]");
    return rearrangement_from_distribution(value_distribution(f, q), t);
}

double weak_lp_norm(const StepFunction& f, const DyadicCube& q, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("weak_lp_norm: p must be positive");
    const ValueDistribution d = value_distribution(f, q);
    // sup over a of a*(d(a)/|Q|)^{1/p} is approached as a -> v_j from below,
    // where the exceedance measure is |{|f| >= v_j}|.
    double best = 0.0;
    double cum = 0.0;
    for (std::size_t i = d.values.size(); i-- > 0;) {
        cum += d.measures[i];
        best = std::max(best, d.values[i] * std::pow(cum / d.total, 1.0 / p));
    }
    return best;
}

MedianResult median(const StepFunction& f, const DyadicCube& q) {
    const SignedDistribution d = signed_distribution(f, q);
    const double half = d.total / 2.0;
    // lo: smallest value with |{f <= lo}| >= |Q|/2.
    double lo = d.values.back();
    double cum = 0.0;
    for (std::size_t i = 0; i < d.values.size(); ++i) {
        cum += d.measures[i];
        if (cum >= half) {
            lo = d.values[i];
            break;
        }
    }
    // hi: largest value m with |{f < m}| <= |Q|/2 and |{f <= m}| >= |Q|/2.
    double hi = lo;
    cum = 0.0;
    for (std::size_t i = 0; i < d.values.size(); ++i) {
        const double below = cum;  // |{f < values[i]}|
        cum += d.measures[i];
        if (below <= half && cum >= half) hi = d.values[i];
    }
    return MedianResult{lo, hi, lo};
}

double local_mean_oscillation(const StepFunction& f, const DyadicCube& q, double lambda,
                              double* center) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw std::invalid_argument("local_mean_oscillation: lambda must lie in (0,1)");
    const SignedDistribution d = signed_distribution(f, q);
    const double t = lambda * d.total;
    const std::size_t k = d.values.size();
    std::vector<double> prefix(k + 1, 0.0);
    for (std::size_t i = 0; i < k; ++i) prefix[i + 1] = prefix[i] + d.measures[i];

    // Feasible window [i..j]: the mass outside it is < t, i.e. the exceedance
    // set of c = midpoint at height (u_j - u_i)/2 is admissible. Two-pointer
    // scan over minimal feasible windows.
    double best = std::numeric_limits<double>::infinity();
    double best_lo = d.values.front(), best_hi = d.values.front();
    std::size_t j = 0;
    for (std::size_t i = 0; i < k; ++i) {
        if (j < i) j = i;
        while (j < k && !(d.total - (prefix[j + 1] - prefix[i]) < t)) ++j;
        if (j == k) break;  // no feasible window from i on (mass inside only shrinks)
        const double width = (d.values[j] - d.values[i]) / 2.0;
        if (width < best) {
            best = width;
            best_lo = d.values[i];
            best_hi = d.values[j];
        }
    }
    if (center) *center = (best_lo + best_hi) / 2.0;
    return best;
}

std::pair<double, double> median_oscillation_bounds(const StepFunction& f, const DyadicCube& q,
                                                    double lambda) {
    if (!(lambda > 0.0 && lambda <= 0.5))
        throw std::invalid_argument("median_oscillation_bounds: lambda must lie in (0, 1/2]");
    const double omega = local_mean_oscillation(f, q, lambda);
    const double m = median(f, q).canonical;
    const double centered = rearrangement_value(f + (-m), q, lambda * q.measure());
    return {omega, centered};
}

StepFunction local_sharp_maximal(const StepFunction& f, const DyadicCube& q0, double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw std::invalid_argument("local_sharp_maximal: lambda must lie in (0,1)");
    StepBuilder out(f.dim());
    std::function<void(const DyadicCube&, double)> rec = [&](const DyadicCube& c, double running) {
        const auto pieces = leaf_pieces(f, c);
        if (pieces.size() == 1) {
            // f constant on c: omega vanishes here and below.
            out.add_on_cube(c, running);
            return;
        }
        const double w = local_mean_oscillation(f, c, lambda);
        const double r = std::max(running, w);
        for (unsigned i = 0; i < c.child_count(); ++i) rec(c.child(i), r);
    };
    rec(q0, 0.0);
    return out.take();
}

}  // namespace dyad
