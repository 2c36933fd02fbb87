#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "dyad/cube.hpp"
#include "dyad/oscillation.hpp"
#include "dyad/rng.hpp"
#include "dyad/shifts.hpp"
#include "dyad/step_function.hpp"

namespace testsupport {

using dyad::DyadicCube;
using dyad::StepFunction;

/// Independent oracle for the local mean oscillation: sweep c over all
/// pairwise midpoints and all leaf values, computing the rearrangement of
/// (f - c)chi_Q from first principles each time.
inline double brute_force_omega(const StepFunction& f, const DyadicCube& q, double lambda) {
    const auto pieces = dyad::leaf_pieces(f, q);
    std::vector<double> vals;
    std::vector<std::pair<double, double>> vm;  // (value, measure)
    for (const auto& [cube, v] : pieces) vm.emplace_back(v, cube.measure());
    {
        std::set<double> distinct;
        for (const auto& [v, m] : vm) distinct.insert(v);
        vals.assign(distinct.begin(), distinct.end());
    }
    std::vector<double> candidates(vals);
    for (std::size_t i = 0; i < vals.size(); ++i)
        for (std::size_t j = i; j < vals.size(); ++j)
            candidates.push_back((vals[i] + vals[j]) / 2.0);

    const double total = q.measure();
    const double t = lambda * total;
    auto rearrangement_at = [&](double c) {
        std::map<double, double> dist;  // |f - c| -> measure
        for (const auto& [v, m] : vm) dist[std::abs(v - c)] += m;
        double cum = 0.0;
        for (auto it = dist.rbegin(); it != dist.rend(); ++it) {
            cum += it->second;
            if (cum >= t) return it->first;
        }
        return 0.0;
    };
    double best = std::numeric_limits<double>::infinity();
    for (double c : candidates) best = std::min(best, rearrangement_at(c));
    return best;
}

/// Refine the partition by splitting `splits` random leaves (values copied);
/// the function is unchanged pointwise.
inline StepFunction refine_randomly(const StepFunction& f, dyad::Rng& rng, int splits) {
    std::vector<std::pair<DyadicCube, double>> leaves;
    f.visit_leaves([&](const DyadicCube& q, double v) { leaves.emplace_back(q, v); });
    for (int s = 0; s < splits && !leaves.empty(); ++s) {
        const std::size_t pick = static_cast<std::size_t>(rng.below(leaves.size()));
        const auto [cube, value] = leaves[pick];
        if (cube.level() > 40) continue;
        leaves.erase(leaves.begin() + static_cast<std::ptrdiff_t>(pick));
        for (unsigned c = 0; c < cube.child_count(); ++c) leaves.emplace_back(cube.child(c), value);
    }
    return StepFunction::from_leaves(f.dim(), leaves);
}

inline StepFunction uniform1(std::initializer_list<double> vals) {
    int level = 0;
    while ((std::size_t{1} << level) < vals.size()) ++level;
    return StepFunction::from_uniform(1, level, std::vector<double>(vals));
}

/// Random valid Haar shift spec of index tau on levels 0..max_level.
inline dyad::HaarShiftSpec random_shift_spec(dyad::Rng& rng, int tau, int max_level) {
    std::vector<dyad::ShiftEntry> entries;
    for (int l = 0; l <= max_level; ++l)
        for (std::uint64_t k = 0; k < (std::uint64_t{1} << l); ++k) {
            const DyadicCube q(1, l, {k});
            for (int pick = 0; pick < 2; ++pick) {
                const int lp = l + static_cast<int>(rng.below(tau + 1));
                const int lpp = l + static_cast<int>(rng.below(tau + 1));
                const std::uint64_t kp = (k << (lp - l)) + rng.below(std::uint64_t{1} << (lp - l));
                const std::uint64_t kpp =
                    (k << (lpp - l)) + rng.below(std::uint64_t{1} << (lpp - l));
                const double bound = std::sqrt(std::ldexp(1.0, 2 * l - lp - lpp));
                const double a = bound * (2.0 * rng.next_double() - 1.0);
                entries.push_back(
                    {q, DyadicCube(1, lp, {kp}), DyadicCube(1, lpp, {kpp}), a});
            }
        }
    return dyad::HaarShiftSpec(tau, std::move(entries));
}

/// Random valid generalized shift spec of index tau on levels 0..max_level.
inline dyad::GeneralizedShiftSpec random_generalized_spec(dyad::Rng& rng, int tau, int max_level) {
    std::vector<dyad::GeneralizedShiftTerm> terms;
    for (int l = 0; l <= max_level; ++l)
        for (std::uint64_t k = 0; k < (std::uint64_t{1} << l); ++k) {
            const DyadicCube q(1, l, {k});
            auto make = [&]() {
                const double bound = std::sqrt(std::ldexp(1.0, l));
                dyad::StepBuilder b(1);
                std::function<void(const DyadicCube&, int)> rec = [&](const DyadicCube& c,
                                                                      int depth) {
                    if (depth == 0 || rng.next_double() < 0.35) {
                        b.add_on_cube(c, bound * (2.0 * rng.next_double() - 1.0));
                        return;
                    }
                    rec(c.child(0), depth - 1);
                    rec(c.child(1), depth - 1);
                };
                rec(q, tau);
                return b.take();
            };
            terms.push_back({q, make(), make()});
        }
    return dyad::GeneralizedShiftSpec(tau, std::move(terms));
}

}  // namespace testsupport
