#include "dyad/weights.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace dyad {

namespace {

/// Bottom-up integrals of two functions on their common refinement, taking the
/// node-wise maximum of `combine(avg1, avg2, level)`.
struct IntegralPair {
    double i1, i2;
};

}  // namespace

Weight::Weight(StepFunction w) : w_(std::move(w)) {
    bool ok = true;
    w_.visit_leaves([&](const DyadicCube&, double v) { ok = ok && v > 0.0 && std::isfinite(v); });
    if (!ok) throw std::invalid_argument("Weight: leaf values must be positive and finite");
}

double ap_constant(const Weight& w, double p) {
    if (!(p > 1.0)) throw std::invalid_argument("ap_constant: p must exceed 1");
    const double pp = p / (p - 1.0);
    const StepFunction dual = w.fn().map([&](double v) { return std::pow(v, 1.0 - pp); });
    const auto [a, b] = common_refinement(w.fn(), dual);
    double best = 1.0;
    const int n = w.dim();
    std::function<IntegralPair(const TreeNode&, const TreeNode&, int)> rec =
        [&](const TreeNode& x, const TreeNode& y, int level) -> IntegralPair {
        const double meas = std::ldexp(1.0, -level * n);
        IntegralPair r{0.0, 0.0};
        if (x.leaf()) {
            r = {x.value * meas, y.value * meas};
        } else {
            for (std::size_t i = 0; i < x.children.size(); ++i) {
                const IntegralPair c = rec(x.children[i], y.children[i], level + 1);
                r.i1 += c.i1;
                r.i2 += c.i2;
            }
        }
        const double avg1 = std::ldexp(r.i1, level * n);
        const double avg2 = std::ldexp(r.i2, level * n);
        best = std::max(best, avg1 * std::pow(avg2, p - 1.0));
        return r;
    };
    rec(a.root(), b.root(), 0);
    return best;
}

double bump_supremum(const StepFunction& g1, const YoungFunction& A, double e1,
                     const StepFunction& g2, const YoungFunction& B, double e2) {
    const auto [ra, rb] = common_refinement(g1, g2);
    double best = 0.0;
    std::function<void(const DyadicCube&, const TreeNode&)> walk = [&](const DyadicCube& q,
                                                                       const TreeNode&) {
        const double n1 = luxemburg_norm(A, ra, q);
        const double n2 = luxemburg_norm(B, rb, q);
        best = std::max(best, std::pow(n1, e1) * std::pow(n2, e2));
    };
    ra.visit_nodes(walk);
    return best;
}

double bump_constant(const Weight& u, const Weight& v, double p, const YoungFunction& A,
                     const YoungFunction& B) {
    if (!(p > 1.0)) throw std::invalid_argument("bump_constant: p must exceed 1");
    const StepFunction up = u.fn().map([&](double x) { return std::pow(x, 1.0 / p); });
    const StepFunction vm = v.fn().map([&](double x) { return std::pow(x, -1.0 / p); });
    return bump_supremum(up, A, 1.0, vm, B, 1.0);
}

double weighted_lp_norm(const StepFunction& f, double p, const Weight& w) {
    if (!(p >= 1.0)) throw std::invalid_argument("weighted_lp_norm: p must be >= 1");
    const double inv_p = 1.0 / p;
    double total = 0.0;
    const StepFunction probe = zip(f, w.fn(), [&](double fv, double wv) {
        return std::abs(fv) * std::pow(wv, inv_p);
    });
    probe.visit_leaves([&](const DyadicCube& q, double v) { total += std::pow(v, p) * q.measure(); });
    return std::pow(total, inv_p);
}

double bmo_dyadic_norm(const StepFunction& b) {
    if (b.dim() != 1) throw std::invalid_argument("bmo_dyadic_norm: only defined for n = 1");
    double best = 0.0;
    std::function<IntegralPair(const TreeNode&, int)> rec = [&](const TreeNode& t,
                                                                int level) -> IntegralPair {
        const double meas = std::ldexp(1.0, -level);
        IntegralPair r{0.0, 0.0};  // (int b, int b^2)
        if (t.leaf()) {
            r = {t.value * meas, t.value * t.value * meas};
        } else {
            for (const auto& c : t.children) {
                const IntegralPair s = rec(c, level + 1);
                r.i1 += s.i1;
                r.i2 += s.i2;
            }
        }
        const double mean = std::ldexp(r.i1, level);
        const double mean_sq = std::ldexp(r.i2, level);
        best = std::max(best, std::sqrt(std::max(0.0, mean_sq - mean * mean)));
        return r;
    };
    rec(b.root(), 0);
    return best;
}

Weight power_weight(double gamma, int depth, double log2_scale) {
    if (!(gamma > -1.0)) throw std::invalid_argument("power_weight: gamma must exceed -1");
    if (depth < 1 || depth > 1060) throw std::invalid_argument("power_weight: bad depth");
    // Cell average of x^gamma over [2^{-k-1}, 2^{-k}):
    //   2^{-k gamma} (1 - 2^{-(gamma+1)}) / ((gamma+1)/2).
    const double shell_const = (1.0 - std::exp2(-(gamma + 1.0))) * 2.0 / (gamma + 1.0);
    std::vector<std::pair<DyadicCube, double>> leaves;
    leaves.reserve(static_cast<std::size_t>(depth) + 1);
    for (int k = 0; k < depth; ++k) {
        const double v = shell_const * std::exp2(log2_scale - gamma * k);
        leaves.emplace_back(DyadicCube(1, k + 1, {1}), v);
    }
    const double bottom = std::exp2(log2_scale - gamma * depth) / (gamma + 1.0);
    leaves.emplace_back(DyadicCube(1, depth, {0}), bottom);
    return Weight(StepFunction::from_leaves(1, leaves));
}

}  // namespace dyad
