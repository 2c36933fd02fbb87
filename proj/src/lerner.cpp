#include "dyad/lerner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "dyad/oscillation.hpp"
#include "dyad/serialization.hpp"

namespace dyad {

namespace {

double lambda_n(int dim) { return std::ldexp(1.0, -dim - 2); }

/// Measure of {x in c : |f(x) - m| > alpha}.
double exceed_measure(const StepFunction& f, const DyadicCube& c, double m, double alpha) {
    double s = 0.0;
    for (const auto& [cube, v] : leaf_pieces(f, c))
        if (std::abs(v - m) > alpha) s += cube.measure();
    return s;
}

/// Maximal dyadic Q <= P with |Q ∩ E| > |Q|/2, where E is the exceedance set
/// of (m, alpha) relative to f.
void select_cubes(const StepFunction& f, const DyadicCube& p, double m, double alpha,
                  std::vector<DyadicCube>& out) {
    const double e = exceed_measure(f, p, m, alpha);
    if (e > p.measure() / 2.0) {
        out.push_back(p);
        return;
    }
    if (e == 0.0) return;  // nothing below can be dense in an empty set
    if (leaf_pieces(f, p).size() == 1) return;
    for (unsigned i = 0; i < p.child_count(); ++i) select_cubes(f, p.child(i), m, alpha, out);
}

}  // namespace

LernerDecomposition lerner_decompose(const StepFunction& f, const DyadicCube& q0) {
    if (f.dim() != q0.dim()) throw std::invalid_argument("lerner_decompose: dimension mismatch");
    LernerDecomposition d{q0, {}, lambda_n(f.dim())};

    std::vector<DyadicCube> current{q0};
    while (!current.empty()) {
        std::vector<DyadicCube> next;
        for (const auto& p : current) {
            const double m = median(f, p).canonical;
            const double alpha = rearrangement_value(f + (-m), p, d.lambda * p.measure());
            // |E(P)| < lambda |P| by the strict rearrangement convention, so the
            // selected cubes are strictly smaller than P and recursion stops at
            // leaf scale (E is empty once f is constant).
            select_cubes(f, p, m, alpha, next);
        }
        if (!next.empty()) d.generations.push_back(next);
        current = std::move(next);
        if (d.generations.size() > 200)
            throw std::runtime_error("lerner_decompose: runaway recursion");
    }
    return d;
}

bool lerner_invariants_hold(const LernerDecomposition& d) {
    const auto& gens = d.generations;
    for (const auto& g : gens) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (!d.root.contains(g[i])) return false;
            for (std::size_t j = 0; j < g.size(); ++j)
                if (i != j && g[i].contains(g[j])) return false;
        }
    }
    for (std::size_t k = 0; k + 1 < gens.size(); ++k) {
        // Omega_{k+1} subset Omega_k
        for (const auto& q : gens[k + 1]) {
            bool inside = false;
            for (const auto& p : gens[k])
                if (p.contains(q)) {
                    inside = true;
                    break;
                }
            if (!inside) return false;
        }
        // |Omega_{k+1} ∩ Q_j^k| <= |Q_j^k| / 2 (exact dyadic comparison)
        for (const auto& p : gens[k]) {
            double covered = 0.0;
            for (const auto& q : gens[k + 1])
                if (p.contains(q)) covered += q.measure();
            if (covered > p.measure() / 2.0) return false;
        }
    }
    return true;
}

LernerResidualReport verify_lerner_bound(const StepFunction& f, const DyadicCube& q0,
                                         const LernerDecomposition& d) {
    if (d.root != q0) throw std::invalid_argument("verify_lerner_bound: decomposition/cube mismatch");
    const double m0 = median(f, q0).canonical;
    const StepFunction sharp = local_sharp_maximal(f, q0, 0.25);

    // Sum of omega_{lambda_n}(f, parent(Q_j^k)) chi_{Q_j^k}.
    StepBuilder sum(f.dim());
    for (const auto& g : d.generations)
        for (const auto& q : g) {
            const DyadicCube parent = q.is_root() ? q : q.parent();
            sum.add_on_cube(q, local_mean_oscillation(f, parent, d.lambda));
        }
    const StepFunction osc_sum = sum.take();

    LernerResidualReport rep{-std::numeric_limits<double>::infinity(), 0.0, 0, true};
    // Evaluate both sides on the common refinement restricted to q0.
    const StepFunction rhs = zip(sharp, osc_sum, [](double a, double b) { return 4.0 * a + 4.0 * b; });
    const StepFunction lhs = f.map([m0](double v) { return std::abs(v - m0); });
    const auto [L, R] = common_refinement(lhs, rhs);
    std::vector<std::pair<DyadicCube, double>> lp = leaf_pieces(L, q0);
    std::vector<std::pair<DyadicCube, double>> rp = leaf_pieces(R, q0);
    if (lp.size() != rp.size()) throw std::runtime_error("verify_lerner_bound: refinement mismatch");
    for (std::size_t i = 0; i < lp.size(); ++i) {
        const double lv = lp[i].second, rv = rp[i].second;
        rep.max_residual = std::max(rep.max_residual, lv - rv);
        if (rv > 0.0) rep.max_ratio = std::max(rep.max_ratio, lv / rv);
        else if (lv > 0.0) rep.max_ratio = std::numeric_limits<double>::infinity();
        ++rep.leaves;
    }
    rep.pass = rep.max_residual <= 0.0;
    return rep;
}

nlohmann::json lerner_to_json(const LernerDecomposition& d) {
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& g : d.generations) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& q : g) row.push_back(cube_to_json(q));
        gens.push_back(std::move(row));
    }
    return nlohmann::json{{"root", cube_to_json(d.root)},
                          {"lambda", d.lambda},
                          {"generations", std::move(gens)}};
}

}  // namespace dyad
