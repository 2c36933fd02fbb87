#pragma once

#include <vector>

#include <json.hpp>

#include "dyad/cube.hpp"
#include "dyad/step_function.hpp"

namespace dyad {

/// Generations {Q_j^k} of the median-oscillation decomposition on a root cube.
/// Omega_k is the union of generation k; the ground sets E_j^k = Q_j^k minus
/// Omega_{k+1} are pairwise disjoint with |E_j^k| >= |Q_j^k|/2.
struct LernerDecomposition {
    DyadicCube root;
    std::vector<std::vector<DyadicCube>> generations;  // index 0 holds {Q_j^1}
    double lambda;                                     // 2^{-n-2}

    std::size_t cube_count() const {
        std::size_t n = 0;
        for (const auto& g : generations) n += g.size();
        return n;
    }
};

/// Construction: from a selected cube P compute the canonical median m_f(P)
/// and the level a_P = ((f - m_f(P))chi_P)^*(lambda_n |P|); the next
/// generation inside P consists of the maximal dyadic Q <= P with
/// |Q ∩ {|f - m_f(P)| > a_P}| > |Q|/2. Terminates on finite trees.
LernerDecomposition lerner_decompose(const StepFunction& f, const DyadicCube& q0);

/// Pointwise check of |f - m_f(Q0)| <= 4 M^{#,d}_{1/4,Q0} f
///                     + 4 sum_{k,j} omega_{lambda_n}(f, parent(Q_j^k)) chi_{Q_j^k}
/// at every leaf under Q0.
struct LernerResidualReport {
    double max_residual;   // max over leaves of LHS - RHS (pass iff <= 0)
    double max_ratio;      // max attained LHS/RHS over leaves with RHS > 0
    std::size_t leaves;    // number of leaves checked
    bool pass;
};

LernerResidualReport verify_lerner_bound(const StepFunction& f, const DyadicCube& q0,
                                         const LernerDecomposition& d);

/// Structural invariants, checked exactly: per-generation disjointness,
/// Omega_{k+1} subset Omega_k, |Omega_{k+1} ∩ Q_j^k| <= |Q_j^k|/2.
bool lerner_invariants_hold(const LernerDecomposition& d);

/// {root, generations:[[cube,...],...]}
nlohmann::json lerner_to_json(const LernerDecomposition& d);

}  // namespace dyad
