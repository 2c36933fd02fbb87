#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "dyad/cube.hpp"

namespace dyad {

/// Node of a finite dyadic partition tree: either a leaf carrying a value or
/// an internal node with exactly 2^dim children (lexicographic order).
struct TreeNode {
    std::vector<TreeNode> children;
    double value = 0.0;

    bool leaf() const { return children.empty(); }
};

/// Exact real-valued step function on the root cube [0,1)^n, constant on the
/// leaves of an adaptive dyadic partition. Immutable value type; all
/// operations are pure.
class StepFunction {
public:
    static StepFunction constant(int dim, double value);

    /// Complete tree of depth `level`; `values` in lexicographic coord order.
    static StepFunction from_uniform(int dim, int level, std::span<const double> values);

    /// Build from an explicit leaf list (must form a partition of the root).
    static StepFunction from_leaves(int dim,
                                    std::span<const std::pair<DyadicCube, double>> leaves);

    int dim() const { return dim_; }
    const TreeNode& root() const { return root_; }
    DyadicCube root_cube() const { return DyadicCube::root(dim_); }

    std::size_t leaf_count() const;
    int depth() const;

    double value_at(std::span<const double> x) const;

    /// Value on a cube at or below leaf level (throws if f is not constant on q).
    double value_on(const DyadicCube& q) const;

    double integral() const;
    double integral_over(const DyadicCube& q) const;
    /// Mean of f over q (exact measure-weighted sum; below-leaf cubes give the leaf value).
    double average_over(const DyadicCube& q) const;

    void visit_leaves(const std::function<void(const DyadicCube&, double)>& fn) const;
    /// Pre-order visit of every node; `is_leaf` distinguishes internal nodes.
    void visit_nodes(const std::function<void(const DyadicCube&, const TreeNode&)>& fn) const;

    StepFunction map(const std::function<double(double)>& fn) const;

    /// f restricted to q: f on q, 0 outside (splits leaves crossing q).
    StepFunction masked_to(const DyadicCube& q) const;

    StepFunction operator-() const;
    friend StepFunction operator+(const StepFunction& a, const StepFunction& b);
    friend StepFunction operator-(const StepFunction& a, const StepFunction& b);
    friend StepFunction operator*(const StepFunction& a, const StepFunction& b);
    friend StepFunction operator*(double c, const StepFunction& a);
    StepFunction operator+(double c) const;

    friend StepFunction zip(const StepFunction& a, const StepFunction& b,
                            const std::function<double(double, double)>& fn);
    friend std::pair<StepFunction, StepFunction> common_refinement(const StepFunction& a,
                                                                   const StepFunction& b);

    friend bool same_partition(const StepFunction& a, const StepFunction& b);

private:
    StepFunction(int dim, TreeNode root) : dim_(dim), root_(std::move(root)) {}

    int dim_;
    TreeNode root_;

    friend class StepBuilder;
};

/// sup |a - b| over the common refinement.
double max_abs_diff(const StepFunction& a, const StepFunction& b);

/// sup over leaves minus inf over leaves (for "constant on Q" checks use
/// leaf_spread(f, q)).
double leaf_spread(const StepFunction& f, const DyadicCube& q);

/// Leaf pieces of f under q: (cube, value). If q sits below a leaf the single
/// piece (q, leaf value) is returned.
std::vector<std::pair<DyadicCube, double>> leaf_pieces(const StepFunction& f,
                                                       const DyadicCube& q);

/// Mutable accumulator for building operator outputs: starts from zero (or a
/// copy) and supports adding constants on dyadic cubes, splitting as needed.
class StepBuilder {
public:
    explicit StepBuilder(int dim) : dim_(dim), root_{} {}
    explicit StepBuilder(const StepFunction& f) : dim_(f.dim()), root_(f.root()) {}

    void add_on_cube(const DyadicCube& q, double delta);
    /// Ensure the partition refines down to q's level along q's path.
    void split_to(const DyadicCube& q);

    StepFunction take();

private:
    int dim_;
    TreeNode root_;
};

}  // namespace dyad
