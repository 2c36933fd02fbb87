#include "dyad/rng.hpp"

#include <cmath>
#include <functional>

namespace dyad {

namespace {

double draw_value(Rng& rng, const RandomTreeOptions& o) {
    if (o.lattice) {
        const std::int64_t span = 2 * o.lattice_numerator_range + 1;
        const std::int64_t k =
            static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(span))) -
            o.lattice_numerator_range;
        return static_cast<double>(k) / o.lattice_denominator;
    }
    return rng.uniform(o.lo, o.hi);
}

}  // namespace

StepFunction random_step_function(int dim, Rng& rng, const RandomTreeOptions& opts) {
    const unsigned kids = 1u << dim;
    std::function<TreeNode(int)> rec = [&](int depth) -> TreeNode {
        TreeNode t;
        if (depth < opts.max_depth && (depth == 0 || rng.next_double() < opts.split_probability)) {
            t.children.reserve(kids);
            for (unsigned i = 0; i < kids; ++i) t.children.push_back(rec(depth + 1));
            return t;
        }
        t.value = draw_value(rng, opts);
        return t;
    };
    TreeNode root = rec(0);
    std::vector<std::pair<DyadicCube, double>> leaves;
    std::function<void(const TreeNode&, const DyadicCube&)> collect =
        [&](const TreeNode& t, const DyadicCube& q) {
            if (t.leaf()) {
                leaves.emplace_back(q, t.value);
                return;
            }
            for (unsigned i = 0; i < t.children.size(); ++i) collect(t.children[i], q.child(i));
        };
    collect(root, DyadicCube::root(dim));
    return StepFunction::from_leaves(dim, leaves);
}

StepFunction random_weight(int dim, Rng& rng, int max_depth, int exp_range) {
    RandomTreeOptions o;
    o.max_depth = max_depth;
    StepFunction f = random_step_function(dim, rng, o);
    Rng local = rng.fork(0x77);
    const int span = 2 * exp_range + 1;
    return f.map([&](double) {
        const int e = static_cast<int>(local.below(static_cast<std::uint64_t>(span))) - exp_range;
        const double mant = 1.0 + local.below(15) / 16.0;  // dyadic mantissa in [1,2)
        return std::ldexp(mant, e);
    });
}

DyadicCube random_cube(int dim, Rng& rng, int min_level, int max_level) {
    const int level =
        min_level + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_level - min_level + 1)));
    std::vector<std::uint64_t> coords(static_cast<std::size_t>(dim));
    for (auto& c : coords) c = rng.below(std::uint64_t{1} << level);
    return DyadicCube(dim, level, std::move(coords));
}

}  // namespace dyad
