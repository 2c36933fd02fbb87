#include "dyad/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dyad {

namespace {

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void check_dims(const StepFunction& a, const StepFunction& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("StepFunction: dimension mismatch");
}

std::size_t count_leaves(const TreeNode& t) {
    if (t.leaf()) return 1;
    std::size_t n = 0;
    for (const auto& c : t.children) n += count_leaves(c);
    return n;
}

int node_depth(const TreeNode& t) {
    if (t.leaf()) return 0;
    int d = 0;
    for (const auto& c : t.children) d = std::max(d, node_depth(c));
    return d + 1;
}

double node_integral(const TreeNode& t, double measure) {
    if (t.leaf()) return t.value * measure;
    double s = 0.0;
    const double m = measure / static_cast<double>(t.children.size());
    for (const auto& c : t.children) s += node_integral(c, m);
    return s;
}

TreeNode map_node(const TreeNode& t, const std::function<double(double)>& fn) {
    TreeNode out;
    if (t.leaf()) {
        out.value = fn(t.value);
        return out;
    }
    out.children.reserve(t.children.size());
    for (const auto& c : t.children) out.children.push_back(map_node(c, fn));
    return out;
}

TreeNode zip_node(const TreeNode& a, const TreeNode& b, unsigned kids,
                  const std::function<double(double, double)>& fn) {
    if (a.leaf() && b.leaf()) {
        TreeNode out;
        out.value = fn(a.value, b.value);
        return out;
    }
    TreeNode out;
    out.children.reserve(kids);
    for (unsigned i = 0; i < kids; ++i) {
        const TreeNode& ca = a.leaf() ? a : a.children[i];
        const TreeNode& cb = b.leaf() ? b : b.children[i];
        out.children.push_back(zip_node(ca, cb, kids, fn));
    }
    return out;
}

}  // namespace

StepFunction StepFunction::constant(int dim, double value) {
    if (dim < 1) throw std::invalid_argument("StepFunction: dim must be >= 1");
    if (!std::isfinite(value)) throw std::invalid_argument("StepFunction: non-finite value");
    TreeNode root;
    root.value = value;
    return StepFunction(dim, std::move(root));
}

StepFunction StepFunction::from_uniform(int dim, int level, std::span<const double> values) {
    if (dim < 1) throw std::invalid_argument("StepFunction: dim must be >= 1");
    if (level < 0) throw std::invalid_argument("StepFunction: level must be >= 0");
    if (dim * level > 52) throw std::invalid_argument("StepFunction: uniform tree too deep");
    const std::size_t expect = std::size_t{1} << (dim * level);
    if (values.size() != expect)
        throw std::invalid_argument("StepFunction: expected 2^(dim*level) values, got " +
                                    std::to_string(values.size()));
    if (!all_finite(values)) throw std::invalid_argument("StepFunction: non-finite value");

    // Leaf order is lexicographic in coords: rank = sum_i c_i * 2^{level*(dim-1-i)}.
    std::function<TreeNode(int, std::vector<std::uint64_t>&)> build =
        [&](int depth, std::vector<std::uint64_t>& coords) -> TreeNode {
        TreeNode t;
        if (depth == level) {
            std::size_t rank = 0;
            for (int i = 0; i < dim; ++i)
                rank = (rank << level) | coords[static_cast<std::size_t>(i)];
            t.value = values[rank];
            return t;
        }
        const unsigned kids = 1u << dim;
        t.children.reserve(kids);
        for (unsigned k = 0; k < kids; ++k) {
            for (int i = 0; i < dim; ++i) {
                const std::uint64_t bit = (k >> (dim - 1 - i)) & 1u;
                auto& c = coords[static_cast<std::size_t>(i)];
                c = (c << 1) | bit;
            }
            t.children.push_back(build(depth + 1, coords));
            for (int i = 0; i < dim; ++i) coords[static_cast<std::size_t>(i)] >>= 1;
        }
        return t;
    };
    std::vector<std::uint64_t> coords(static_cast<std::size_t>(dim), 0);
    return StepFunction(dim, build(0, coords));
}

StepFunction StepFunction::from_leaves(int dim,
                                       std::span<const std::pair<DyadicCube, double>> leaves) {
    if (dim < 1) throw std::invalid_argument("StepFunction: dim must be >= 1");
    TreeNode root;
    const unsigned kids = 1u << dim;

    struct Build {
        std::vector<Build> children;
        bool assigned = false;
        double value = 0.0;
    };
    Build broot;
    std::function<void(Build&, const DyadicCube&, int, double)> ins =
        [&](Build& t, const DyadicCube& q, int depth, double v) {
            if (t.assigned)
                throw std::invalid_argument("StepFunction: overlapping leaves at " + q.to_string());
            if (depth == q.level()) {
                if (!t.children.empty())
                    throw std::invalid_argument("StepFunction: overlapping leaves at " + q.to_string());
                t.assigned = true;
                t.value = v;
                return;
            }
            if (t.children.empty()) t.children.resize(kids);
            const unsigned idx = q.child_index_at_depth(depth);
            ins(t.children[idx], q, depth + 1, v);
        };

    for (const auto& [cube, value] : leaves) {
        if (cube.dim() != dim) throw std::invalid_argument("StepFunction: leaf dimension mismatch");
        if (!std::isfinite(value)) throw std::invalid_argument("StepFunction: non-finite value");
        ins(broot, cube, 0, value);
    }

    std::function<TreeNode(const Build&)> fin = [&](const Build& b) -> TreeNode {
        TreeNode t;
        if (b.assigned) {
            t.value = b.value;
            return t;
        }
        if (b.children.empty())
            throw std::invalid_argument("StepFunction: leaves do not cover the root cube");
        t.children.reserve(kids);
        for (const auto& c : b.children) t.children.push_back(fin(c));
        return t;
    };
    root = fin(broot);
    return StepFunction(dim, std::move(root));
}

std::size_t StepFunction::leaf_count() const { return count_leaves(root_); }

int StepFunction::depth() const { return node_depth(root_); }

double StepFunction::value_at(std::span<const double> x) const {
    if (x.size() != static_cast<std::size_t>(dim_))
        throw std::invalid_argument("StepFunction: point dimension mismatch");
    for (double xi : x)
        if (!(xi >= 0.0 && xi < 1.0))
            throw std::invalid_argument("StepFunction: point outside root cube");
    const TreeNode* t = &root_;
    std::vector<double> y(x.begin(), x.end());
    while (!t->leaf()) {
        unsigned idx = 0;
        for (int i = 0; i < dim_; ++i) {
            auto& yi = y[static_cast<std::size_t>(i)];
            yi *= 2.0;
            unsigned bit = yi >= 1.0 ? 1u : 0u;
            if (bit) yi -= 1.0;
            idx = (idx << 1) | bit;
        }
        t = &t->children[idx];
    }
    return t->value;
}

namespace {

/// Walk from the root to cube q; returns the node at q, or the leaf above it.
const TreeNode* descend(const TreeNode& root, const DyadicCube& q, int dim) {
    const TreeNode* t = &root;
    for (int depth = 0; depth < q.level() && !t->leaf(); ++depth) {
        const unsigned idx = q.child_index_at_depth(depth);
        t = &t->children[idx];
    }
    return t;
}

}  // namespace

double StepFunction::value_on(const DyadicCube& q) const {
    if (q.dim() != dim_) throw std::invalid_argument("StepFunction: cube dimension mismatch");
    const TreeNode* t = descend(root_, q, dim_);
    if (!t->leaf()) throw std::invalid_argument("StepFunction: not constant on " + q.to_string());
    return t->value;
}

double StepFunction::integral() const { return node_integral(root_, 1.0); }

double StepFunction::integral_over(const DyadicCube& q) const {
    if (q.dim() != dim_) throw std::invalid_argument("StepFunction: cube dimension mismatch");
    const TreeNode* t = &root_;
    for (int depth = 0; depth < q.level(); ++depth) {
        if (t->leaf()) return t->value * q.measure();
        const unsigned idx = q.child_index_at_depth(depth);
        t = &t->children[idx];
    }
    return node_integral(*t, q.measure());
}

double StepFunction::average_over(const DyadicCube& q) const {
    return integral_over(q) / q.measure();
}

void StepFunction::visit_leaves(const std::function<void(const DyadicCube&, double)>& fn) const {
    std::function<void(const TreeNode&, const DyadicCube&)> rec =
        [&](const TreeNode& t, const DyadicCube& q) {
            if (t.leaf()) {
                fn(q, t.value);
                return;
            }
            for (unsigned i = 0; i < t.children.size(); ++i) rec(t.children[i], q.child(i));
        };
    rec(root_, root_cube());
}

void StepFunction::visit_nodes(
    const std::function<void(const DyadicCube&, const TreeNode&)>& fn) const {
    std::function<void(const TreeNode&, const DyadicCube&)> rec =
        [&](const TreeNode& t, const DyadicCube& q) {
            fn(q, t);
            if (t.leaf()) return;
            for (unsigned i = 0; i < t.children.size(); ++i) rec(t.children[i], q.child(i));
        };
    rec(root_, root_cube());
}

StepFunction StepFunction::map(const std::function<double(double)>& fn) const {
    return StepFunction(dim_, map_node(root_, fn));
}

StepFunction StepFunction::masked_to(const DyadicCube& q) const {
    if (q.dim() != dim_) throw std::invalid_argument("StepFunction: cube dimension mismatch");
    StepBuilder out(dim_);
    for (const auto& [cube, v] : leaf_pieces(*this, q)) out.add_on_cube(cube, v);
    return out.take();
}

StepFunction StepFunction::operator-() const {
    return map([](double v) { return -v; });
}

StepFunction operator+(const StepFunction& a, const StepFunction& b) {
    return zip(a, b, [](double x, double y) { return x + y; });
}

StepFunction operator-(const StepFunction& a, const StepFunction& b) {
    return zip(a, b, [](double x, double y) { return x - y; });
}

StepFunction operator*(const StepFunction& a, const StepFunction& b) {
    return zip(a, b, [](double x, double y) { return x * y; });
}

StepFunction operator*(double c, const StepFunction& a) {
    return a.map([c](double v) { return c * v; });
}

StepFunction StepFunction::operator+(double c) const {
    return map([c](double v) { return v + c; });
}

StepFunction zip(const StepFunction& a, const StepFunction& b,
                 const std::function<double(double, double)>& fn) {
    check_dims(a, b);
    return StepFunction(a.dim_, zip_node(a.root_, b.root_, 1u << a.dim_, fn));
}

std::pair<StepFunction, StepFunction> common_refinement(const StepFunction& a,
                                                        const StepFunction& b) {
    check_dims(a, b);
    StepFunction ra = zip(a, b, [](double x, double) { return x; });
    StepFunction rb = zip(a, b, [](double, double y) { return y; });
    return {std::move(ra), std::move(rb)};
}

bool same_partition(const StepFunction& a, const StepFunction& b) {
    if (a.dim() != b.dim()) return false;
    std::function<bool(const TreeNode&, const TreeNode&)> rec = [&](const TreeNode& x,
                                                                    const TreeNode& y) {
        if (x.leaf() != y.leaf()) return false;
        if (x.leaf()) return true;
        for (std::size_t i = 0; i < x.children.size(); ++i)
            if (!rec(x.children[i], y.children[i])) return false;
        return true;
    };
    return rec(a.root(), b.root());
}

double max_abs_diff(const StepFunction& a, const StepFunction& b) {
    double worst = 0.0;
    StepFunction d = zip(a, b, [&](double x, double y) {
        worst = std::max(worst, std::abs(x - y));
        return 0.0;
    });
    (void)d;
    return worst;
}

double leaf_spread(const StepFunction& f, const DyadicCube& q) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& [cube, v] : leaf_pieces(f, q)) {
        (void)cube;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi - lo;
}

std::vector<std::pair<DyadicCube, double>> leaf_pieces(const StepFunction& f,
                                                       const DyadicCube& q) {
    if (q.dim() != f.dim()) throw std::invalid_argument("leaf_pieces: cube dimension mismatch");
    std::vector<std::pair<DyadicCube, double>> out;
    const TreeNode* at = descend(f.root(), q, f.dim());
    if (at->leaf()) {
        out.emplace_back(q, at->value);
        return out;
    }
    std::function<void(const TreeNode&, const DyadicCube&)> rec =
        [&](const TreeNode& t, const DyadicCube& c) {
            if (t.leaf()) {
                out.emplace_back(c, t.value);
                return;
            }
            for (unsigned i = 0; i < t.children.size(); ++i) rec(t.children[i], c.child(i));
        };
    rec(*at, q);
    return out;
}

void StepBuilder::split_to(const DyadicCube& q) {
    if (q.dim() != dim_) throw std::invalid_argument("StepBuilder: cube dimension mismatch");
    TreeNode* t = &root_;
    const unsigned kids = 1u << dim_;
    for (int depth = 0; depth < q.level(); ++depth) {
        if (t->leaf()) {
            t->children.resize(kids);
            for (auto& c : t->children) c.value = t->value;
        }
        const unsigned idx = q.child_index_at_depth(depth);
        t = &t->children[idx];
    }
}

void StepBuilder::add_on_cube(const DyadicCube& q, double delta) {
    split_to(q);
    TreeNode* t = &root_;
    for (int depth = 0; depth < q.level(); ++depth) {
        const unsigned idx = q.child_index_at_depth(depth);
        t = &t->children[idx];
    }
    std::function<void(TreeNode&)> add = [&](TreeNode& n) {
        if (n.leaf()) {
            n.value += delta;
            return;
        }
        for (auto& c : n.children) add(c);
    };
    add(*t);
}

StepFunction StepBuilder::take() { return StepFunction(dim_, std::move(root_)); }

}  // namespace dyad
