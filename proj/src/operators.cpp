#include "dyad/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dyad/haar.hpp"

namespace dyad {

namespace {

void require_line(int dim, const char* who) {
    if (dim != 1) throw std::invalid_argument(std::string(who) + ": only defined for n = 1");
}

double inv_sqrt_measure_1d(int level) { return std::sqrt(std::ldexp(1.0, level)); }

double subtree_integral(const TreeNode& t, double measure) {
    if (t.leaf()) return t.value * measure;
    double s = 0.0;
    for (const auto& c : t.children) s += subtree_integral(c, measure / t.children.size());
    return s;
}

}  // namespace

StepFunction dyadic_hilbert(const StepFunction& f) {
    require_line(f.dim(), "dyadic_hilbert");
    // Descend f and the once-refined output tree together. `pending` is the
    // parent's Haar-term amplitude: +pending lands on the left child, -pending
    // on the right.
    std::function<TreeNode(const TreeNode&, int, double, double)> rec =
        [&](const TreeNode& n, int level, double acc, double pending) -> TreeNode {
        TreeNode out;
        if (n.leaf()) {
            out.children.resize(2);
            out.children[0].value = acc + pending;
            out.children[1].value = acc - pending;
            return out;
        }
        const double il = subtree_integral(n.children[0], std::ldexp(1.0, -level - 1));
        const double ir = subtree_integral(n.children[1], std::ldexp(1.0, -level - 1));
        const double coeff = (il - ir) * inv_sqrt_measure_1d(level);
        const double amp = coeff * inv_sqrt_measure_1d(level + 1);
        out.children.reserve(2);
        out.children.push_back(rec(n.children[0], level + 1, acc + pending, amp));
        out.children.push_back(rec(n.children[1], level + 1, acc - pending, -amp));
        return out;
    };
    TreeNode root = rec(f.root(), 0, 0.0, 0.0);
    std::vector<std::pair<DyadicCube, double>> leaves;
    std::function<void(const TreeNode&, const DyadicCube&)> collect =
        [&](const TreeNode& t, const DyadicCube& q) {
            if (t.leaf()) {
                leaves.emplace_back(q, t.value);
                return;
            }
            for (unsigned i = 0; i < t.children.size(); ++i) collect(t.children[i], q.child(i));
        };
    collect(root, DyadicCube::root(1));
    return StepFunction::from_leaves(1, leaves);
}

StepFunction paraproduct(const StepFunction& b, const StepFunction& f) {
    require_line(b.dim(), "paraproduct");
    require_line(f.dim(), "paraproduct");
    const auto [rb, rf] = common_refinement(b, f);
    // At an internal node I: add f_I <b,h_I> h_I, constant on I's children.
    std::function<TreeNode(const TreeNode&, const TreeNode&, int, double)> rec =
        [&](const TreeNode& nb, const TreeNode& nf, int level, double acc) -> TreeNode {
        TreeNode out;
        if (nb.leaf()) {  // common refinement: both leaf together
            out.value = acc;
            return out;
        }
        const double meas_child = std::ldexp(1.0, -level - 1);
        const double bl = subtree_integral(nb.children[0], meas_child);
        const double br = subtree_integral(nb.children[1], meas_child);
        const double coeff_b = (bl - br) * inv_sqrt_measure_1d(level);
        const double favg =
            std::ldexp(subtree_integral(nf.children[0], meas_child) +
                           subtree_integral(nf.children[1], meas_child),
                       level);
        const double amp = favg * coeff_b * inv_sqrt_measure_1d(level);
        out.children.reserve(2);
        out.children.push_back(rec(nb.children[0], nf.children[0], level + 1, acc + amp));
        out.children.push_back(rec(nb.children[1], nf.children[1], level + 1, acc - amp));
        return out;
    };
    TreeNode root = rec(rb.root(), rf.root(), 0, 0.0);
    std::vector<std::pair<DyadicCube, double>> leaves;
    std::function<void(const TreeNode&, const DyadicCube&)> collect =
        [&](const TreeNode& t, const DyadicCube& q) {
            if (t.leaf()) {
                leaves.emplace_back(q, t.value);
                return;
            }
            for (unsigned i = 0; i < t.children.size(); ++i) collect(t.children[i], q.child(i));
        };
    collect(root, DyadicCube::root(1));
    return StepFunction::from_leaves(1, leaves);
}

StepFunction haar_multiplier(const std::function<double(const DyadicCube&)>& alpha,
                             const StepFunction& f) {
    require_line(f.dim(), "haar_multiplier");
    std::function<TreeNode(const TreeNode&, const DyadicCube&, double)> rec =
        [&](const TreeNode& n, const DyadicCube& I, double acc) -> TreeNode {
        TreeNode out;
        if (n.leaf()) {
            out.value = acc;
            return out;
        }
        const double meas_child = std::ldexp(1.0, -I.level() - 1);
        const double il = subtree_integral(n.children[0], meas_child);
        const double ir = subtree_integral(n.children[1], meas_child);
        const double coeff = (il - ir) * inv_sqrt_measure_1d(I.level());
        const double amp = alpha(I) * coeff * inv_sqrt_measure_1d(I.level());
        out.children.reserve(2);
        out.children.push_back(rec(n.children[0], I.child(0), acc + amp));
        out.children.push_back(rec(n.children[1], I.child(1), acc - amp));
        return out;
    };
    TreeNode root = rec(f.root(), DyadicCube::root(1), 0.0);
    std::vector<std::pair<DyadicCube, double>> leaves;
    std::function<void(const TreeNode&, const DyadicCube&)> collect =
        [&](const TreeNode& t, const DyadicCube& q) {
            if (t.leaf()) {
                leaves.emplace_back(q, t.value);
                return;
            }
            for (unsigned i = 0; i < t.children.size(); ++i) collect(t.children[i], q.child(i));
        };
    collect(root, DyadicCube::root(1));
    return StepFunction::from_leaves(1, leaves);
}

StepFunction haar_multiplier(double alpha_const, const StepFunction& f) {
    return haar_multiplier([alpha_const](const DyadicCube&) { return alpha_const; }, f);
}

StepFunction haar_multiplier(const std::map<DyadicCube, double>& alpha, const StepFunction& f) {
    return haar_multiplier(
        [&alpha](const DyadicCube& I) {
            const auto it = alpha.find(I);
            return it == alpha.end() ? 0.0 : it->second;
        },
        f);
}

StepFunction square_function(const StepFunction& f) {
    // Accumulate (f_Q - f_{Qhat})^2 down the tree; terms below leaf level vanish.
    StepBuilder out(f.dim());
    const int n = f.dim();
    std::function<void(const TreeNode&, const DyadicCube&, double, double)> rec =
        [&](const TreeNode& t, const DyadicCube& q, double parent_avg, double acc) {
            const double avg = std::ldexp(subtree_integral(t, q.measure()), q.level() * n);
            const double here =
                q.is_root() ? acc : acc + (avg - parent_avg) * (avg - parent_avg);
            if (t.leaf()) {
                out.add_on_cube(q, std::sqrt(here));
                return;
            }
            for (unsigned i = 0; i < t.children.size(); ++i)
                rec(t.children[i], q.child(i), avg, here);
        };
    rec(f.root(), f.root_cube(), 0.0, 0.0);
    return out.take();
}

double square_tail_constant(const StepFunction& f, const DyadicCube& q0) {
    double acc = 0.0;
    DyadicCube q = q0;
    while (!q.is_root()) {
        const DyadicCube parent = q.parent();
        const double d = f.average_over(q) - f.average_over(parent);
        acc += d * d;
        q = parent;
    }
    return acc;
}

StepFunction dyadic_maximal(const StepFunction& f) {
    StepBuilder out(f.dim());
    const int n = f.dim();
    std::function<void(const TreeNode&, const DyadicCube&, double)> rec =
        [&](const TreeNode& t, const DyadicCube& q, double running) {
            double avg_abs = 0.0;
            // integral of |f| over q
            std::function<double(const TreeNode&, double)> iabs = [&](const TreeNode& s,
                                                                      double meas) -> double {
                if (s.leaf()) return std::abs(s.value) * meas;
                double acc = 0.0;
                for (const auto& c : s.children) acc += iabs(c, meas / s.children.size());
                return acc;
            };
            avg_abs = std::ldexp(iabs(t, q.measure()), q.level() * n);
            const double r = std::max(running, avg_abs);
            if (t.leaf()) {
                out.add_on_cube(q, r);
                return;
            }
            for (unsigned i = 0; i < t.children.size(); ++i) rec(t.children[i], q.child(i), r);
        };
    rec(f.root(), f.root_cube(), 0.0);
    return out.take();
}

StepFunction weighted_dyadic_maximal(const Weight& sigma, const StepFunction& f) {
    const auto [rf, rs] = common_refinement(f, sigma.fn());
    StepBuilder out(f.dim());
    // Bottom-up pass caching (int |f| sigma, int sigma) per node, then a
    // top-down running max of their ratio.
    struct Ann {
        double ifs, is;
        std::vector<Ann> children;
    };
    std::function<Ann(const TreeNode&, const TreeNode&, double)> annotate =
        [&](const TreeNode& a, const TreeNode& b, double meas) -> Ann {
        Ann r{0.0, 0.0, {}};
        if (a.leaf()) {
            r.ifs = std::abs(a.value) * b.value * meas;
            r.is = b.value * meas;
            return r;
        }
        r.children.reserve(a.children.size());
        for (std::size_t i = 0; i < a.children.size(); ++i) {
            r.children.push_back(annotate(a.children[i], b.children[i], meas / a.children.size()));
            r.ifs += r.children.back().ifs;
            r.is += r.children.back().is;
        }
        return r;
    };
    const Ann ann = annotate(rf.root(), rs.root(), 1.0);
    std::function<void(const Ann&, const TreeNode&, const DyadicCube&, double)> down =
        [&](const Ann& a, const TreeNode& t, const DyadicCube& q, double running) {
            const double r = std::max(running, a.ifs / a.is);
            if (t.leaf()) {
                out.add_on_cube(q, r);
                return;
            }
            for (unsigned i = 0; i < t.children.size(); ++i)
                down(a.children[i], t.children[i], q.child(i), r);
        };
    down(ann, rf.root(), rf.root_cube(), 0.0);
    return out.take();
}

StepFunction vector_maximal(double q, std::span<const StepFunction> components) {
    if (!(q > 1.0 && std::isfinite(q)))
        throw std::invalid_argument("vector_maximal: q must lie in (1, infinity)");
    if (components.empty()) throw std::invalid_argument("vector_maximal: empty component list");
    StepFunction acc = dyadic_maximal(components[0]).map([q](double v) { return std::pow(v, q); });
    for (std::size_t i = 1; i < components.size(); ++i) {
        StepFunction mi = dyadic_maximal(components[i]);
        acc = zip(acc, mi, [q](double a, double b) { return a + std::pow(b, q); });
    }
    return acc.map([q](double v) { return std::pow(v, 1.0 / q); });
}

double vector_tail_sup(double q, std::span<const StepFunction> components, const DyadicCube& q0) {
    if (!(q > 1.0)) throw std::invalid_argument("vector_tail_sup: q must exceed 1");
    double acc = 0.0;
    for (const auto& f : components) {
        double best = 0.0;
        DyadicCube c = q0;
        const StepFunction af = f.map([](double v) { return std::abs(v); });
        while (true) {
            best = std::max(best, af.average_over(c));
            if (c.is_root()) break;
            c = c.parent();
        }
        acc += std::pow(best, q);
    }
    return std::pow(acc, 1.0 / q);
}

StepFunction orlicz_maximal(const YoungFunction& A, const StepFunction& f) {
    StepBuilder out(f.dim());
    std::function<void(const DyadicCube&, double)> rec = [&](const DyadicCube& q, double running) {
        const double norm = luxemburg_norm(A, f, q);
        const double r = std::max(running, norm);
        const auto pieces = leaf_pieces(f, q);
        if (pieces.size() == 1) {
            out.add_on_cube(q, r);
            return;
        }
        for (unsigned i = 0; i < q.child_count(); ++i) rec(q.child(i), r);
    };
    rec(f.root_cube(), 0.0);
    return out.take();
}

StepFunction rubio_de_francia(const StepFunction& h, double s, int iterations) {
    bool nonneg = true;
    h.visit_leaves([&](const DyadicCube&, double v) { nonneg = nonneg && v >= 0.0; });
    if (!nonneg) throw std::invalid_argument("rubio_de_francia: h must be non-negative");
    if (!(s > 1.0)) throw std::invalid_argument("rubio_de_francia: s must exceed 1");
    if (iterations < 1) throw std::invalid_argument("rubio_de_francia: need at least one term");
    const double sp = s / (s - 1.0);
    StepFunction term = h;
    StepFunction sum = h;
    for (int k = 1; k < iterations; ++k) {
        term = (1.0 / (2.0 * sp)) * dyadic_maximal(term);
        sum = sum + term;
    }
    return sum;
}

}  // namespace dyad
