#include "dyad/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <stdexcept>

#include "dyad/operators.hpp"
#include "dyad/oscillation.hpp"
#include "dyad/rng.hpp"

namespace dyad {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

/// Deterministic indexed parallel map.
template <typename Fn>
void parallel_for_indexed(std::size_t n, int threads, Fn&& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::future<void>> futs;
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    };
    for (int t = 0; t < threads; ++t) futs.push_back(std::async(std::launch::async, worker));
    for (auto& f : futs) f.get();
}

}  // namespace

FitResult exponent_fit(std::span<const std::pair<double, double>> points) {
    if (points.size() < 2) throw std::invalid_argument("exponent_fit: need at least 2 points");
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : points) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(points.size());
    my /= static_cast<double>(points.size());
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [x, y] : points) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("exponent_fit: degenerate abscissae");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    const double r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return {slope, intercept, r2};
}

std::string to_string(OperatorTag tag) {
    switch (tag) {
        case OperatorTag::MaximalD: return "maximal";
        case OperatorTag::HilbertD: return "hilbert_d";
        case OperatorTag::SquareD: return "square";
        case OperatorTag::VectorMaximalD: return "vmaximal";
    }
    return "?";
}

namespace {

struct BuckleyPoint {
    Weight w;
    StepFunction f;
};

/// Centered Buckley pair at a given chain depth: scale factors keep the
/// singular monomials inside double range without changing [w]_{A_p} or any
/// norm ratio.
BuckleyPoint buckley_pair(double p, double eps, int depth) {
    const double gamma = (1.0 - eps) * (p - 1.0);
    Weight w = power_weight(gamma, depth, 0.5 * depth * gamma);
    StepFunction f = power_weight(eps - 1.0, depth, -0.5 * depth * (1.0 - eps)).fn();
    return {std::move(w), std::move(f)};
}

int resolved_depth(double p, std::span<const double> epsilons) {
    double eps_min = 1.0;
    for (double e : epsilons) eps_min = std::min(eps_min, e);
    const double gamma_max = (1.0 - eps_min) * (p - 1.0);
    const int by_resolution = static_cast<int>(std::ceil(7.5 / eps_min));
    const int by_range = static_cast<int>(std::floor(1900.0 / std::max(gamma_max, 1e-9)));
    return std::max(40, std::min(by_resolution, by_range));
}

StepFunction apply_operator(OperatorTag op, const StepFunction& f, double q) {
    switch (op) {
        case OperatorTag::MaximalD: return dyadic_maximal(f);
        case OperatorTag::HilbertD: return dyadic_hilbert(f);
        case OperatorTag::SquareD: return square_function(f);
        case OperatorTag::VectorMaximalD: {
            const StepFunction comps[] = {f};
            return vector_maximal(q, comps);
        }
    }
    throw std::logic_error("apply_operator: bad tag");
}

}  // namespace

SweepResult sharpness_sweep(OperatorTag op, double p, std::span<const double> epsilons,
                            const SweepOptions& options) {
    if (!(p > 1.0)) throw std::invalid_argument("sharpness_sweep: p must exceed 1");
    if (epsilons.size() < 2)
        throw std::invalid_argument("sharpness_sweep: need at least 2 epsilon values");
    for (double e : epsilons)
        if (!(e > 0.0 && e < 1.0))
            throw std::invalid_argument("sharpness_sweep: epsilon must lie in (0,1)");

    const int depth = options.depth > 0 ? options.depth : resolved_depth(p, epsilons);
    SweepResult result{to_string(op), p, std::vector<SweepPoint>(epsilons.size()), {}};

    parallel_for_indexed(epsilons.size(), options.threads, [&](std::size_t i) {
        const double eps = epsilons[i];
        const BuckleyPoint bp = buckley_pair(p, eps, depth);
        const double ap = ap_constant(bp.w, p);

        double best = 0.0;
        auto probe = [&](const StepFunction& f) {
            const double denom = weighted_lp_norm(f, p, bp.w);
            if (!(denom > 0.0) || !std::isfinite(denom)) return;
            const double num = weighted_lp_norm(apply_operator(op, f, options.q), p, bp.w);
            if (!std::isfinite(num))
                throw std::runtime_error("sharpness_sweep: non-finite norm at epsilon " +
                                         fmt_double(eps));
            best = std::max(best, num / denom);
        };
        probe(bp.f);
        Rng rng(options.seed ^ (0x9e37u + i));
        for (int r = 0; r < options.random_candidates; ++r) {
            Rng local = rng.fork(static_cast<std::uint64_t>(r));
            // Random values on the designed partition keep the weight pairing.
            StepFunction g = bp.f.map([&](double) { return local.uniform(-1.0, 1.0); });
            probe(g);
        }
        result.points[i] = SweepPoint{eps, ap, best};
    });

    std::sort(result.points.begin(), result.points.end(),
              [](const SweepPoint& a, const SweepPoint& b) { return a.ap < b.ap; });
    std::vector<std::pair<double, double>> pts;
    pts.reserve(result.points.size());
    for (const auto& pt : result.points) pts.emplace_back(std::log(pt.ap), std::log(pt.ratio));
    result.fit = exponent_fit(pts);
    return result;
}

nlohmann::json sweep_to_json(const SweepResult& r) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : r.points)
        pts.push_back(nlohmann::json{{"epsilon", p.epsilon},
                                     {"ap_constant", p.ap},
                                     {"ratio", p.ratio},
                                     {"log_ap", std::log(p.ap)},
                                     {"log_ratio", std::log(p.ratio)}});
    return nlohmann::json{{"op", r.op},           {"p", r.p},
                          {"slope", r.fit.slope}, {"intercept", r.fit.intercept},
                          {"r2", r.fit.r2},       {"points", std::move(pts)}};
}

std::string sweep_to_csv(const SweepResult& r) {
    std::string out = "epsilon,ap_constant,ratio,log_ap,log_ratio\n";
    for (const auto& p : r.points) {
        out += fmt_double(p.epsilon) + "," + fmt_double(p.ap) + "," + fmt_double(p.ratio) + "," +
               fmt_double(std::log(p.ap)) + "," + fmt_double(std::log(p.ratio)) + "\n";
    }
    return out;
}

StepFunction extremal_sd_function(int J) {
    if (J < 2) throw std::invalid_argument("extremal_sd: J must be >= 2");
    if (2 * J + 1 > 62) throw std::invalid_argument("extremal_sd: J too large for the grid");
    std::vector<std::pair<DyadicCube, double>> leaves;
    for (int k = 0; k <= 2 * J; ++k)
        leaves.emplace_back(DyadicCube(1, k + 1, {1}), k % 2 == 0 ? 1.0 : 0.0);
    leaves.emplace_back(DyadicCube(1, 2 * J + 1, {0}), 0.0);
    return StepFunction::from_leaves(1, leaves);
}

ExtremalReport extremal_sd(int J, std::span<const double> ps) {
    const StepFunction f = extremal_sd_function(J);
    const StepFunction sd = square_function(f);
    const Weight unit(StepFunction::constant(1, 1.0));

    ExtremalReport rep;
    rep.J = J;
    for (int i = 0; i <= 2 * J + 1; ++i)
        rep.averages.push_back(f.average_over(DyadicCube(1, i, {0})));

    rep.ps.assign(ps.begin(), ps.end());
    std::vector<std::pair<double, double>> pts;
    for (double p : ps) {
        const double nf = weighted_lp_norm(f, p, unit);
        const double ns = weighted_lp_norm(sd, p, unit);
        rep.f_norms.push_back(nf);
        rep.sd_norms.push_back(ns);
        pts.emplace_back(std::log(p), std::log(ns / nf));
    }
    rep.fit = exponent_fit(pts);
    if (pts.size() >= 2) {
        const auto& a = pts[pts.size() - 2];
        const auto& b = pts.back();
        rep.last_pair_slope = (b.second - a.second) / (b.first - a.first);
    } else {
        rep.last_pair_slope = rep.fit.slope;
    }

    rep.min_square_margin = std::numeric_limits<double>::infinity();
    for (int i = 2; i <= J - 1; ++i) {
        const double v = sd.value_on(DyadicCube(1, 2 * i + 1, {1}));
        rep.min_square_margin = std::min(rep.min_square_margin, v * v - i / 9.0);
    }
    return rep;
}

nlohmann::json extremal_to_json(const ExtremalReport& r) {
    return nlohmann::json{{"J", r.J},
                          {"averages", r.averages},
                          {"ps", r.ps},
                          {"f_norms", r.f_norms},
                          {"sd_norms", r.sd_norms},
                          {"slope", r.fit.slope},
                          {"intercept", r.fit.intercept},
                          {"r2", r.fit.r2},
                          {"last_pair_slope", r.last_pair_slope},
                          {"min_square_margin", r.min_square_margin}};
}

namespace {

double weak11_ratio(const StepFunction& h, double l1) {
    // sup over t of t |{|h| > t}| equals max over values v of v |{|h| >= v}|.
    const ValueDistribution d = value_distribution(h, h.root_cube());
    double cum = 0.0, best = 0.0;
    for (std::size_t i = d.values.size(); i-- > 0;) {
        cum += d.measures[i];
        best = std::max(best, d.values[i] * cum);
    }
    return best / l1;
}

}  // namespace

CalibrationResult lemma_constant_calibration(LemmaTag tag, int trials, int depth,
                                             std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("calibration: trials must be >= 1");
    if (depth < 2 || depth > 12) throw std::invalid_argument("calibration: depth out of range");
    RandomTreeOptions opts;
    opts.max_depth = depth;

    double worst = 0.0;
    int used = 0;
    for (int t = 0; t < trials; ++t) {
        Rng rng(seed ^ (0xabcdefULL + 7919ULL * static_cast<std::uint64_t>(t)));
        switch (tag) {
            case LemmaTag::HilbertWeak11: {
                const StepFunction f = random_step_function(1, rng, opts);
                const double l1 = f.map([](double v) { return std::abs(v); }).integral();
                if (l1 == 0.0) continue;
                worst = std::max(worst, weak11_ratio(dyadic_hilbert(f), l1));
                ++used;
                break;
            }
            case LemmaTag::HilbertOscillation: {
                const StepFunction f = random_step_function(1, rng, opts);
                const DyadicCube q0 = random_cube(1, rng, 1, std::max(1, depth - 2));
                const double lambda = (1.0 + static_cast<double>(rng.below(255))) / 256.0;
                const double denom =
                    f.map([](double v) { return std::abs(v); }).average_over(q0.ancestor(1));
                if (denom == 0.0) continue;
                const double om = local_mean_oscillation(dyadic_hilbert(f), q0, lambda);
                worst = std::max(worst, lambda * om / denom);
                ++used;
                break;
            }
            case LemmaTag::SquareOscillation: {
                const int dim = 1 + static_cast<int>(rng.below(2));
                RandomTreeOptions o2 = opts;
                if (dim == 2) o2.max_depth = std::min(depth, 5);
                const StepFunction f = random_step_function(dim, rng, o2);
                const DyadicCube q0 = random_cube(dim, rng, 0, std::max(1, o2.max_depth - 2));
                const double lambda = (1.0 + static_cast<double>(rng.below(255))) / 256.0;
                const double denom = f.map([](double v) { return std::abs(v); }).average_over(q0);
                if (denom == 0.0) continue;
                const StepFunction sd2 =
                    square_function(f).map([](double v) { return v * v; });
                const double om = local_mean_oscillation(sd2, q0, lambda);
                worst = std::max(worst, lambda * lambda * om / (denom * denom));
                ++used;
                break;
            }
            case LemmaTag::VectorMaxLocal: {
                const int dim = 1 + static_cast<int>(rng.below(2));
                RandomTreeOptions o2 = opts;
                if (dim == 2) o2.max_depth = std::min(depth, 5);
                std::vector<StepFunction> comps;
                for (int c = 0; c < 3; ++c) comps.push_back(random_step_function(dim, rng, o2));
                const DyadicCube q0 = random_cube(dim, rng, 0, std::max(1, o2.max_depth - 2));
                const double q = 1.5 + rng.below(3) * 0.75;
                const StepFunction mq = vector_maximal(q, comps);
                const double k0 = vector_tail_sup(q, comps, q0);
                std::vector<StepFunction> masked;
                for (const auto& c : comps) masked.push_back(c.masked_to(q0));
                const StepFunction mq_loc = vector_maximal(q, masked);
                const auto [a, b] = common_refinement(mq, mq_loc);
                const auto pa = leaf_pieces(a, q0);
                const auto pb = leaf_pieces(b, q0);
                for (std::size_t i = 0; i < pa.size(); ++i) {
                    const double num = std::pow(pa[i].second, q) - std::pow(k0, q);
                    const double den = std::pow(pb[i].second, q);
                    if (den > 0.0) worst = std::max(worst, num / den);
                }
                ++used;
                break;
            }
        }
    }
    return {worst, used};
}

namespace {

struct BumpSetup {
    std::function<double(const Weight&, const Weight&)> bump;
    std::vector<std::pair<YoungFunction, double>> conditions;  // (associate, class p)
};

BumpSetup bump_setup(OperatorTag op, double p, double q, const YoungFunction& A,
                     const YoungFunction& B) {
    const double pp = p / (p - 1.0);
    BumpSetup s;
    auto singular = [&]() {
        s.conditions = {{A.associate(), pp}, {B.associate(), p}};
        s.bump = [p, A, B](const Weight& u, const Weight& v) {
            return bump_constant(u, v, p, A, B);
        };
    };
    switch (op) {
        case OperatorTag::MaximalD:
        case OperatorTag::HilbertD:
            singular();
            break;
        case OperatorTag::SquareD:
            if (p <= 2.0) {
                s.conditions = {{B.associate(), p}};
                s.bump = [p, B](const Weight& u, const Weight& v) {
                    return bump_constant(u, v, p, YoungFunction::power(p), B);
                };
            } else {
                s.conditions = {{A.associate(), (p / 2.0) / (p / 2.0 - 1.0)},
                                {B.associate(), p}};
                s.bump = [p, A, B](const Weight& u, const Weight& v) {
                    const StepFunction u2p =
                        u.fn().map([p](double x) { return std::pow(x, 2.0 / p); });
                    const StepFunction vmp =
                        v.fn().map([p](double x) { return std::pow(x, -1.0 / p); });
                    return bump_supremum(u2p, A, 0.5, vmp, B, 1.0);
                };
            }
            break;
        case OperatorTag::VectorMaximalD:
            if (p <= q) {
                s.conditions = {{B.associate(), p}};
                s.bump = [p, B](const Weight& u, const Weight& v) {
                    return bump_constant(u, v, p, YoungFunction::power(p), B);
                };
            } else {
                s.conditions = {{A.associate(), (p / q) / (p / q - 1.0)}, {B.associate(), p}};
                s.bump = [p, q, A, B](const Weight& u, const Weight& v) {
                    const StepFunction uqp =
                        u.fn().map([p, q](double x) { return std::pow(x, q / p); });
                    const StepFunction vmp =
                        v.fn().map([p](double x) { return std::pow(x, -1.0 / p); });
                    return bump_supremum(uqp, A, 1.0 / q, vmp, B, 1.0);
                };
            }
            break;
    }
    return s;
}

}  // namespace

TwoWeightReport two_weight_singular_check(OperatorTag op, double p, const YoungFunction& A,
                                          const YoungFunction& B, std::span<const int> depths,
                                          const TwoWeightOptions& options) {
    if (!(p > 1.0)) throw std::invalid_argument("two_weight_singular_check: p must exceed 1");
    const BumpSetup setup = bump_setup(op, p, options.q, A, B);
    for (const auto& [young, cls] : setup.conditions)
        if (bp_classify(young, cls) != BpVerdict::In)
            throw std::invalid_argument(
                "two_weight_singular_check: B_p precondition failed for " + young.name());

    TwoWeightReport rep{to_string(op), p, {}, false};
    for (int depth : depths) {
        const Weight u = power_weight(options.gamma_u, depth);
        const Weight v = power_weight(options.gamma_v, depth);
        const double bump = setup.bump(u, v);

        RandomTreeOptions gen;
        gen.max_depth = std::min(depth, 9);
        double worst = 0.0;
        for (int t = 0; t < options.functions_per_depth; ++t) {
            Rng rng(options.seed ^ (0x1234ULL + 31337ULL * static_cast<std::uint64_t>(t) +
                                    static_cast<std::uint64_t>(depth) * 77ULL));
            if (op == OperatorTag::VectorMaximalD) {
                std::vector<StepFunction> comps;
                for (int c = 0; c < 3; ++c) comps.push_back(random_step_function(1, rng, gen));
                const StepFunction lq_norm = [&] {
                    StepFunction acc = comps[0].map(
                        [&](double x) { return std::pow(std::abs(x), options.q); });
                    for (std::size_t c = 1; c < comps.size(); ++c)
                        acc = zip(acc, comps[c], [&](double a, double b) {
                            return a + std::pow(std::abs(b), options.q);
                        });
                    return acc.map([&](double x) { return std::pow(x, 1.0 / options.q); });
                }();
                const double denom = weighted_lp_norm(lq_norm, p, v);
                if (!(denom > 0.0)) continue;
                const double num = weighted_lp_norm(vector_maximal(options.q, comps), p, u);
                worst = std::max(worst, num / denom);
            } else {
                const StepFunction f = random_step_function(1, rng, gen);
                const double denom = weighted_lp_norm(f, p, v);
                if (!(denom > 0.0)) continue;
                const double num = weighted_lp_norm(apply_operator(op, f, options.q), p, u);
                worst = std::max(worst, num / denom);
            }
        }
        rep.rows.push_back({depth, bump, worst});
    }
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
        if (rep.rows[i].max_ratio > 2.0 * rep.rows[i - 1].max_ratio) rep.blow_up = true;
    return rep;
}

nlohmann::json two_weight_to_json(const TwoWeightReport& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows)
        rows.push_back(nlohmann::json{
            {"depth", row.depth}, {"bump", row.bump}, {"max_ratio", row.max_ratio}});
    return nlohmann::json{
        {"op", r.op}, {"p", r.p}, {"rows", std::move(rows)}, {"blow_up", r.blow_up}};
}

}  // namespace dyad
