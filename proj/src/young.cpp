#include "dyad/young.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dyad/serialization.hpp"

namespace dyad {

namespace {

double log_e_plus(double t) { return std::log(std::exp(1.0) + t); }

/// Legendre transform sup_{s>0}(st - A(s)) by a coarse log-grid scan plus
/// golden-section refinement. Upper envelope to ~1e-14 relative.
double legendre_sup(const std::function<double(double)>& A, double t) {
    if (t <= 0.0) return 0.0;
    auto g = [&](double s) { return s * t - A(s); };
    double best = 0.0, best_s = 0.0;
    for (int k = -360; k <= 360; ++k) {
        const double s = std::exp2(0.25 * k);
        const double v = g(s);
        if (v > best) {
            best = v;
            best_s = s;
        }
    }
    if (best_s == 0.0) return 0.0;
    double lo = best_s * std::exp2(-0.25), hi = best_s * std::exp2(0.25);
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = g(x1), f2 = g(x2);
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = g(x1);
        }
    }
    return std::max({best, f1, f2, 0.0});
}

}  // namespace

YoungFunction YoungFunction::power(double r, double scale) {
    if (!(r >= 1.0)) throw std::invalid_argument("YoungFunction: power exponent must be >= 1");
    if (!(scale > 0.0)) throw std::invalid_argument("YoungFunction: scale must be positive");
    YoungFunction y;
    y.family_ = Family::Power;
    y.r_ = r;
    y.scale_ = scale;
    y.asymptotic_ = GrowthPowers{r, 0.0};
    y.name_ = "power(" + std::to_string(r) + ")";
    return y;
}

YoungFunction YoungFunction::log_bump(double r, double a, double scale) {
    if (!(r > 1.0)) throw std::invalid_argument("YoungFunction: log_bump exponent must be > 1");
    // t^r log(e+t)^a increases iff r log(e+t) + a t/(e+t) stays positive; for
    // a < -r the minimum sits at t = e(|a|/r - 1) and equals r(2+log(|a|/r)) - |a|.
    if (a < -r && !(r * (2.0 + std::log(-a / r)) > -a))
        throw std::invalid_argument("YoungFunction: log_bump not increasing");
    if (!(scale > 0.0)) throw std::invalid_argument("YoungFunction: scale must be positive");
    YoungFunction y;
    y.family_ = Family::LogBump;
    y.r_ = r;
    y.a_ = a;
    y.scale_ = scale;
    y.asymptotic_ = GrowthPowers{r, a};
    y.name_ = "logbump(" + std::to_string(r) + "," + std::to_string(a) + ")";
    return y;
}

YoungFunction YoungFunction::custom(std::string name, std::function<double(double)> eval,
                                    std::optional<GrowthPowers> asymptotic) {
    if (!eval) throw std::invalid_argument("YoungFunction: empty evaluator");
    // Sampled validity checks: A(0)=0, strictly increasing, superlinear growth.
    if (eval(0.0) != 0.0) throw std::invalid_argument("YoungFunction: A(0) != 0");
    double prev = 0.0;
    for (int k = -30; k <= 30; ++k) {
        const double t = std::exp2(static_cast<double>(k));
        const double v = eval(t);
        if (!(v >= prev)) throw std::invalid_argument("YoungFunction: not increasing");
        prev = v;
    }
    if (!(eval(1e9) / 1e9 > eval(1e3) / 1e3))
        throw std::invalid_argument("YoungFunction: A(t)/t must grow");
    YoungFunction y;
    y.family_ = Family::Custom;
    y.eval_ = std::move(eval);
    y.asymptotic_ = asymptotic;
    y.name_ = std::move(name);
    return y;
}

double YoungFunction::operator()(double t) const {
    if (t < 0.0) throw std::invalid_argument("YoungFunction: negative argument");
    switch (family_) {
        case Family::Power:
            return scale_ * std::pow(t, r_);
        case Family::LogBump:
            return t == 0.0 ? 0.0 : scale_ * std::pow(t, r_) * std::pow(log_e_plus(t), a_);
        case Family::Custom:
            return eval_(t);
    }
    return 0.0;
}

double YoungFunction::inverse(double y) const {
    if (y < 0.0) throw std::invalid_argument("YoungFunction: negative argument");
    if (y == 0.0) return 0.0;
    if (family_ == Family::Power) return std::pow(y / scale_, 1.0 / r_);
    // Monotone bisection with exponential bracketing.
    double hi = 1.0;
    for (int it = 0; it < 1200 && (*this)(hi) < y; ++it) hi *= 2.0;
    double lo = hi / 2.0;
    for (int it = 0; it < 1200 && (*this)(lo) > y; ++it) {
        hi = lo;
        lo /= 2.0;
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        ((*this)(mid) < y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

YoungFunction YoungFunction::associate() const {
    if (family_ == Family::Power && r_ > 1.0) {
        // sup_s(st - c s^r) = t^{r'} (c r)^{-1/(r-1)} / r'
        const double rp = r_ / (r_ - 1.0);
        const double c2 = std::pow(scale_ * r_, -1.0 / (r_ - 1.0)) / rp;
        return power(rp, c2);
    }
    if (family_ == Family::Power && r_ == 1.0) {
        // Conjugate of t is the indicator-type gauge: 0 on [0,1], infinity beyond.
        const double c = scale_;
        return custom(
            "linf_gauge",
            [c](double t) {
                if (t <= c) return 0.0;
                return (t - c) * 1e300;  // steep barrier standing in for +infinity
            },
            std::nullopt);
    }
    // Numeric upper envelope; the asymptotic dual of t^r log^a is
    // t^{r'} log^{-a/(r-1)} (r' - 1 = 1/(r-1)).
    auto self = *this;
    std::optional<GrowthPowers> dual;
    if (asymptotic_ && asymptotic_->r > 1.0)
        dual = GrowthPowers{asymptotic_->r / (asymptotic_->r - 1.0),
                            -asymptotic_->a / (asymptotic_->r - 1.0)};
    return custom(
        "associate(" + name_ + ")",
        [self](double t) { return legendre_sup([&self](double s) { return self(s); }, t); }, dual);
}

nlohmann::json YoungFunction::to_json() const {
    switch (family_) {
        case Family::Power:
            return nlohmann::json{{"family", "power"}, {"r", r_}};
        case Family::LogBump:
            return nlohmann::json{{"family", "logbump"}, {"r", r_}, {"a", a_}};
        case Family::Custom:
            break;
    }
    return nlohmann::json{{"family", "custom"}, {"name", name_}};
}

YoungFunction YoungFunction::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("family")) throw SchemaError("young: expected {family,...}");
    const std::string fam = j["family"].get<std::string>();
    if (fam == "power") {
        reject_unknown_keys(j, {"family", "r"}, "young");
        if (!j.contains("r") || !j["r"].is_number()) throw SchemaError("young: power needs r");
        try {
            return power(j["r"].get<double>());
        } catch (const std::invalid_argument& e) {
            throw SchemaError(std::string("young: ") + e.what());
        }
    }
    if (fam == "logbump") {
        reject_unknown_keys(j, {"family", "r", "a"}, "young");
        if (!j.contains("r") || !j.contains("a")) throw SchemaError("young: logbump needs r, a");
        try {
            return log_bump(j["r"].get<double>(), j["a"].get<double>());
        } catch (const std::invalid_argument& e) {
            throw SchemaError(std::string("young: ") + e.what());
        }
    }
    throw SchemaError("young: unknown family '" + fam + "'");
}

BpVerdict bp_classify(const YoungFunction& A, double p) {
    if (!(p > 1.0)) throw std::invalid_argument("bp_classify: p must exceed 1");
    if (A.asymptotic()) {
        // int^inf t^{r-p-1} log(e+t)^a dt converges iff r < p, or r = p with a < -1.
        const double r = A.asymptotic()->r;
        const double a = A.asymptotic()->a;
        if (r < p) return BpVerdict::In;
        if (r > p) return BpVerdict::Out;
        return a < -1.0 ? BpVerdict::In : BpVerdict::Out;
    }
    // Numeric: sum the quadrature of A(t)/t^{p+1} over dyadic blocks [2^k, 2^{k+1})
    // and look at the tail ratio.
    double prev_block = 0.0;
    double ratio_acc = 0.0;
    int ratios = 0;
    for (int k = 4; k < 60; ++k) {
        double block = 0.0;
        const double a = std::exp2(static_cast<double>(k));
        const int steps = 16;
        for (int i = 0; i < steps; ++i) {
            const double t = a * (1.0 + (i + 0.5) / steps);
            block += A(t) / std::pow(t, p + 1.0) * (a / steps);
        }
        if (k > 8 && prev_block > 0.0) {
            ratio_acc += block / prev_block;
            ++ratios;
        }
        prev_block = block;
    }
    if (ratios == 0) return BpVerdict::Inconclusive;
    const double mean_ratio = ratio_acc / ratios;
    if (mean_ratio < 0.95) return BpVerdict::In;
    if (mean_ratio > 1.05) return BpVerdict::Out;
    return BpVerdict::Inconclusive;
}

double luxemburg_norm(const YoungFunction& A, const StepFunction& f, const DyadicCube& q) {
    const auto pieces = leaf_pieces(f, q);
    double max_abs = 0.0;
    for (const auto& [cube, v] : pieces) {
        (void)cube;
        max_abs = std::max(max_abs, std::abs(v));
    }
    if (max_abs == 0.0) return 0.0;
    const double qm = q.measure();
    auto mean_ok = [&](double lambda) {
        double s = 0.0;
        for (const auto& [cube, v] : pieces) s += A(std::abs(v) / lambda) * cube.measure();
        return s / qm <= 1.0;
    };
    // A(max/hi) <= 1 at hi = max/A^{-1}(1), so hi is always feasible.
    double hi = max_abs / A.inverse(1.0);
    if (!(hi > 0.0) || !std::isfinite(hi)) hi = max_abs;
    while (!mean_ok(hi)) hi *= 2.0;
    double lo = 0.5 * hi;
    while (mean_ok(lo)) {
        hi = lo;
        lo *= 0.5;
        if (lo < 1e-290) return 0.0;  // feasible at every positive lambda
    }
    // Invariant: mean_ok(hi), !mean_ok(lo).
    for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (mean_ok(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace dyad
