#include "bellbound/asymptotics.hpp"

#include "bellbound/errors.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace bellbound {

ExpansionValue debruijn_expansion(double p) {
    if (!(p > std::numbers::e) || !std::isfinite(p)) {
        throw DomainError("the logarithmic expansion requires p > e (lnln p > 0), got p = " +
                          std::to_string(p));
    }
    const double lp = std::log(p);
    const double llp = std::log(lp);
    const double s = llp / lp;
    ExpansionValue out;
    out.p = p;
    out.partial_terms = {lp, -llp, -1.0, s, 1.0 / lp, 0.5 * s * s};
    out.total = std::accumulate(out.partial_terms.begin(), out.partial_terms.end(), 0.0);
    return out;
}

double lambert_w(double x) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw DomainError("lambert_w requires finite x >= 0, got x = " + std::to_string(x));
    }
    if (x == 0.0) return 0.0;

    const double target = 1e-13 * std::max(1.0, x);
    double w = x < 0.25 ? x * (1.0 - x) : std::log1p(x);
    for (int it = 0; it < 64; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        if (std::abs(f) <= target) return w;
        const double wp1 = w + 1.0;
        const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if (std::abs(step) <= 1e-16 * std::abs(w)) return w;
    }
    throw ToleranceNotReached("lambert_w did not converge for x = " + std::to_string(x));
}

double LambertApprox::value() const noexcept { return std::exp(log_value); }

std::optional<double> LambertApprox::ratio_to_series() const {
    if (!log_ratio_to_series) return std::nullopt;
    return std::exp(*log_ratio_to_series);
}

namespace {

LambertApprox lambert_form(double p, double power, const SeriesOptions& series) {
    if (!(p >= 2.0) || !std::isfinite(p)) {
        throw DomainError("the Lambert-W approximation requires p >= 2, got p = " + std::to_string(p));
    }
    const double w = lambert_w(p);
    const double s = p / w;
    LambertApprox out;
    out.p = p;
    out.log_value = -0.5 * std::log(p) + power * std::log(s) + s - p - 1.0;
    if (p <= series.p_max) {
        out.log_ratio_to_series = out.log_value - bell_dobinski(BellQuery(p, 1.0), 1e-12, series).log_value;
    }
    return out;
}

}  // namespace

LambertApprox bell_lambert_approx(double p, const SeriesOptions& series) {
    return lambert_form(p, 1.0, series);
}

LambertApprox bell_lambert_approx_corrected(double p, const SeriesOptions& series) {
    return lambert_form(p, p + 0.5, series);
}

}  // namespace bellbound
