#pragma once

// Asymptotic approximations of the Bell numbers B(p) = B(p, 1): the
// logarithmic expansion of ln B(p) / p and the Lambert-W form, each with a
// measurement hook against the series.

#include "bellbound/series.hpp"

#include <array>
#include <optional>

namespace bellbound {

struct ExpansionValue {
    double p = 0.0;
    /// ln p, -lnln p, -1, lnln p / ln p, 1 / ln p, (lnln p / ln p)^2 / 2
    std::array<double, 6> partial_terms{};
    double total = 0.0;
};

/// Six-term expansion of ln B(p) / p; requires p > e.
ExpansionValue debruijn_expansion(double p);

/// Principal branch W(x) for x >= 0 by Halley iteration, to relative residual
/// |W e^W - x| <= 1e-12 max(1, x). Throws ToleranceNotReached if the
/// iteration budget runs out.
double lambert_w(double x);

struct LambertApprox {
    double p = 0.0;
    double log_value = 0.0;
    /// Set when p <= p_max: log(approx / B(p)).
    std::optional<double> log_ratio_to_series;

    double value() const noexcept;
    std::optional<double> ratio_to_series() const;
};

/// (1 / sqrt p) (p / W(p)) exp(p / W(p) - p - 1), evaluated exactly as
/// written (the power on p / W(p) is 1). Requires p >= 2.
LambertApprox bell_lambert_approx(double p, const SeriesOptions& series = {});

/// Same with (p / W(p))^{p + 1/2}, the classical saddle-point form.
LambertApprox bell_lambert_approx_corrected(double p, const SeriesOptions& series = {});

}  // namespace bellbound
