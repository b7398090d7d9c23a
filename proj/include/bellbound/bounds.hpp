#pragma once

// Non-asymptotic lower and upper estimates of the L_p norm B^{1/p}(p, beta)
// of a Poisson(beta) variable.

#include "bellbound/series.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace bellbound {

enum class LowerMethod { H0Search, HContinuous, ClosedFormLargeP, KMinusLargeBeta };
enum class UpperMethod { GOptimized, ClosedFormLargeP, KPlusLargeBeta, RoughTriangle };

std::string_view to_string(LowerMethod m) noexcept;
std::string_view to_string(UpperMethod m) noexcept;

/// The point at which a bound was attained: an MGF parameter lambda, a series
/// index k, or a real Stirling-smoothed index x.
struct Witness {
    std::optional<double> lambda;
    std::optional<std::uint64_t> k;
    std::optional<double> x;

    bool empty() const noexcept { return !lambda && !k && !x; }
};

/// Smallest p accepted by rough_upper_triangle. Below e the factor
/// 1 + c3 lnln p / ln p cannot exceed one for c3 > 0 while B^{1/p} / (p / (e ln p))
/// does, so no constant works near p = e; 3 is the first integer clear of it.
inline constexpr double kRoughMinP = 3.0;
inline constexpr double kC3FitMaxP = 200.0;

struct RegimeConstants {
    /// exp((e^2 - 3) / 2)
    double k_plus = 0.0;
    /// (2 pi)^{-1/2} exp(-1/(2e) + 1/3), the printed formula evaluated.
    double k_minus_formula = 0.0;
    /// The printed numeric value, which does not match the formula.
    double k_minus_printed = 0.6538;
    /// max over a log grid p in [kRoughMinP, kC3FitMaxP] of
    /// (B^{1/p} e ln p / p - 1) ln p / lnln p, with beta = 1.
    double c3_fitted = 0.0;
    /// p at which the fit maximum was attained.
    double c3_argmax_p = 0.0;
};

/// Built once on first use (thread-safe); the c3 fit costs a few hundred
/// series evaluations.
const RegimeConstants& regime_constants();

/// Result of a scalar optimization over the bound's free parameter.
struct OptimizedBound {
    double bound = 0.0;
    double log_bound = 0.0;
    /// The optimizing lambda (upper) or x (lower).
    double argument = 0.0;
    bool converged = false;
    /// Scale-free first-order residual at `argument`; zero at an active
    /// domain limit with the derivative pointing outward.
    double stationarity_residual = 0.0;
};

/// g_beta(p): the MGF bound minimized over lambda > 0 by golden section on its
/// log. Requires p >= 1. `converged` is false (and the best boundary value is
/// returned) when no interior minimum was bracketed.
OptimizedBound upper_g_optimized(const BellQuery& q, double opt_tol = 1e-6);

/// ln r - lnln r with r = p / beta; requires r > 1.
double lambda0(const BellQuery& q);

/// The MGF bound at lambda0 in closed form,
/// (p/e) / (ln r - lnln r) * exp(1/ln r - 1/r). Requires p >= 2 beta, p >= 1.
double upper_closed_form_largep(const BellQuery& q);

struct TermSearch {
    /// log of the largest Dobinski term, a lower bound on log B.
    double log_bound = 0.0;
    std::uint64_t k_star = 0;

    double bound() const noexcept;
    /// bound()^{1/p}, on the scale of B^{1/p}.
    double root(double p) const noexcept;
};

/// max_{k >= 1} e^{-beta} k^p beta^k / k!, found by scanning k upward until
/// the first non-increase of the unimodal terms. Requires p > 0.
TermSearch lower_h0_search(const BellQuery& q);

/// sup_{x >= 1} [e^{-beta} x^p beta^x / zeta(x)]^{1/p}: the single-term lower
/// bound with k! replaced by its Stirling majorant and k relaxed to a real
/// variable, maximized by golden section seeded at k0. Requires p > 0.
OptimizedBound lower_h_continuous(const BellQuery& q, double opt_tol = 1e-6);

/// floor(p / ln(p e / beta)) + 1. Requires p >= 1 and p e / beta > 1.
std::uint64_t k0_selector(const BellQuery& q);

/// [e^{-beta} k0^p beta^k0 / k0!]^{1/p}: one series term, hence a lower bound
/// on B^{1/p}. Requires p >= 2 beta, p >= 1.
double lower_closed_form_largep(const BellQuery& q);

/// K_+ beta; requires p >= 1 and p <= 2 beta.
double regime_upper_largebeta(const BellQuery& q);

struct KMinusResult {
    double value = 0.0;
    double constant = 0.0;
    bool printed_constant = false;
    /// B^{1/p} from the series when p <= p_max.
    std::optional<double> series_root;
    /// Set when the series was available; true if value > series_root.
    std::optional<bool> violated;
};

/// K_- beta with K_- = k_minus_formula, or k_minus_printed when
/// use_printed_constant is set. The candidate is not trusted: it is checked
/// against the series and violations are reported in the result.
KMinusResult regime_lower_largebeta(const BellQuery& q, bool use_printed_constant = false,
                                    const SeriesOptions& series = {});

/// ceil(beta) * (p / (e ln p)) * (1 + c3 lnln p / ln p). Requires p >= kRoughMinP,
/// beta >= 1 and c3 > 0.
double rough_upper_triangle(const BellQuery& q, double c3);

struct BoundCandidate {
    std::variant<UpperMethod, LowerMethod> method;
    /// Whether the method is a proven bound and eligible for selection.
    bool rigorous = true;
    std::optional<double> value;
    Witness witness;
    /// Empty on success, otherwise the failure message.
    std::string error;
    /// For optimizer-backed methods: false when the optimum sat on a limit.
    bool converged = true;
    /// Set after the series cross-check: value on the wrong side of B^{1/p}.
    std::optional<bool> violated;

    bool upper() const noexcept { return std::holds_alternative<UpperMethod>(method); }
    std::string_view name() const noexcept;
};

struct SeriesCheck {
    double root = 0.0;
    bool lower_ok = true;
    bool upper_ok = true;
};

struct BoundReport {
    explicit BoundReport(const BellQuery& q) : query(q), regime(q.regime()) {}

    BellQuery query;
    Regime regime;
    std::optional<double> lower;
    std::optional<LowerMethod> lower_method;
    Witness lower_witness;
    std::optional<double> upper;
    std::optional<UpperMethod> upper_method;
    Witness upper_witness;
    bool k_minus_printed_constant = false;
    std::vector<BoundCandidate> candidates;
    std::optional<SeriesCheck> series_check;
};

struct ReportOptions {
    double opt_tol = 1e-6;
    double series_tol = 1e-12;
    SeriesOptions series;
    bool use_printed_k_minus = false;
    /// Relative slack for the series cross-check.
    double slack = 1e-9;
};

/// Evaluates every method applicable in the regime of q, selects the
/// tightest rigorous upper and lower values, and cross-checks against the
/// series when p <= p_max. Requires p >= 1; failing methods are recorded as
/// candidates with an error and left out of the selection.
BoundReport bound_report(const BellQuery& q, const ReportOptions& options = {});

}  // namespace bellbound
