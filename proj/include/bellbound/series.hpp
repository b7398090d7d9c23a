#pragma once

// Evaluation of the two-parameter Bell function
//
//     B(p, beta) = e^{-beta} * sum_{k>=0} k^p beta^k / k!  =  E[tau^p],  tau ~ Poisson(beta)
//
// by the Dobinski series in log space, together with the exact
// Stirling-number (Touchard polynomial) oracle and the Stirling factorial
// majorant used by the lower bounds.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bellbound {

enum class Regime {
    LargeP,     // p >= 2 beta, p >= 1
    LargeBeta,  // p <= 2 beta, p >= 1 (the tie p = 2 beta goes to LargeP)
    Gap,        // p < 1: no regime bound applies
};

std::string_view to_string(Regime r) noexcept;

/// An evaluation point (p, beta) with p >= 0 and beta > 0.
class BellQuery {
public:
    /// Throws DomainError unless p >= 0, beta > 0 and both are finite.
    BellQuery(double p, double beta);

    double p() const noexcept { return p_; }
    double beta() const noexcept { return beta_; }
    double ratio() const noexcept { return p_ / beta_; }
    Regime regime() const noexcept;

private:
    double p_;
    double beta_;
};

/// A positive value carried as its natural log, with a certificate on the
/// omitted series tail.
struct EvalResult {
    double log_value = 0.0;
    std::size_t terms_used = 0;
    /// log of (certified upper bound on the omitted tail) / value.
    double tail_bound_log = 0.0;
    /// Index k of the largest series term.
    std::size_t peak_index = 0;

    double value() const noexcept;
    /// value^{1/p}; the L_p norm of tau for p > 0.
    double root(double p) const noexcept;
};

/// One summand of the Dobinski series, in log space.
struct LogTerm {
    std::size_t k = 0;
    double log_term = 0.0;
};

/// log(e^{-beta} k^p beta^k / k!). For k = 0 this is -inf when p > 0 and
/// -beta when p = 0.
LogTerm log_term(const BellQuery& q, std::size_t k);

/// log(t_{k+1} / t_k) = p ln((k+1)/k) + ln beta - ln(k+1); strictly
/// decreasing in k.
double log_term_ratio(const BellQuery& q, std::size_t k);

inline constexpr double kDefaultPMax = 500.0;

struct SeriesOptions {
    double p_max = kDefaultPMax;
    std::size_t term_budget = 10'000'000;
};

/// p_max from the BELLBOUND_PMAX environment variable, or `fallback` when
/// unset. Throws DomainError when the variable is set but not a positive number.
double p_max_from_env(double fallback = kDefaultPMax);

/// log B(p, beta) with certified relative truncation error <= tol.
///
/// Terms are summed from k = 1 (k = 0 when p = 0) against a running-maximum
/// exponent shift with compensated accumulation. Once the term ratio r_k drops
/// below one, the omitted tail is at most t_k r_k / (1 - r_k) because r_k is
/// decreasing; summation stops when that bound relative to the partial sum is
/// at most tol.
///
/// Throws DomainError for tol outside (0, 1e-3] or p > options.p_max and
/// ToleranceNotReached when the term budget runs out first.
EvalResult bell_dobinski(const BellQuery& q, double tol = 1e-12,
                         const SeriesOptions& options = {});

// --- Touchard / Stirling-number oracle --------------------------------------

__extension__ typedef unsigned __int128 uint128;

inline constexpr int kTouchardMaxP = 30;

/// Row p of the Stirling numbers of the second kind, S(p, 0..p), built by the
/// triangle recurrence S(n, k) = k S(n-1, k) + S(n-1, k-1).
/// Throws OverflowError for p > kTouchardMaxP, DomainError for p < 0.
std::vector<uint128> stirling2_row(int p);

/// Exact sum_j S(p, j) beta^j for integer beta; bell_touchard_exact(p, 1) is
/// the classical Bell number. Throws OverflowError when the result does not
/// fit 128 bits.
uint128 bell_touchard_exact(int p, std::uint64_t beta);

/// sum_j S(p, j) beta^j for real beta > 0 from exact integer coefficients,
/// accumulated in long double.
long double bell_touchard(int p, long double beta);

std::string to_string(uint128 v);

// --- MGF (Chernoff-type) bound ---------------------------------------------

/// log of (p / (e lambda)) exp(beta (e^lambda - 1) / p), an upper bound on
/// log B^{1/p}(p, beta) for every lambda > 0. Requires p >= 1.
double log_mgf_bound_at_lambda(const BellQuery& q, double lambda);
double mgf_bound_at_lambda(const BellQuery& q, double lambda);

// --- Stirling majorant ------------------------------------------------------

/// log of zeta(x) = sqrt(2 pi x) (x/e)^x e^{1/(12x)}, for real x >= 1.
double log_stirling_zeta(double x);
double stirling_zeta(double x);

/// ln Gamma(x + 1) for x >= 0, reentrant.
double log_factorial(double x);

}  // namespace bellbound
