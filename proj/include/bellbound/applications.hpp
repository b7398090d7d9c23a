#pragma once

// Moment inequalities for sums of non-negative independent random variables:
//
//   E(sum eta_j)^p <= B(p) max{ sum E eta_j^p, (sum E eta_j)^p },  p >= 2
//
// and the extremal value over the class of families with prescribed
// sum of means a and sum of p-th moments b,
//
//   sup E(sum eta_j)^p = (b / a)^{p/(p-1)} B(p, mu),  mu = a^{p/(p-1)} b^{1/(1-p)},
//
// with exact-enumeration and Monte Carlo oracles for the left-hand side.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace bellbound {

struct Atom {
    double value = 0.0;
    double prob = 0.0;
};

/// Finite-support distribution on [0, inf).
class DiscreteDist {
public:
    /// Throws DomainError unless every value is finite and >= 0, every prob
    /// lies in (0, 1] and the probs sum to 1 within 1e-12.
    explicit DiscreteDist(std::vector<Atom> atoms);

    /// Parses `v1:p1,v2:p2,...`.
    static DiscreteDist parse(std::string_view line);

    std::span<const Atom> atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    double mean() const noexcept;
    double moment(double p) const;
    DiscreteDist scaled(double c) const;
    std::string to_string() const;

private:
    std::vector<Atom> atoms_;
};

/// One distribution per non-empty line; lines starting with '#' are skipped.
/// Parse errors name the offending line number.
std::vector<DiscreteDist> read_instance(std::istream& in);

struct PoissonSpec {
    double beta = 0.0;
};

using Summand = std::variant<DiscreteDist, PoissonSpec>;

inline constexpr std::size_t kMaxEnumerationAtoms = 8;
inline constexpr std::size_t kEnumerationBudget = 1'000'000;
inline constexpr double kMaxPoissonSampleBeta = 700.0;

enum class MomentMethod { Enumeration, MonteCarlo };

std::string_view to_string(MomentMethod m) noexcept;

struct SumMomentResult {
    double value = 0.0;
    MomentMethod method = MomentMethod::Enumeration;
    /// Monte Carlo only.
    std::optional<double> std_error;
    std::size_t n = 0;
};

/// B(p) max{sum_p_moments, sum_means^p} with B(p) = B(p, 1), or
/// B(p, beta_override) when given. Requires p >= 2 and positive finite sums.
double rosenthal_bound(double p, double sum_p_moments, double sum_means,
                       std::optional<double> beta_override = std::nullopt);

/// The (a, b, p) triple of the extremal problem.
class ExtremalProblem {
public:
    /// Throws DomainError unless a > 0, b > 0 and p > 1 (all finite).
    ExtremalProblem(double a, double b, double p);

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double p() const noexcept { return p_; }
    /// a^{p/(p-1)} b^{1/(1-p)}, recomputed on access.
    double mu() const noexcept;
    double log_mu() const noexcept;

private:
    double a_;
    double b_;
    double p_;
};

/// log of (b/a)^{p/(p-1)} B(p, mu). Throws OverflowError when mu is not
/// finite; a mu too large for the series budget propagates its error.
double log_schechtman_extremal(const ExtremalProblem& prob);
/// Throws OverflowError when the value is not representable.
double schechtman_extremal(const ExtremalProblem& prob);

/// E(sum X_i)^p by enumerating every outcome tuple. Requires p > 0, at most
/// kMaxEnumerationAtoms atoms per distribution, and a product of support sizes
/// <= kEnumerationBudget (BudgetExceeded otherwise).
SumMomentResult exact_sum_moment(std::span<const DiscreteDist> dists, double p);

/// Seeded Monte Carlo estimate of E(sum X_i)^p with its standard error.
/// Sample i draws from counter stream i, so results do not depend on the
/// thread count. Requires samples >= 10^4, p > 0, Poisson beta <= 700.
SumMomentResult mc_sum_moment(std::span<const Summand> summands, double p, std::size_t samples,
                              std::uint64_t seed);

struct InequalityViolation {
    std::size_t trial = 0;
    double p = 0.0;
    std::size_t n = 0;
    double exact = 0.0;
    double bound = 0.0;
    /// "rosenthal" or "extremal"
    std::string inequality;
};

struct InequalityConfig {
    std::size_t trials = 1000;
    std::uint64_t seed = 7;
    std::vector<double> p_set{2.0, 3.0, 4.0};
    std::size_t n_max = 12;
    double slack = 1e-9;
};

struct InequalityReport {
    std::size_t trials = 0;
    std::size_t rosenthal_violations = 0;
    std::size_t extremal_violations = 0;
    /// Largest exact / bound ratios seen.
    double max_rosenthal_ratio = 0.0;
    double max_extremal_ratio = 0.0;
    std::vector<InequalityViolation> violations;
};

/// Random family used by verify_inequalities: n in [1, n_max] summands, 2-4
/// atoms each (reduced until enumeration stays below 2^16 outcomes), values
/// log-uniform in [1e-2, 1e2], probabilities from a flat Dirichlet.
std::vector<DiscreteDist> random_family(std::uint64_t seed, std::uint64_t trial, std::size_t n_max);

/// Checks both inequalities on config.trials random families against the
/// enumeration oracle. Trials run in parallel with per-trial seeds; the report
/// is assembled in trial order.
InequalityReport verify_inequalities(const InequalityConfig& config);

/// exact / extremal value for n i.i.d. copies of Bernoulli(mu / n), the
/// finite-n approximation of the extremal Poisson configuration.
double extremal_tightness_ratio(double p, double mu, std::size_t n);

}  // namespace bellbound
