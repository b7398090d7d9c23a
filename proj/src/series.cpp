#include "bellbound/series.hpp"

#include "bellbound/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>
#include <system_error>

namespace bellbound {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// Neumaier-compensated sum whose terms are stored relative to exp(shift_).
class ShiftedSum {
public:
    explicit ShiftedSum(double first_log) : shift_(first_log), sum_(1.0) {}

    void add(double log_term) {
        if (log_term > shift_) {
            const double scale = std::exp(shift_ - log_term);
            sum_ *= scale;
            comp_ *= scale;
            shift_ = log_term;
        }
        const double x = std::exp(log_term - shift_);
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double log_total() const { return shift_ + std::log(sum_ + comp_); }

private:
    double shift_;
    double sum_;
    double comp_ = 0.0;
};

// log(k!) - [(k + 1/2) ln k - k + ln(2 pi)/2], the Stirling remainder.
double stirling_error(double k) {
    if (k <= 15.0) {
        return std::lgamma(k + 1.0) - (k + 0.5) * std::log(k) + k - 0.5 * std::log(2.0 * std::numbers::pi);
    }
    const double k2 = k * k;
    return (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * k2)) / k2) / k2) / k;
}

// (1 + u) ln(1 + u) - u, accurate for small |u|.
double deviance(double u) {
    if (std::abs(u) >= 0.1) return (1.0 + u) * std::log1p(u) - u;
    // sum_{n >= 2} (-1)^n u^n / (n (n - 1))
    double term = u * u;
    double total = 0.0;
    for (int n = 2; n < 60; ++n) {
        const double add = term / (n * (n - 1.0));
        total += add;
        if (std::abs(add) <= 1e-17 * std::abs(total)) break;
        term *= -u;
    }
    return total;
}

// log of the Poisson(beta) mass at k >= 1 without the cancellation between
// k ln beta, beta and log k! that a direct evaluation suffers at large beta.
double log_poisson_mass(double k, double beta) {
    return -beta * deviance((k - beta) / beta) - 0.5 * std::log(2.0 * std::numbers::pi * k) - stirling_error(k);
}

// Index of the largest term: the first k >= first whose successor is smaller.
std::size_t mode_index(const BellQuery& q, std::size_t first) {
    if (log_term_ratio(q, first) < 0.0) return first;
    std::size_t lo = first;  // ratio >= 0
    std::size_t hi = std::max<std::size_t>(2 * first, 2);
    while (log_term_ratio(q, hi) >= 0.0) {
        lo = hi;
        hi *= 2;
    }
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        (log_term_ratio(q, mid) >= 0.0 ? lo : hi) = mid;
    }
    return hi;
}

}  // namespace

std::string_view to_string(Regime r) noexcept {
    switch (r) {
        case Regime::LargeP: return "LargeP";
        case Regime::LargeBeta: return "LargeBeta";
        case Regime::Gap: return "Gap";
    }
    return "Gap";
}

BellQuery::BellQuery(double p, double beta) : p_(p), beta_(beta) {
    if (!std::isfinite(p) || p < 0.0) {
        throw DomainError("p must be finite and >= 0 (got p = " + fmt(p) + ")");
    }
    if (!std::isfinite(beta) || beta <= 0.0) {
        throw DomainError("beta must be finite and > 0 (got beta = " + fmt(beta) + ")");
    }
}

Regime BellQuery::regime() const noexcept {
    if (p_ < 1.0) return Regime::Gap;
    // p >= 2 beta is exact in binary floating point; p / beta >= 2 is not.
    return p_ >= 2.0 * beta_ ? Regime::LargeP : Regime::LargeBeta;
}

double EvalResult::value() const noexcept { return std::exp(log_value); }

double EvalResult::root(double p) const noexcept { return std::exp(log_value / p); }

double log_factorial(double x) {
#if defined(__GLIBC__)
    int sign = 0;
    return ::lgamma_r(x + 1.0, &sign);
#else
    return std::lgamma(x + 1.0);
#endif
}

LogTerm log_term(const BellQuery& q, std::size_t k) {
    if (k == 0) {
        return {0, q.p() == 0.0 ? -q.beta() : kNegInf};
    }
    const double kd = static_cast<double>(k);
    return {k, q.p() * std::log(kd) + log_poisson_mass(kd, q.beta())};
}

double log_term_ratio(const BellQuery& q, std::size_t k) {
    const double kd = static_cast<double>(k);
    if (k == 0) {
        // Only finite when p = 0: t_1 / t_0 = beta.
        return q.p() == 0.0 ? std::log(q.beta()) : std::numeric_limits<double>::infinity();
    }
    return q.p() * std::log1p(1.0 / kd) + std::log(q.beta()) - std::log1p(kd);
}

double p_max_from_env(double fallback) {
    const char* raw = std::getenv("BELLBOUND_PMAX");
    if (raw == nullptr || *raw == '\0') return fallback;
    const std::string_view text(raw);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !(v > 0.0) || !std::isfinite(v)) {
        throw DomainError("BELLBOUND_PMAX must be a positive number (got '" + std::string(text) + "')");
    }
    return v;
}

EvalResult bell_dobinski(const BellQuery& q, double tol, const SeriesOptions& options) {
    if (!(tol > 0.0 && tol <= 1e-3)) {
        throw DomainError("tol must lie in (0, 1e-3] (got tol = " + fmt(tol) + ")");
    }
    if (q.p() > options.p_max) {
        throw DomainError("p = " + fmt(q.p()) + " exceeds p_max = " + fmt(options.p_max));
    }

    // Sum outward from the largest term. Term ratios decrease in k, so on
    // either side the unsummed remainder is dominated by a geometric series
    // started at the last term added.
    // The bulk of the mass spans ~sqrt(beta) terms; far beyond any budget
    // here, and k would no longer fit an index.
    if (q.beta() > 1e15) {
        throw ToleranceNotReached("series for beta = " + fmt(q.beta()) + " would exceed the term budget of " +
                                  std::to_string(options.term_budget));
    }
    const double log_tol = std::log(tol);
    const std::size_t first = q.p() == 0.0 ? 0 : 1;
    const std::size_t peak = mode_index(q, first);
    ShiftedSum sum(log_term(q, peak).log_term);
    std::size_t terms = 1;

    std::size_t right = peak;
    double right_log = log_term(q, peak).log_term;
    std::size_t left = peak;
    double left_log = right_log;
    bool left_done = left == first;

    auto right_tail = [&] {
        const double lr = log_term_ratio(q, right);
        return right_log + lr - std::log(-std::expm1(lr));
    };
    auto left_tail = [&] {
        if (left_done) return kNegInf;
        const double lr = -log_term_ratio(q, left - 1);  // log(t_{left-1} / t_left) < 0
        return left_log + lr - std::log(-std::expm1(lr));
    };

    for (;;) {
        const double rt = right_tail();
        const double lt = left_tail();
        const double log_tail = std::max(rt, lt) + std::log1p(std::exp(std::min(rt, lt) - std::max(rt, lt)));
        const double rel = log_tail - sum.log_total();
        if (rel <= log_tol) {
            return EvalResult{sum.log_total(), terms, rel, peak};
        }
        if (terms >= options.term_budget) {
            throw ToleranceNotReached("series for p = " + fmt(q.p()) + ", beta = " + fmt(q.beta()) +
                                      " did not certify tol = " + fmt(tol) + " within " +
                                      std::to_string(options.term_budget) + " terms");
        }
        // extend whichever side currently dominates the remainder
        if (lt > rt) {
            --left;
            left_log = log_term(q, left).log_term;
            sum.add(left_log);
            left_done = left == first;
        } else {
            ++right;
            right_log = log_term(q, right).log_term;
            sum.add(right_log);
        }
        ++terms;
    }
}

// --- Touchard ----------------------------------------------------------------

std::vector<uint128> stirling2_row(int p) {
    if (p < 0) throw DomainError("Stirling row index must be >= 0");
    if (p > kTouchardMaxP) {
        throw OverflowError("exact Touchard path is limited to p <= " + std::to_string(kTouchardMaxP) +
                            " (got p = " + std::to_string(p) + ")");
    }
    std::vector<uint128> row{1};
    for (int n = 1; n <= p; ++n) {
        std::vector<uint128> next(static_cast<std::size_t>(n) + 1, 0);
        for (int k = 1; k <= n; ++k) {
            const uint128 left = k < n ? row[static_cast<std::size_t>(k)] : 0;
            uint128 scaled = 0;
            uint128 total = 0;
            if (__builtin_mul_overflow(left, static_cast<uint128>(k), &scaled) ||
                __builtin_add_overflow(scaled, row[static_cast<std::size_t>(k) - 1], &total)) {
                throw OverflowError("Stirling number overflow at n = " + std::to_string(n));
            }
            next[static_cast<std::size_t>(k)] = total;
        }
        row = std::move(next);
    }
    return row;
}

uint128 bell_touchard_exact(int p, std::uint64_t beta) {
    const auto row = stirling2_row(p);
    uint128 acc = 0;
    for (auto it = row.rbegin(); it != row.rend(); ++it) {
        if (__builtin_mul_overflow(acc, static_cast<uint128>(beta), &acc) ||
            __builtin_add_overflow(acc, *it, &acc)) {
            throw OverflowError("Touchard polynomial value exceeds 128 bits (p = " + std::to_string(p) +
                                ", beta = " + std::to_string(beta) + ")");
        }
    }
    return acc;
}

long double bell_touchard(int p, long double beta) {
    if (!(beta > 0.0L)) throw DomainError("beta must be > 0");
    const auto row = stirling2_row(p);
    long double acc = 0.0L;
    for (auto it = row.rbegin(); it != row.rend(); ++it) {
        acc = acc * beta + static_cast<long double>(*it);
    }
    return acc;
}

std::string to_string(uint128 v) {
    if (v == 0) return "0";
    std::string digits;
    while (v != 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(digits.begin(), digits.end());
    return digits;
}

// --- MGF bound -----------------------------------------------------------------

double log_mgf_bound_at_lambda(const BellQuery& q, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw DomainError("lambda must be finite and > 0 (got lambda = " + fmt(lambda) + ")");
    }
    if (q.p() < 1.0) {
        throw DomainError("the MGF bound requires p >= 1 (got p = " + fmt(q.p()) + ")");
    }
    return std::log(q.p()) - 1.0 - std::log(lambda) + q.beta() * std::expm1(lambda) / q.p();
}

double mgf_bound_at_lambda(const BellQuery& q, double lambda) {
    return std::exp(log_mgf_bound_at_lambda(q, lambda));
}

// --- Stirling majorant -----------------------------------------------------------

double log_stirling_zeta(double x) {
    if (!(x >= 1.0) || !std::isfinite(x)) {
        throw DomainError("zeta(x) requires x >= 1 (got x = " + fmt(x) + ")");
    }
    return 0.5 * std::log(2.0 * std::numbers::pi * x) + x * (std::log(x) - 1.0) + 1.0 / (12.0 * x);
}

double stirling_zeta(double x) { return std::exp(log_stirling_zeta(x)); }

}  // namespace bellbound
