#include "bellbound/bounds.hpp"

#include "bellbound/errors.hpp"
#include "bellbound/scalar_search.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

namespace bellbound {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void require_p_at_least_one(const BellQuery& q, std::string_view what) {
    if (q.p() < 1.0) {
        throw DomainError(std::string(what) + " requires p >= 1 (got p = " + fmt(q.p()) + ")");
    }
}

void require_large_p(const BellQuery& q, std::string_view what) {
    require_p_at_least_one(q, what);
    if (q.p() < 2.0 * q.beta()) {
        throw RegimeError(std::string(what) + " requires p >= 2 beta (got p / beta = " + fmt(q.ratio()) +
                          ")");
    }
}

void require_large_beta(const BellQuery& q, std::string_view what) {
    require_p_at_least_one(q, what);
    if (q.p() > 2.0 * q.beta()) {
        throw RegimeError(std::string(what) + " requires p <= 2 beta (got p / beta = " + fmt(q.ratio()) +
                          ")");
    }
}

RegimeConstants build_constants() {
    RegimeConstants c;
    const double e = std::numbers::e;
    c.k_plus = std::exp((e * e - 3.0) / 2.0);
    c.k_minus_formula = std::exp(-0.5 * std::log(2.0 * std::numbers::pi) - 1.0 / (2.0 * e) + 1.0 / 3.0);

    // The required constant decreases in p on this range, so the endpoint
    // kRoughMinP dominates; the grid also covers interior points.
    constexpr int kGrid = 400;
    const double log_lo = std::log(kRoughMinP);
    const double log_hi = std::log(kC3FitMaxP);
    c.c3_fitted = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < kGrid; ++i) {
        const double p = std::exp(log_lo + (log_hi - log_lo) * i / (kGrid - 1));
        const double root = bell_dobinski(BellQuery(p, 1.0), 1e-13).root(p);
        const double lp = std::log(p);
        const double required = (root * e * lp / p - 1.0) * lp / std::log(lp);
        if (required > c.c3_fitted) {
            c.c3_fitted = required;
            c.c3_argmax_p = p;
        }
    }
    return c;
}

}  // namespace

std::string_view to_string(LowerMethod m) noexcept {
    switch (m) {
        case LowerMethod::H0Search: return "H0Search";
        case LowerMethod::HContinuous: return "HContinuous";
        case LowerMethod::ClosedFormLargeP: return "ClosedFormLargeP";
        case LowerMethod::KMinusLargeBeta: return "KMinusLargeBeta";
    }
    return "";
}

std::string_view to_string(UpperMethod m) noexcept {
    switch (m) {
        case UpperMethod::GOptimized: return "GOptimized";
        case UpperMethod::ClosedFormLargeP: return "ClosedFormLargeP";
        case UpperMethod::KPlusLargeBeta: return "KPlusLargeBeta";
        case UpperMethod::RoughTriangle: return "RoughTriangle";
    }
    return "";
}

const RegimeConstants& regime_constants() {
    static const RegimeConstants constants = build_constants();
    return constants;
}

// --- upper bounds -------------------------------------------------------------

OptimizedBound upper_g_optimized(const BellQuery& q, double opt_tol) {
    require_p_at_least_one(q, "upper_g_optimized");
    if (!(opt_tol > 0.0)) throw DomainError("opt_tol must be > 0");

    const double r = q.ratio();
    // lambda* solves lambda e^lambda = r, so lambda* >= min(1, r) / e and
    // lambda* <= ln(1 + r) < lambda_hi.
    const double lo = 1e-3 * std::min(1.0, r) / std::numbers::e;
    const double hi = std::max(1.0, std::log1p(700.0 * (1.0 + q.p()) / q.beta()));
    const double seed = r >= 2.0 ? lambda0(q) : std::log1p(r);

    auto objective = [&q](double lambda) { return log_mgf_bound_at_lambda(q, lambda); };
    const SearchResult s = minimize_from_seed(objective, seed, lo, hi, opt_tol * 1e-4);

    OptimizedBound out;
    out.argument = s.x;
    out.log_bound = s.f;
    out.bound = std::exp(s.f);
    out.converged = s.converged && !s.at_boundary;
    // lambda * d/dlambda of the log objective
    out.stationarity_residual = std::abs(-1.0 + s.x * q.beta() * std::exp(s.x) / q.p());
    return out;
}

double lambda0(const BellQuery& q) {
    const double r = q.ratio();
    if (!(r > 1.0)) {
        throw DomainError("lnln(p / beta) requires p / beta > 1 (got " + fmt(r) + ")");
    }
    const double lr = std::log(r);
    return lr - std::log(lr);
}

double upper_closed_form_largep(const BellQuery& q) {
    require_large_p(q, "upper_closed_form_largep");
    const double l0 = lambda0(q);
    if (!(l0 > 0.0)) throw DomainError("lambda0 must be > 0 (got " + fmt(l0) + ")");
    const double r = q.ratio();
    const double lr = std::log(r);
    return (q.p() / std::numbers::e) / l0 * std::exp(1.0 / lr - 1.0 / r);
}

double regime_upper_largebeta(const BellQuery& q) {
    require_large_beta(q, "regime_upper_largebeta");
    return regime_constants().k_plus * q.beta();
}

double rough_upper_triangle(const BellQuery& q, double c3) {
    if (q.p() < kRoughMinP) {
        throw DomainError("rough_upper_triangle requires p >= " + fmt(kRoughMinP) + " (got p = " +
                          fmt(q.p()) + ")");
    }
    if (q.beta() < 1.0) {
        throw DomainError("rough_upper_triangle requires beta >= 1 (got beta = " + fmt(q.beta()) + ")");
    }
    if (!(c3 > 0.0) || !std::isfinite(c3)) throw DomainError("c3 must be finite and > 0");
    const double lp = std::log(q.p());
    return std::ceil(q.beta()) * (q.p() / (std::numbers::e * lp)) * (1.0 + c3 * std::log(lp) / lp);
}

// --- lower bounds -------------------------------------------------------------

double TermSearch::bound() const noexcept { return std::exp(log_bound); }

double TermSearch::root(double p) const noexcept { return std::exp(log_bound / p); }

TermSearch lower_h0_search(const BellQuery& q) {
    if (!(q.p() > 0.0)) throw DomainError("lower_h0_search requires p > 0");
    std::size_t k = 1;
    while (log_term_ratio(q, k) > 0.0) ++k;
    return TermSearch{log_term(q, k).log_term, k};
}

OptimizedBound lower_h_continuous(const BellQuery& q, double opt_tol) {
    if (!(q.p() > 0.0)) throw DomainError("lower_h_continuous requires p > 0");
    if (!(opt_tol > 0.0)) throw DomainError("opt_tol must be > 0");

    const double p = q.p();
    const double log_beta = std::log(q.beta());
    // Minimize the negated log of the smoothed term (strictly convex in x).
    auto neg_log_term = [&](double x) {
        return -(-q.beta() + p * std::log(x) + x * log_beta - log_stirling_zeta(x));
    };
    const double hi = 4.0 * (p + q.beta()) + 10.0;
    const double seed_denom = std::log(p * std::numbers::e / q.beta());
    const double seed = seed_denom > 0.0 ? std::floor(p / seed_denom) + 1.0 : 1.0;
    const SearchResult s = minimize_from_seed(neg_log_term, seed, 1.0, hi, opt_tol * 1e-4);

    OptimizedBound out;
    out.argument = s.x;
    out.log_bound = -s.f / p;
    out.bound = std::exp(out.log_bound);
    const double x = s.x;
    const double slope = p / x + log_beta - std::log(x) - 1.0 / (2.0 * x) + 1.0 / (12.0 * x * x);
    out.converged = s.converged && x < hi;
    out.stationarity_residual = (x <= 1.0 && slope <= 0.0) ? 0.0 : std::abs(x * slope) / p;
    return out;
}

std::uint64_t k0_selector(const BellQuery& q) {
    require_p_at_least_one(q, "k0_selector");
    const double denom = std::log(q.p() * std::numbers::e / q.beta());
    if (!(denom > 0.0)) {
        throw DomainError("k0_selector requires ln(p e / beta) > 0 (got " + fmt(denom) + ")");
    }
    return static_cast<std::uint64_t>(std::floor(q.p() / denom)) + 1;
}

double lower_closed_form_largep(const BellQuery& q) {
    require_large_p(q, "lower_closed_form_largep");
    const auto k0 = k0_selector(q);
    return std::exp(log_term(q, k0).log_term / q.p());
}

KMinusResult regime_lower_largebeta(const BellQuery& q, bool use_printed_constant,
                                    const SeriesOptions& series) {
    require_large_beta(q, "regime_lower_largebeta");
    const auto& c = regime_constants();
    KMinusResult out;
    out.printed_constant = use_printed_constant;
    out.constant = use_printed_constant ? c.k_minus_printed : c.k_minus_formula;
    out.value = out.constant * q.beta();
    if (q.p() <= series.p_max) {
        const double root = bell_dobinski(q, 1e-12, series).root(q.p());
        out.series_root = root;
        out.violated = out.value > root;
    }
    return out;
}

// --- report -------------------------------------------------------------------

std::string_view BoundCandidate::name() const noexcept {
    return std::visit([](auto m) { return to_string(m); }, method);
}

namespace {

template <class Method, class Fn>
BoundCandidate try_candidate(Method method, Fn&& fn) {
    BoundCandidate c;
    c.method = method;
    try {
        fn(c);
    } catch (const std::exception& ex) {
        c.value.reset();
        c.error = ex.what();
    }
    return c;
}

}  // namespace

BoundReport bound_report(const BellQuery& q, const ReportOptions& options) {
    require_p_at_least_one(q, "bound_report");
    BoundReport report(q);
    report.k_minus_printed_constant = options.use_printed_k_minus;
    const double p = q.p();

    // Upper candidates.
    report.candidates.push_back(try_candidate(UpperMethod::GOptimized, [&](BoundCandidate& c) {
        const auto g = upper_g_optimized(q, options.opt_tol);
        c.value = g.bound;
        c.witness.lambda = g.argument;
        c.converged = g.converged;
    }));
    if (report.regime == Regime::LargeP) {
        report.candidates.push_back(
            try_candidate(UpperMethod::ClosedFormLargeP, [&](BoundCandidate& c) {
                c.value = upper_closed_form_largep(q);
                c.witness.lambda = lambda0(q);
            }));
    } else {
        report.candidates.push_back(
            try_candidate(UpperMethod::KPlusLargeBeta, [&](BoundCandidate& c) {
                c.value = regime_upper_largebeta(q);
                c.witness.lambda = q.ratio();
            }));
    }
    if (p >= kRoughMinP && q.beta() >= 1.0) {
        report.candidates.push_back(
            try_candidate(UpperMethod::RoughTriangle, [&](BoundCandidate& c) {
                c.value = rough_upper_triangle(q, regime_constants().c3_fitted);
            }));
    }

    // Lower candidates.
    report.candidates.push_back(try_candidate(LowerMethod::H0Search, [&](BoundCandidate& c) {
        const auto h0 = lower_h0_search(q);
        c.value = h0.root(p);
        c.witness.k = h0.k_star;
    }));
    report.candidates.push_back(try_candidate(LowerMethod::HContinuous, [&](BoundCandidate& c) {
        const auto h = lower_h_continuous(q, options.opt_tol);
        c.value = h.bound;
        c.witness.x = h.argument;
        c.converged = h.converged;
    }));
    if (report.regime == Regime::LargeP) {
        report.candidates.push_back(
            try_candidate(LowerMethod::ClosedFormLargeP, [&](BoundCandidate& c) {
                c.value = lower_closed_form_largep(q);
                c.witness.k = k0_selector(q);
            }));
    } else {
        report.candidates.push_back(
            try_candidate(LowerMethod::KMinusLargeBeta, [&](BoundCandidate& c) {
                // The series check happens below, uniformly for all candidates.
                c.rigorous = false;
                c.value = (options.use_printed_k_minus ? regime_constants().k_minus_printed
                                                     : regime_constants().k_minus_formula) *
                          q.beta();
            }));
    }

    for (const auto& c : report.candidates) {
        if (!c.value || !c.rigorous || !c.converged) continue;
        if (const auto* m = std::get_if<UpperMethod>(&c.method)) {
            if (!report.upper || *c.value < *report.upper) {
                report.upper = c.value;
                report.upper_method = *m;
                report.upper_witness = c.witness;
            }
        } else if (!report.lower || *c.value > *report.lower) {
            report.lower = c.value;
            report.lower_method = std::get<LowerMethod>(c.method);
            report.lower_witness = c.witness;
        }
    }

    if (p <= options.series.p_max) {
        try {
            const double root = bell_dobinski(q, options.series_tol, options.series).root(p);
            SeriesCheck check{root};
            const double slack = options.slack * root;
            for (auto& c : report.candidates) {
                if (!c.value) continue;
                c.violated = c.upper() ? *c.value < root - slack : *c.value > root + slack;
            }
            check.lower_ok = !report.lower || *report.lower <= root + slack;
            check.upper_ok = !report.upper || *report.upper >= root - slack;
            report.series_check = check;
        } catch (const NumericalBudgetError&) {
            // The report stands without the cross-check.
        }
    }
    return report;
}

}  // namespace bellbound
