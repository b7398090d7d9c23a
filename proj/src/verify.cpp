#include "bellbound/verify.hpp"

#include "bellbound/applications.hpp"
#include "bellbound/asymptotics.hpp"
#include "bellbound/bounds.hpp"
#include "bellbound/counter_rng.hpp"
#include "bellbound/numfmt.hpp"
#include "bellbound/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace bellbound {

namespace {

std::string num(double v) { return format_number(v, 6); }

void add(SuiteResult& s, std::string name, bool pass, std::string detail) {
    s.checks.push_back({std::move(name), pass, std::move(detail)});
}

}  // namespace

bool SuiteResult::passed() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const CheckLine& c) { return c.pass; });
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = lo;
        return out;
    }
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = lo;
        return out;
    }
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    out.back() = hi;
    return out;
}

std::string format_suite(const SuiteResult& result) {
    std::ostringstream os;
    for (const auto& c : result.checks) {
        os << (c.pass ? "[PASS] " : "[FAIL] ") << result.suite << "." << c.name << ": " << c.detail << "\n";
    }
    for (const auto& n : result.notes) os << "[NOTE] " << result.suite << ": " << n << "\n";
    std::size_t failed = 0;
    for (const auto& c : result.checks) failed += c.pass ? 0 : 1;
    os << "suite " << result.suite << ": " << (failed == 0 ? "PASS" : "FAIL") << " (" << result.checks.size() - failed
       << "/" << result.checks.size() << " checks)\n";
    return os.str();
}

// --- oracles ---------------------------------------------------------------------

SuiteResult run_oracle_suite(const VerifyOptions& options) {
    SuiteResult s;
    s.suite = "oracles";

    double max_rel = 0.0;
    for (int p = 0; p <= 25; ++p) {
        for (double beta : {0.5, 1.0, 2.0, 10.0}) {
            const double series = bell_dobinski(BellQuery(p, beta), 1e-12, options.series).value();
            const double exact = static_cast<double>(bell_touchard(p, beta));
            max_rel = std::max(max_rel, std::abs(series - exact) / exact);
        }
    }
    add(s, "dobinski_vs_touchard", max_rel <= 1e-10,
        "max rel err " + num(max_rel) + " over p in [0,25] x beta in {0.5,1,2,10} (limit 1e-10)");

    const std::array<std::pair<int, unsigned>, 7> bell{{{0, 1}, {1, 1}, {2, 2}, {3, 5}, {4, 15}, {5, 52}, {10, 115975}}};
    bool bell_ok = true;
    for (auto [p, v] : bell) bell_ok = bell_ok && bell_touchard_exact(p, 1) == v;
    add(s, "bell_numbers", bell_ok, "B(0..5) = 1,1,2,5,15,52 and B(10) = 115975 exactly");

    bool zeta_ok = true;
    long double factorial = 1.0L;
    for (int k = 1; k <= 30; ++k) {
        factorial *= k;
        zeta_ok = zeta_ok && log_stirling_zeta(k) >= static_cast<double>(std::log(factorial));
    }
    add(s, "stirling_majorant", zeta_ok, "zeta(k) >= k! for k in [1,30]");

    bool unimodal = true;
    bool honest = true;
    double worst_honesty = 0.0;
    for (double p : {0.0, 0.5, 2.0, 7.3, 25.0, 120.0}) {
        for (double beta : {0.1, 1.0, 3.7, 40.0}) {
            const BellQuery q(p, beta);
            const auto r = bell_dobinski(q, 1e-10, options.series);
            const std::size_t first = p == 0.0 ? 0 : 1;
            for (std::size_t k = first; k + 1 < first + r.terms_used; ++k) {
                const double diff = log_term(q, k + 1).log_term - log_term(q, k).log_term;
                if (k < r.peak_index ? diff < -1e-12 : diff >= 0.0) unimodal = false;
            }
            const auto fine = bell_dobinski(q, 1e-12, options.series);
            const double change = std::abs(std::expm1(r.log_value - fine.log_value));
            worst_honesty = std::max(worst_honesty, change / std::exp(r.tail_bound_log));
            honest = honest && change <= std::exp(r.tail_bound_log);
        }
    }
    add(s, "unimodal_terms", unimodal, "terms rise to peak_index then fall on 24 queries");
    add(s, "tail_certificate", honest,
        "resumming at tol/100 moves the value by at most " + num(worst_honesty) + " x the certificate");
    return s;
}

// --- sandwich ----------------------------------------------------------------------

SuiteResult run_sandwich_suite(const VerifyOptions& options) {
    SuiteResult s;
    s.suite = "sandwich";
    constexpr double kSlack = 1e-9;
    const auto& consts = regime_constants();

    add(s, "k_plus", std::abs(consts.k_plus - 8.9758) <= 1e-3, "K+ = " + format_number(consts.k_plus, 10));
    add(s, "k_minus_formula", std::abs(consts.k_minus_formula - 0.4632) <= 1e-3,
        "formula (2 pi)^{-1/2} exp(-1/(2e) + 1/3) = " + format_number(consts.k_minus_formula, 10));
    s.notes.push_back("K- discrepancy: the formula evaluates to " + format_number(consts.k_minus_formula, 6) +
                      " but the printed value is " + format_number(consts.k_minus_printed, 6) +
                      "; the formula value is the default");
    s.notes.push_back("c3 fitted on p in [3, 200]: " + format_number(consts.c3_fitted, 10) + " (attained at p = " +
                      format_number(consts.c3_argmax_p, 6) + ")");

    const auto ps = log_grid(2.0, 200.0, 40);
    const auto betas = log_grid(0.1, 50.0, 12);

    struct Point {
        double p = 0.0;
        double beta = 0.0;
        std::size_t violations = 0;
        std::size_t checked = 0;
        bool infimum_ok = true;
        bool identity_ok = true;
        bool kminus_formula_violated = false;
        bool kminus_printed_violated = false;
        std::string first_violation;
    };
    std::vector<Point> points(ps.size() * betas.size());
    parallel_for(points.size(), [&](std::size_t i) {
        Point& pt = points[i];
        pt.p = ps[i / betas.size()];
        pt.beta = betas[i % betas.size()];
        const BellQuery q(pt.p, pt.beta);
        const double root = bell_dobinski(q, 1e-12, options.series).root(pt.p);
        auto check = [&](std::string_view what, double value, bool upper) {
            ++pt.checked;
            const bool bad = upper ? value < root * (1.0 - kSlack) : value > root * (1.0 + kSlack);
            if (bad) {
                ++pt.violations;
                if (pt.first_violation.empty()) pt.first_violation = std::string(what);
            }
        };
        const auto g = upper_g_optimized(q);
        check("GOptimized", g.bound, true);
        check("H0Search", lower_h0_search(q).root(pt.p), false);
        check("HContinuous", lower_h_continuous(q).bound, false);
        if (q.regime() == Regime::LargeP) {
            const double cf = upper_closed_form_largep(q);
            check("ClosedFormLargeP.upper", cf, true);
            check("ClosedFormLargeP.lower", lower_closed_form_largep(q), false);
            pt.infimum_ok = g.bound <= cf * (1.0 + kSlack);
        } else {
            check("KPlusLargeBeta", regime_upper_largebeta(q), true);
            pt.kminus_formula_violated = consts.k_minus_formula * pt.beta > root;
            pt.kminus_printed_violated = consts.k_minus_printed * pt.beta > root;
        }
        if (pt.p >= kRoughMinP && pt.beta >= 1.0) check("RoughTriangle", rough_upper_triangle(q, consts.c3_fitted), true);
        const auto report = bound_report(q);
        if (report.lower) check("report.lower", *report.lower, false);
        if (report.upper) check("report.upper", *report.upper, true);
        // K_+ is the lambda = p / beta MGF bound maximized at p / beta = 2.
        const BellQuery edge(2.0 * pt.beta, pt.beta);
        if (edge.p() >= 1.0) {
            const double lhs = regime_upper_largebeta(edge);
            const double rhs = mgf_bound_at_lambda(edge, 2.0);
            pt.identity_ok = std::abs(lhs - rhs) <= 1e-12 * rhs;
        }
    });

    std::size_t checked = 0;
    std::size_t violations = 0;
    std::size_t infimum_bad = 0;
    std::size_t identity_bad = 0;
    std::size_t kminus_points = 0;
    std::size_t kminus_formula_flags = 0;
    std::size_t kminus_printed_flags = 0;
    std::string first;
    for (const auto& pt : points) {
        checked += pt.checked;
        violations += pt.violations;
        if (first.empty() && !pt.first_violation.empty()) {
            first = " (first: " + pt.first_violation + " at p=" + num(pt.p) + ", beta=" + num(pt.beta) + ")";
        }
        infimum_bad += pt.infimum_ok ? 0 : 1;
        identity_bad += pt.identity_ok ? 0 : 1;
        if (BellQuery(pt.p, pt.beta).regime() == Regime::LargeBeta) {
            ++kminus_points;
            kminus_formula_flags += pt.kminus_formula_violated ? 1 : 0;
            kminus_printed_flags += pt.kminus_printed_violated ? 1 : 0;
        }
    }
    add(s, "bilateral", violations == 0,
        std::to_string(violations) + " violations in " + std::to_string(checked) + " bound checks on 40 x 12 grid" + first);
    add(s, "infimum_domination", infimum_bad == 0,
        std::to_string(infimum_bad) + " points where g_beta(p) exceeds the closed form");
    add(s, "k_plus_identity", identity_bad == 0,
        std::to_string(identity_bad) + " mismatches of K+ beta vs MGF bound at lambda = 2, p = 2 beta");
    s.notes.push_back("K- flags (formula constant): " + std::to_string(kminus_formula_flags) + " of " +
                      std::to_string(kminus_points) + " LargeBeta points violate");
    s.notes.push_back("K- flags (printed 0.6538): " + std::to_string(kminus_printed_flags) + " of " +
                      std::to_string(kminus_points) + " LargeBeta points violate");

    // Normalized deviation from p / (e ln r) on dyadic grids p = beta 2^j.
    double c0 = 0.0;
    double c0_lower_octaves = 0.0;
    double top_p = 0.0;
    std::vector<std::pair<double, double>> devs;
    for (double beta : betas) {
        for (int j = 2;; ++j) {
            const double p = beta * std::ldexp(1.0, j);
            if (p > options.series.p_max) break;
            if (p < 1.0) continue;
            const double lr = std::log(p / beta);
            const double main = p / (std::numbers::e * lr);
            const double root = bell_dobinski(BellQuery(p, beta), 1e-12, options.series).root(p);
            devs.emplace_back(p, std::abs(root - main) / main * lr / std::log(lr));
            top_p = std::max(top_p, p);
        }
    }
    for (auto [p, d] : devs) {
        c0 = std::max(c0, d);
        if (p <= top_p / 2.0) c0_lower_octaves = std::max(c0_lower_octaves, d);
    }
    add(s, "relative_error_corollary", std::isfinite(c0) && c0 == c0_lower_octaves,
        "C0 = " + num(c0) + " over " + std::to_string(devs.size()) +
            " dyadic points; no new maximum in the top octave p in (" + num(top_p / 2.0) + ", " + num(top_p) + "]");
    return s;
}

// --- inequalities ------------------------------------------------------------------

SuiteResult run_inequality_suite(const VerifyOptions& options) {
    SuiteResult s;
    s.suite = "inequalities";
    InequalityConfig config;
    config.trials = options.trials;
    config.seed = options.seed;
    const auto report = verify_inequalities(config);
    add(s, "rosenthal", report.rosenthal_violations == 0,
        std::to_string(report.rosenthal_violations) + " violations in " + std::to_string(report.trials) +
            " trials; max exact/bound " + num(report.max_rosenthal_ratio));
    add(s, "extremal", report.extremal_violations == 0,
        std::to_string(report.extremal_violations) + " violations in " + std::to_string(report.trials) +
            " trials; max exact/bound " + num(report.max_extremal_ratio));

    CounterRng rng(options.seed, 0x5eed);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double a = std::exp(std::log(1e-2) + std::log(1e4) * rng.uniform());
        const double b = std::exp(std::log(1e-2) + std::log(1e4) * rng.uniform());
        const double v = schechtman_extremal(ExtremalProblem(a, b, 2.0));
        worst = std::max(worst, std::abs(v - (a * a + b)) / (a * a + b));
    }
    add(s, "extremal_p2_identity", worst <= 1e-10, "max rel err vs a^2 + b over 100 draws: " + num(worst));

    // Enumeration vs Monte Carlo on shared instances.
    bool agree = true;
    double worst_z = 0.0;
    for (std::uint64_t t = 0; t < 3; ++t) {
        const auto family = random_family(options.seed, 1'000'000 + t, 4);
        std::vector<Summand> summands(family.begin(), family.end());
        const double exact = exact_sum_moment(family, 3.0).value;
        const auto mc = mc_sum_moment(summands, 3.0, 200'000, options.seed + t);
        const double z = std::abs(mc.value - exact) / *mc.std_error;
        worst_z = std::max(worst_z, z);
        agree = agree && z <= 4.0;
    }
    add(s, "enumeration_vs_monte_carlo", agree, "max |MC - exact| / stderr = " + num(worst_z) + " (limit 4)");

    for (double n : {4.0, 12.0}) {
        s.notes.push_back("tightness exact/extremal, Bernoulli(1/" + num(n) + ") x " + num(n) + ", p = 3: " +
                          num(extremal_tightness_ratio(3.0, 1.0, static_cast<std::size_t>(n))));
    }
    return s;
}

// --- asymptotics -------------------------------------------------------------------

SuiteResult run_asymptotics_suite(const VerifyOptions& options) {
    SuiteResult s;
    s.suite = "asymptotics";

    const std::array<double, 5> ps{25.0, 50.0, 100.0, 200.0, 300.0};
    double running = 0.0;
    double argmax = 0.0;
    std::string values;
    for (double p : ps) {
        const double lb = bell_dobinski(BellQuery(p, 1.0), 1e-12, options.series).log_value / p;
        const double lp = std::log(p);
        const double normalized = std::abs(lb - debruijn_expansion(p).total) * lp * lp / std::log(lp);
        if (normalized > running) {
            running = normalized;
            argmax = p;
        }
        values += (values.empty() ? "" : ", ") + num(normalized);
    }
    add(s, "expansion_residual_decay", argmax < 100.0,
        "R(p) ln^2 p / lnln p at p = 25..300: " + values + "; max at p = " + num(argmax));

    double worst = 0.0;
    std::vector<double> xs{0.0};
    const auto tail = log_grid(1e-6, 1e6, 49);
    xs.insert(xs.end(), tail.begin(), tail.end());
    for (double x : xs) {
        const double w = lambert_w(x);
        worst = std::max(worst, std::abs(w * std::exp(w) - x) / std::max(1.0, x));
    }
    add(s, "lambert_residual", worst <= 1e-12, "max |W e^W - x| / max(1, x) on 50 points in [0, 1e6]: " + num(worst));

    for (double p : {10.0, 20.0, 40.0, 80.0}) {
        const auto literal = bell_lambert_approx(p, options.series);
        const auto corrected = bell_lambert_approx_corrected(p, options.series);
        s.notes.push_back("Lambert form at p = " + num(p) + ": literal/B = " + num(*literal.ratio_to_series()) +
                          ", corrected/B = " + num(*corrected.ratio_to_series()));
    }

    std::size_t outside = 0;
    std::size_t total = 0;
    for (double p : linear_grid(50.0, 300.0, 11)) {
        const auto report = bound_report(BellQuery(p, 1.0));
        const double approx = std::exp(debruijn_expansion(p).total);
        ++total;
        if (!(report.lower && report.upper && *report.lower <= approx && approx <= *report.upper)) ++outside;
    }
    s.notes.push_back("exp(expansion) outside the bound sandwich at " + std::to_string(outside) + " of " +
                      std::to_string(total) + " points p in [50, 300]");
    return s;
}

}  // namespace bellbound
