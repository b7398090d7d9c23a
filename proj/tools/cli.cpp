#include "cli.hpp"

#include "bellbound/applications.hpp"
#include "bellbound/asymptotics.hpp"
#include "bellbound/bounds.hpp"
#include "bellbound/errors.hpp"
#include "bellbound/numfmt.hpp"
#include "bellbound/parallel.hpp"
#include "bellbound/series.hpp"
#include "bellbound/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

namespace bellbound::cli {

namespace {

using nlohmann::json;

struct GridFlags {
    double start = 1.0;
    double stop = 1.0;
    std::size_t count = 1;
    bool log = false;
    std::vector<double> values;
};

struct Flags {
    double p = 0.0;
    double beta = 1.0;
    double tol = 1e-12;
    std::string format;
    double a = 0.0;
    double b = 0.0;
    std::uint64_t seed = 7;
    std::size_t trials = 1000;
    std::string suite = "all";
    std::string out_path;
    std::string instances_path;
    bool printed_k_minus = false;
    GridFlags p_grid{2.0, 200.0, 10, true, {}};
    GridFlags beta_grid;
};

/// Significant digits justified by a relative tolerance, keeping one guard digit.
int digits_for(double tol) {
    return std::clamp(static_cast<int>(std::floor(-std::log10(tol))) - 1, 1, 17);
}

json optional_number(const std::optional<double>& v) {
    return v && std::isfinite(*v) ? json(*v) : json(nullptr);
}

json witness_json(const Witness& w) {
    if (w.empty()) return nullptr;
    json j = json::object();
    if (w.lambda) j["lambda"] = *w.lambda;
    if (w.k) j["k"] = *w.k;
    if (w.x) j["x"] = *w.x;
    return j;
}

std::string witness_text(const Witness& w) {
    if (w.lambda) return "lambda = " + format_number(*w.lambda, 12);
    if (w.k) return "k = " + std::to_string(*w.k);
    if (w.x) return "x = " + format_number(*w.x, 12);
    return "-";
}

// --- eval ------------------------------------------------------------------------

int cmd_eval(const Flags& f, const SeriesOptions& series, std::ostream& out) {
    const BellQuery q(f.p, f.beta);
    const auto r = bell_dobinski(q, f.tol, series);
    const int digits = digits_for(f.tol);
    if (f.format == "json") {
        const double value = r.value();
        json j{{"p", q.p()},
               {"beta", q.beta()},
               {"value", std::isfinite(value) ? json(value) : json(nullptr)},
               {"value_text", format_from_log(r.log_value, digits)},
               {"log_value", r.log_value},
               {"terms_used", r.terms_used},
               {"peak_index", r.peak_index},
               {"tail_bound_log", r.tail_bound_log},
               {"tol", f.tol}};
        out << j.dump(2) << "\n";
    } else {
        out << "p: " << format_number(q.p()) << "\n"
            << "beta: " << format_number(q.beta()) << "\n"
            << "value: " << format_from_log(r.log_value, digits) << "\n"
            << "log_value: " << format_number(r.log_value) << "\n"
            << "terms_used: " << r.terms_used << "\n"
            << "peak_index: " << r.peak_index << "\n"
            << "tail_bound_log: " << format_number(r.tail_bound_log) << "\n";
    }
    return kSuccess;
}

// --- bounds ----------------------------------------------------------------------

json report_json(const BoundReport& rep) {
    json witness{{"lower", witness_json(rep.lower_witness)}, {"upper", witness_json(rep.upper_witness)}};
    json series_check = nullptr;
    if (rep.series_check) {
        series_check = {{"b_1p", rep.series_check->root},
                        {"lower_ok", rep.series_check->lower_ok},
                        {"upper_ok", rep.series_check->upper_ok}};
    }
    json candidates = json::array();
    for (const auto& c : rep.candidates) {
        candidates.push_back({{"method", std::string(c.name())},
                              {"kind", c.upper() ? "upper" : "lower"},
                              {"value", optional_number(c.value)},
                              {"rigorous", c.rigorous},
                              {"converged", c.converged},
                              {"violated", c.violated ? json(*c.violated) : json(nullptr)},
                              {"witness", witness_json(c.witness)},
                              {"error", c.error.empty() ? json(nullptr) : json(c.error)}});
    }
    return json{
        {"p", rep.query.p()},
        {"beta", rep.query.beta()},
        {"regime", std::string(to_string(rep.regime))},
        {"lower", optional_number(rep.lower)},
        {"lower_method", rep.lower_method ? json(std::string(to_string(*rep.lower_method))) : json(nullptr)},
        {"upper", optional_number(rep.upper)},
        {"upper_method", rep.upper_method ? json(std::string(to_string(*rep.upper_method))) : json(nullptr)},
        {"witness", witness},
        {"series_check", series_check},
        {"k_minus_constant", rep.k_minus_printed_constant ? "printed" : "formula"},
        {"candidates", candidates},
    };
}

int cmd_bounds(const Flags& f, const SeriesOptions& series, std::ostream& out) {
    ReportOptions options;
    options.series = series;
    options.use_printed_k_minus = f.printed_k_minus;
    const auto rep = bound_report(BellQuery(f.p, f.beta), options);
    if (f.format == "json") {
        out << report_json(rep).dump(2) << "\n";
        return kSuccess;
    }
    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v, 12) : std::string("null"); };
    out << "p: " << format_number(rep.query.p()) << "\n"
        << "beta: " << format_number(rep.query.beta()) << "\n"
        << "regime: " << to_string(rep.regime) << "\n"
        << "lower: " << opt(rep.lower) << " ("
        << (rep.lower_method ? to_string(*rep.lower_method) : std::string_view("none")) << ", "
        << witness_text(rep.lower_witness) << ")\n"
        << "upper: " << opt(rep.upper) << " ("
        << (rep.upper_method ? to_string(*rep.upper_method) : std::string_view("none")) << ", "
        << witness_text(rep.upper_witness) << ")\n";
    if (rep.series_check) {
        out << "series B^(1/p): " << format_number(rep.series_check->root, 12)
            << " (lower " << (rep.series_check->lower_ok ? "ok" : "VIOLATED") << ", upper "
            << (rep.series_check->upper_ok ? "ok" : "VIOLATED") << ")\n";
    } else {
        out << "series B^(1/p): unavailable (p > p_max)\n";
    }
    out << "K- constant: " << (rep.k_minus_printed_constant ? "printed (0.6538)" : "formula") << "\n";
    out << "candidates:\n";
    for (const auto& c : rep.candidates) {
        out << "  " << (c.upper() ? "upper " : "lower ") << c.name() << ": ";
        if (c.value) {
            out << format_number(*c.value, 12) << " [" << witness_text(c.witness) << "]";
            if (!c.rigorous) out << " unproven";
            if (!c.converged) out << " not-converged";
            if (c.violated) out << (*c.violated ? " VIOLATED" : " holds");
        } else {
            out << "error: " << c.error;
        }
        out << "\n";
    }
    return kSuccess;
}

// --- scan ------------------------------------------------------------------------

std::vector<double> expand_grid(const GridFlags& g, std::string_view name) {
    if (!g.values.empty()) return g.values;
    if (g.count < 1) throw DomainError(std::string(name) + "-count must be >= 1");
    if (!(g.start <= g.stop)) throw DomainError(std::string(name) + "-start must be <= " + std::string(name) + "-stop");
    if (g.log && !(g.start > 0.0)) throw DomainError(std::string(name) + " log spacing requires start > 0");
    return g.log ? log_grid(g.start, g.stop, g.count) : linear_grid(g.start, g.stop, g.count);
}

struct ScanRow {
    double p = 0.0;
    double beta = 0.0;
    std::optional<std::string> regime;
    std::optional<double> series_b_1p;
    std::optional<double> lower;
    std::optional<std::string> lower_method;
    std::optional<double> upper;
    std::optional<std::string> upper_method;
    std::optional<double> ratio_upper_over_series;
    std::optional<double> ratio_series_over_lower;
    std::optional<double> debruijn_total;
    std::string error;
};

const std::vector<std::string> kScanColumns{
    "p", "beta", "regime", "series_b_1p", "lower", "lower_method", "upper", "upper_method",
    "ratio_upper_over_series", "ratio_series_over_lower", "debruijn_total", "error"};

ScanRow scan_row(double p, double beta, double tol, const SeriesOptions& series) {
    ScanRow row;
    row.p = p;
    row.beta = beta;
    auto note = [&row](const std::exception& ex) {
        if (!row.error.empty()) row.error += "; ";
        row.error += ex.what();
    };
    try {
        const BellQuery q(p, beta);
        row.regime = std::string(to_string(q.regime()));
        if (p > 0.0 && p <= series.p_max) {
            try {
                row.series_b_1p = bell_dobinski(q, tol, series).root(p);
            } catch (const std::exception& ex) {
                note(ex);
            }
        }
        try {
            ReportOptions options;
            options.series = series;
            options.series_tol = tol;
            const auto rep = bound_report(q, options);
            row.lower = rep.lower;
            row.upper = rep.upper;
            if (rep.lower_method) row.lower_method = std::string(to_string(*rep.lower_method));
            if (rep.upper_method) row.upper_method = std::string(to_string(*rep.upper_method));
            if (row.series_b_1p && row.upper) row.ratio_upper_over_series = *row.upper / *row.series_b_1p;
            if (row.series_b_1p && row.lower) row.ratio_series_over_lower = *row.series_b_1p / *row.lower;
        } catch (const std::exception& ex) {
            note(ex);
        }
        if (beta == 1.0 && p > std::numbers::e) row.debruijn_total = debruijn_expansion(p).total;
    } catch (const std::exception& ex) {
        note(ex);
    }
    return row;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

int cmd_scan(const Flags& f, const SeriesOptions& series, std::ostream& out) {
    if (!(f.tol > 0.0 && f.tol <= 1e-3)) throw DomainError("tol must lie in (0, 1e-3]");
    const auto ps = expand_grid(f.p_grid, "p");
    const auto betas = expand_grid(f.beta_grid, "beta");
    std::vector<ScanRow> rows(ps.size() * betas.size());
    parallel_for(rows.size(), [&](std::size_t i) {
        rows[i] = scan_row(ps[i / betas.size()], betas[i % betas.size()], f.tol, series);
    });

    const bool json_out = f.format == "json";
    if (json_out) {
        json arr = json::array();
        for (const auto& r : rows) {
            auto str = [](const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); };
            arr.push_back({{"p", r.p},
                           {"beta", r.beta},
                           {"regime", str(r.regime)},
                           {"series_b_1p", optional_number(r.series_b_1p)},
                           {"lower", optional_number(r.lower)},
                           {"lower_method", str(r.lower_method)},
                           {"upper", optional_number(r.upper)},
                           {"upper_method", str(r.upper_method)},
                           {"ratio_upper_over_series", optional_number(r.ratio_upper_over_series)},
                           {"ratio_series_over_lower", optional_number(r.ratio_series_over_lower)},
                           {"debruijn_total", optional_number(r.debruijn_total)},
                           {"error", r.error.empty() ? json(nullptr) : json(r.error)}});
        }
        out << json{{"columns", kScanColumns}, {"rows", arr}}.dump(2) << "\n";
    } else {
        for (std::size_t i = 0; i < kScanColumns.size(); ++i) out << (i ? "," : "") << kScanColumns[i];
        out << "\n";
        auto num = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
        for (const auto& r : rows) {
            out << format_number(r.p) << ',' << format_number(r.beta) << ',' << r.regime.value_or("") << ','
                << num(r.series_b_1p) << ',' << num(r.lower) << ',' << r.lower_method.value_or("") << ','
                << num(r.upper) << ',' << r.upper_method.value_or("") << ',' << num(r.ratio_upper_over_series)
                << ',' << num(r.ratio_series_over_lower) << ',' << num(r.debruijn_total) << ','
                << csv_field(r.error) << "\n";
        }
    }
    const bool any_ok = std::any_of(rows.begin(), rows.end(), [](const ScanRow& r) { return r.error.empty(); });
    return any_ok ? kSuccess : kDomainError;
}

// --- extremal --------------------------------------------------------------------

int cmd_extremal(const Flags& f, std::ostream& out) {
    const ExtremalProblem prob(f.a, f.b, f.p);
    const double log_value = log_schechtman_extremal(prob);
    const double value = std::exp(log_value);
    std::optional<double> analytic;
    bool ok = true;
    if (prob.p() == 2.0) {
        analytic = prob.a() * prob.a() + prob.b();
        ok = std::abs(value - *analytic) <= 1e-10 * *analytic;
    }
    if (f.format == "json") {
        json j{{"a", prob.a()},
               {"b", prob.b()},
               {"p", prob.p()},
               {"mu", prob.mu()},
               {"value", std::isfinite(value) ? json(value) : json(nullptr)},
               {"log_value", log_value},
               {"p2_check", analytic ? json{{"a2_plus_b", *analytic}, {"ok", ok}} : json(nullptr)}};
        out << j.dump(2) << "\n";
    } else {
        out << "mu: " << format_number(prob.mu(), 12) << "\n"
            << "value: " << format_from_log(log_value, 12) << "\n";
        if (analytic) out << "check: a^2+b: " << format_number(*analytic, 12) << ", " << (ok ? "ok" : "MISMATCH") << "\n";
    }
    return ok ? kSuccess : kVerificationFailure;
}

// --- verify ----------------------------------------------------------------------

SuiteResult instance_suite(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open instance file '" + path + "'");
    const auto family = read_instance(in);
    if (family.empty()) throw DomainError("instance file '" + path + "' holds no distributions");
    SuiteResult s;
    s.suite = "instance";
    double a = 0.0;
    for (const auto& d : family) a += d.mean();
    for (double p : {2.0, 3.0, 4.0}) {
        double b = 0.0;
        for (const auto& d : family) b += d.moment(p);
        const double exact = exact_sum_moment(family, p).value;
        const double rosenthal = rosenthal_bound(p, b, a);
        const double extremal = schechtman_extremal(ExtremalProblem(a, b, p));
        const std::string tag = "p=" + format_number(p, 6);
        s.checks.push_back({"rosenthal[" + tag + "]", exact <= rosenthal * (1.0 + 1e-9),
                            "exact " + format_number(exact, 10) + " <= bound " + format_number(rosenthal, 10)});
        s.checks.push_back({"extremal[" + tag + "]", exact <= extremal * (1.0 + 1e-9),
                            "exact " + format_number(exact, 10) + " <= bound " + format_number(extremal, 10)});
    }
    return s;
}

int cmd_verify(const Flags& f, const SeriesOptions& series, std::ostream& out) {
    VerifyOptions options;
    options.seed = f.seed;
    options.trials = f.trials;
    options.series = series;
    std::vector<SuiteResult> results;
    const bool all = f.suite == "all";
    if (all || f.suite == "oracles") results.push_back(run_oracle_suite(options));
    if (all || f.suite == "sandwich") results.push_back(run_sandwich_suite(options));
    if (all || f.suite == "inequalities") results.push_back(run_inequality_suite(options));
    if (all || f.suite == "asymptotics") results.push_back(run_asymptotics_suite(options));
    if (!f.instances_path.empty()) results.push_back(instance_suite(f.instances_path));

    bool pass = true;
    for (const auto& r : results) {
        out << format_suite(r);
        pass = pass && r.passed();
    }
    out << "verify: " << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? kSuccess : kVerificationFailure;
}

void add_grid_flags(CLI::App* cmd, GridFlags& g, const std::string& name) {
    cmd->add_option("--" + name + "-start", g.start, name + " grid start");
    cmd->add_option("--" + name + "-stop", g.stop, name + " grid stop");
    cmd->add_option("--" + name + "-count", g.count, name + " grid point count");
    cmd->add_flag("--" + name + "-log,!--" + name + "-linear", g.log, "log spacing for the " + name + " grid");
    cmd->add_option("--" + name + "-values", g.values, "explicit " + name + " values (overrides the grid)")
        ->delimiter(',');
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Flags f;
    CLI::App app{"Bell function evaluation, bounds and moment-inequality checks", "bellbound"};
    app.require_subcommand(1);
    app.add_option("--out", f.out_path, "write output to FILE instead of stdout");

    auto* eval = app.add_subcommand("eval", "evaluate B(p, beta) by the Dobinski series");
    eval->add_option("--p", f.p, "moment order p >= 0")->required();
    eval->add_option("--beta", f.beta, "Poisson intensity beta > 0");
    eval->add_option("--tol", f.tol, "relative tolerance in (0, 1e-3]");
    eval->add_option("--format", f.format, "text or json")->check(CLI::IsMember({"text", "json"}));

    auto* bounds = app.add_subcommand("bounds", "lower and upper estimates of B^(1/p)(p, beta)");
    bounds->add_option("--p", f.p, "moment order p >= 1")->required();
    bounds->add_option("--beta", f.beta, "Poisson intensity beta > 0");
    bounds->add_option("--format", f.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    bounds->add_flag("--printed-k-minus", f.printed_k_minus, "use the printed K- = 0.6538 instead of the formula value");

    auto* scan = app.add_subcommand("scan", "tabulate bounds over a (p, beta) grid");
    add_grid_flags(scan, f.p_grid, "p");
    add_grid_flags(scan, f.beta_grid, "beta");
    scan->add_option("--tol", f.tol, "series tolerance");
    scan->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto* extremal = app.add_subcommand("extremal", "extremal moment of sums with given mean and p-th moment sums");
    extremal->add_option("--a", f.a, "sum of means a > 0")->required();
    extremal->add_option("--b", f.b, "sum of p-th moments b > 0")->required();
    extremal->add_option("--p", f.p, "moment order p > 1")->required();
    extremal->add_option("--format", f.format, "text or json")->check(CLI::IsMember({"text", "json"}));

    auto* verify = app.add_subcommand("verify", "run the self-verification suites");
    verify->add_option("--suite", f.suite, "oracles, sandwich, inequalities, asymptotics or all")
        ->check(CLI::IsMember({"oracles", "sandwich", "inequalities", "asymptotics", "all"}));
    verify->add_option("--seed", f.seed, "random seed");
    verify->add_option("--trials", f.trials, "random instances for the inequality suite");
    verify->add_option("--instances", f.instances_path, "instance file, one v1:p1,v2:p2,... distribution per line");

    for (auto* cmd : {eval, bounds, scan, extremal, verify}) {
        cmd->add_option("--out", f.out_path, "write output to FILE instead of stdout");
    }

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kDomainError;
    }

    std::ofstream file;
    if (!f.out_path.empty()) {
        file.open(f.out_path, std::ios::binary);
        if (!file) {
            err << "error: cannot open output file '" << f.out_path << "'\n";
            return kDomainError;
        }
    }
    std::ostream& sink = f.out_path.empty() ? out : file;

    try {
        SeriesOptions series;
        series.p_max = p_max_from_env();
        if (*eval) return cmd_eval(f, series, sink);
        if (*bounds) return cmd_bounds(f, series, sink);
        if (*scan) return cmd_scan(f, series, sink);
        if (*extremal) return cmd_extremal(f, sink);
        if (*verify) return cmd_verify(f, series, sink);
    } catch (const DomainError& ex) {
        err << "domain error: " << ex.what() << "\n";
        return kDomainError;
    } catch (const NumericalBudgetError& ex) {
        err << "numerical budget error: " << ex.what() << "\n";
        return kBudgetError;
    }
    return kDomainError;
}

}  // namespace bellbound::cli
