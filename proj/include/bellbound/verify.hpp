#pragma once

// Self-verification suites behind `bellbound verify`. Each suite returns one
// line per check; output contains no timings so identical runs are
// byte-identical.

#include "bellbound/series.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bellbound {

struct CheckLine {
    std::string name;
    bool pass = true;
    std::string detail;
};

struct SuiteResult {
    std::string suite;
    std::vector<CheckLine> checks;
    /// Diagnostics that are reported but never fail the suite.
    std::vector<std::string> notes;

    bool passed() const noexcept;
};

struct VerifyOptions {
    std::uint64_t seed = 7;
    std::size_t trials = 1000;
    SeriesOptions series;
};

/// Dobinski vs Touchard, classical Bell numbers, Stirling majorant, series
/// unimodality and tail-certificate honesty.
SuiteResult run_oracle_suite(const VerifyOptions& options);

/// Bilateral sandwich on the 40 x 12 (p, beta) grid, closed-form and
/// infimum domination, constant reproduction; K_- candidates are flagged
/// in the notes, never failed.
SuiteResult run_sandwich_suite(const VerifyOptions& options);

/// Random-instance checks of both moment inequalities, the p = 2 extremal
/// identity, and enumeration vs Monte Carlo agreement.
SuiteResult run_inequality_suite(const VerifyOptions& options);

/// Expansion residual decay, Lambert-W residuals and approximation ratios.
SuiteResult run_asymptotics_suite(const VerifyOptions& options);

std::vector<double> log_grid(double lo, double hi, std::size_t count);
std::vector<double> linear_grid(double lo, double hi, std::size_t count);

/// Formats a suite as text: one `[PASS]`/`[FAIL]` line per check, then notes,
/// then a summary line.
std::string format_suite(const SuiteResult& result);

}  // namespace bellbound
