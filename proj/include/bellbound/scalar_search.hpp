#pragma once

// Derivative-free minimization of a unimodal scalar function: a geometric
// bracket grown from a seed, then golden-section refinement.

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace bellbound {

struct SearchResult {
    double x = 0.0;
    double f = 0.0;
    std::size_t evaluations = 0;
    /// Interval shrank below x_tol within the iteration budget.
    bool converged = false;
    /// The minimum sits on a limit of the admissible domain.
    bool at_boundary = false;
};

/// Golden-section search for the minimum of `f` on [lo, hi]. Stops once the
/// bracket width is below x_tol * max(1, |x|). The endpoints are compared
/// against the interior estimate so monotone objectives land on the limit.
template <class F>
SearchResult golden_section_minimize(F&& f, double lo, double hi, double x_tol,
                                     std::size_t max_iterations = 400) {
    constexpr double inv_phi = 0.6180339887498948482;
    SearchResult out;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    out.evaluations = 2;

    for (std::size_t it = 0; it < max_iterations; ++it) {
        const double mid = 0.5 * (a + b);
        if (b - a <= x_tol * std::max(1.0, std::abs(mid))) {
            out.converged = true;
            break;
        }
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        ++out.evaluations;
    }

    if (fc < fd) {
        out.x = c;
        out.f = fc;
    } else {
        out.x = d;
        out.f = fd;
    }
    for (double edge : {lo, hi}) {
        const double fe = f(edge);
        ++out.evaluations;
        if (fe <= out.f) {
            out.x = edge;
            out.f = fe;
        }
    }
    return out;
}

/// Minimizes a unimodal `f` over [lo_limit, hi_limit] (0 < lo_limit < hi_limit)
/// starting from `seed`: the bracket [seed / g, seed * g] is widened by the
/// factor `growth` until the middle point is lower than both ends or a limit
/// is reached, then refined by golden section. at_boundary is set when the
/// minimizer is a domain limit.
template <class F>
SearchResult minimize_from_seed(F&& f, double seed, double lo_limit, double hi_limit, double x_tol,
                                double growth = 2.0, std::size_t max_iterations = 400) {
    const double mid0 = std::clamp(seed, lo_limit, hi_limit);
    double a = std::max(lo_limit, mid0 / growth);
    double b = mid0;
    double c = std::min(hi_limit, mid0 * growth);
    double fa = f(a);
    double fb = f(b);
    double fc = f(c);
    std::size_t evals = 3;

    while (fa < fb && a > lo_limit) {
        c = b;
        fc = fb;
        b = a;
        fb = fa;
        a = std::max(lo_limit, a / growth);
        fa = f(a);
        ++evals;
    }
    while (fc < fb && c < hi_limit) {
        a = b;
        fa = fb;
        b = c;
        fb = fc;
        c = std::min(hi_limit, c * growth);
        fc = f(c);
        ++evals;
    }

    SearchResult out = golden_section_minimize(f, a, c, x_tol, max_iterations);
    out.evaluations += evals;
    out.at_boundary = out.x <= lo_limit || out.x >= hi_limit;
    return out;
}

}  // namespace bellbound
