#include "bellbound/asymptotics.hpp"
#include "bellbound/bounds.hpp"
#include "bellbound/counter_rng.hpp"
#include "bellbound/errors.hpp"
#include "bellbound/series.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace bellbound;

namespace {

double series_root(const BellQuery& q) { return bell_dobinski(q).root(q.p()); }

}  // namespace

TEST_CASE("regime constants") {
    const auto& c = regime_constants();
    CHECK(c.k_plus == doctest::Approx(8.9757639404525377).epsilon(1e-14));
    CHECK(c.k_minus_formula == doctest::Approx(0.46322382403840288).epsilon(1e-14));
    CHECK(c.k_minus_printed == 0.6538);
    CHECK(c.c3_fitted == doctest::Approx(8.20256).epsilon(1e-5));
    CHECK(c.c3_argmax_p == doctest::Approx(kRoughMinP));
}

TEST_CASE("optimized MGF bound at p = 10, beta = 1") {
    const auto g = upper_g_optimized(BellQuery(10, 1));
    CHECK(g.converged);
    CHECK(g.bound == doctest::Approx(3.381842094).epsilon(1e-8));
    CHECK(g.argument == doctest::Approx(1.7455280027406994).epsilon(1e-6));
    CHECK(g.stationarity_residual < 1e-5);
}

TEST_CASE("optimizer lands on the Lambert-W stationary point") {
    // stationary point: lambda e^lambda = p / beta, where
    // g = (p / (e lambda)) exp(1/lambda - beta/p)
    CounterRng rng(11, 0);
    for (int i = 0; i < 40; ++i) {
        const double p = rng.uniform(1.0, 300.0);
        const double beta = std::exp(rng.uniform(std::log(0.1), std::log(50.0)));
        CAPTURE(p);
        CAPTURE(beta);
        const BellQuery q(p, beta);
        const double w = lambert_w(p / beta);
        const double closed = p / (std::numbers::e * w) * std::exp(1.0 / w - beta / p);
        const auto g = upper_g_optimized(q);
        CHECK(g.bound == doctest::Approx(closed).epsilon(1e-9));
        CHECK(g.argument == doctest::Approx(w).epsilon(1e-4));
    }
}

TEST_CASE("closed forms at p = 10, beta = 1") {
    const BellQuery q(10, 1);
    CHECK(lambda0(q) == doctest::Approx(std::log(10.0) - std::log(std::log(10.0))));
    CHECK(upper_closed_form_largep(q) == doctest::Approx(3.499437539).epsilon(1e-9));
    CHECK(upper_closed_form_largep(q) == doctest::Approx(mgf_bound_at_lambda(q, lambda0(q))).epsilon(1e-12));
    CHECK(lower_closed_form_largep(q) == doctest::Approx(2.633961477).epsilon(1e-9));
    CHECK(k0_selector(q) == 4);
    CHECK(k0_selector(BellQuery(100, 1)) == 18);
}

TEST_CASE("largest single term") {
    const auto t = lower_h0_search(BellQuery(10, 1));
    CHECK(t.k_star == 6);
    CHECK(t.bound() == doctest::Approx(std::pow(6.0, 10) / 720.0 / std::numbers::e).epsilon(1e-12));
    // agrees with a direct scan
    for (double p : {3.0, 17.5, 120.0}) {
        for (double beta : {0.3, 4.0, 40.0}) {
            const BellQuery q(p, beta);
            double best = -INFINITY;
            for (std::size_t k = 1; k < 2000; ++k) best = std::max(best, log_term(q, k).log_term);
            CHECK(lower_h0_search(q).log_bound == doctest::Approx(best).epsilon(1e-13));
        }
    }
}

TEST_CASE("continuous lower bound maximizes its objective") {
    const BellQuery q(10, 1);
    const auto h = lower_h_continuous(q);
    CHECK(h.bound == doctest::Approx(2.825131369).epsilon(1e-8));
    CHECK(h.argument == doctest::Approx(5.5513).epsilon(1e-3));
    double best = -INFINITY;
    for (double x = 1.0; x < 60.0; x += 1e-3) {
        best = std::max(best, (-1.0 + 10.0 * std::log(x) - log_stirling_zeta(x)) / 10.0);
    }
    CHECK(std::log(h.bound) >= best - 1e-12);
    CHECK(std::log(h.bound) <= best + 1e-8);
}

TEST_CASE("sandwich on random points") {
    CounterRng rng(5, 1);
    for (int i = 0; i < 120; ++i) {
        const double p = std::exp(rng.uniform(0.0, std::log(300.0)));
        const double beta = std::exp(rng.uniform(std::log(0.05), std::log(80.0)));
        CAPTURE(p);
        CAPTURE(beta);
        const BellQuery q(p, beta);
        const double s = series_root(q);
        const double slack = 1e-9;
        CHECK(upper_g_optimized(q).bound >= s * (1 - slack));
        CHECK(lower_h0_search(q).root(p) <= s * (1 + slack));
        CHECK(lower_h_continuous(q).bound <= s * (1 + slack));
        if (q.regime() == Regime::LargeP) {
            CHECK(upper_closed_form_largep(q) >= s * (1 - slack));
            CHECK(lower_closed_form_largep(q) <= s * (1 + slack));
            CHECK(upper_g_optimized(q).bound <= upper_closed_form_largep(q) * (1 + slack));
        } else if (p >= 1.0) {
            CHECK(regime_upper_largebeta(q) >= s * (1 - slack));
        }
    }
}

TEST_CASE("regime preconditions") {
    CHECK_THROWS_AS(upper_closed_form_largep(BellQuery(2, 10)), RegimeError);
    CHECK_THROWS_AS(lower_closed_form_largep(BellQuery(2, 10)), RegimeError);
    CHECK_THROWS_AS(regime_upper_largebeta(BellQuery(30, 1)), RegimeError);
    CHECK_THROWS_AS(rough_upper_triangle(BellQuery(2, 1), 8.3), DomainError);
    CHECK_THROWS_AS(rough_upper_triangle(BellQuery(5, 0.5), 8.3), DomainError);
    CHECK_THROWS_AS(bound_report(BellQuery(0.5, 1)), DomainError);
}

TEST_CASE("K- candidate is flagged, not trusted") {
    const auto formula = regime_lower_largebeta(BellQuery(2, 10));
    CHECK(formula.value == doctest::Approx(4.6322382403840288));
    REQUIRE(formula.violated.has_value());
    CHECK_FALSE(*formula.violated);
    const auto printed = regime_lower_largebeta(BellQuery(2, 10), true);
    CHECK(printed.value == doctest::Approx(6.538));
    CHECK(printed.printed_constant);
}

TEST_CASE("rough triangle bound") {
    const double c3 = regime_constants().c3_fitted;
    for (double p : {3.0, 10.0, 50.0, 200.0}) {
        const BellQuery q(p, 1);
        CHECK(rough_upper_triangle(q, c3) >= series_root(q) * (1 - 1e-9));
    }
    // ceil(beta) scaling
    CHECK(rough_upper_triangle(BellQuery(10, 2.5), c3) == doctest::Approx(3 * rough_upper_triangle(BellQuery(10, 1), c3)));
}

TEST_CASE("bound report selection") {
    const auto rep = bound_report(BellQuery(2, 10));
    CHECK(rep.regime == Regime::LargeBeta);
    bool saw_k_plus = false;
    for (const auto& c : rep.candidates) {
        if (c.name() == "KPlusLargeBeta") {
            saw_k_plus = true;
            CHECK(*c.value == doctest::Approx(89.757639404525377));
        }
        if (c.name() == "KMinusLargeBeta") CHECK_FALSE(c.rigorous);
    }
    CHECK(saw_k_plus);
    REQUIRE(rep.upper);
    REQUIRE(rep.lower);
    CHECK(*rep.upper_method == UpperMethod::GOptimized);
    CHECK(*rep.lower_method != LowerMethod::KMinusLargeBeta);
    REQUIRE(rep.series_check);
    CHECK(rep.series_check->lower_ok);
    CHECK(rep.series_check->upper_ok);

    const auto tie = bound_report(BellQuery(2, 1));
    CHECK(tie.regime == Regime::LargeP);

    ReportOptions no_series;
    no_series.series.p_max = 50;
    const auto big = bound_report(BellQuery(100, 1), no_series);
    CHECK_FALSE(big.series_check);
    REQUIRE(big.upper);
    CHECK(*big.upper == doctest::Approx(14.45436045795).epsilon(1e-9));
}
