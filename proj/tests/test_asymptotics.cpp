#include "bellbound/asymptotics.hpp"
#include "bellbound/errors.hpp"
#include "bellbound/series.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace bellbound;

TEST_CASE("de Bruijn expansion values") {
    const double ee = std::exp(std::numbers::e);
    const auto v = debruijn_expansion(ee);
    CHECK(v.total == doctest::Approx(1.5217083524202362).epsilon(1e-13));
    CHECK(v.partial_terms[0] == doctest::Approx(std::numbers::e));
    CHECK(v.partial_terms[1] == doctest::Approx(-1.0));
    CHECK(debruijn_expansion(100).total == doctest::Approx(2.6817474980418801).epsilon(1e-13));
    CHECK_THROWS_AS(debruijn_expansion(std::numbers::e), DomainError);
    CHECK_THROWS_AS(debruijn_expansion(2.0), DomainError);
}

TEST_CASE("expansion remainder shrinks") {
    double prev = INFINITY;
    for (double p : {25.0, 50.0, 100.0, 200.0, 300.0}) {
        const double lb = bell_dobinski(BellQuery(p, 1)).log_value / p;
        const double r = std::abs(lb - debruijn_expansion(p).total);
        CHECK(r < prev);
        prev = r;
    }
}

TEST_CASE("lambert W") {
    CHECK(lambert_w(0) == 0.0);
    CHECK(lambert_w(std::numbers::e) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(lambert_w(1) == doctest::Approx(0.56714329040978387).epsilon(1e-15));
    CHECK(lambert_w(2) == doctest::Approx(0.85260550201372549).epsilon(1e-15));
    CHECK(lambert_w(10) == doctest::Approx(1.7455280027406994).epsilon(1e-15));
    CHECK_THROWS_AS(lambert_w(-0.1), DomainError);
    for (double x : {1e-300, 1e-8, 0.3, 7.0, 1e3, 1e6, 1e12, 1e200}) {
        const double w = lambert_w(x);
        CHECK(std::abs(w * std::exp(w) - x) <= 1e-12 * std::max(1.0, x));
    }
}

TEST_CASE("Lambert-form approximations") {
    const auto lit = bell_lambert_approx(10);
    REQUIRE(lit.ratio_to_series());
    CHECK(*lit.ratio_to_series() == doctest::Approx(8.02621e-08).epsilon(1e-5));
    const auto cor = bell_lambert_approx_corrected(10);
    CHECK(*cor.ratio_to_series() == doctest::Approx(1.27704).epsilon(1e-5));
    const double w2 = 0.85260550201372549;
    const double direct = (1 / std::sqrt(2.0)) * (2 / w2) * std::exp(2 / w2 - 3);
    CHECK(bell_lambert_approx(2).value() == doctest::Approx(direct).epsilon(1e-13));
    CHECK_THROWS_AS(bell_lambert_approx(1.5), DomainError);

    SeriesOptions small;
    small.p_max = 50;
    CHECK_FALSE(bell_lambert_approx(80, small).ratio_to_series());
}
