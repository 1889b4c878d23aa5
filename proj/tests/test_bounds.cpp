#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cuspforge/bounds.hpp"

using namespace cuspforge;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("knot cusp bounds at the published anchors") {
    // c = 145 gives H_lo >= n (0.81544)^2
    for (int n : {2, 10, 85}) {
        auto rep = bounds::knot_cusp_bounds(n, 145);
        REQUIRE(rep.applicable);
        CHECK(rep.H_lo >= n * 0.81544 * 0.81544 - 1e-9);
        CHECK(rep.H_lo <= rep.H_hi);
        CHECK(rep.H_lo > 0.0);
    }
    // frozen from the independent quadrature: 2 (1 - f(116))^2
    auto rep = bounds::knot_cusp_bounds(2, 116);
    REQUIRE(rep.applicable);
    CHECK_THAT(rep.H_lo, WithinAbs(0.0730066062398149, 1e-10));
    // inapplicable below the hypothesis, as a report state
    auto thin = bounds::knot_cusp_bounds(5, 100);
    CHECK_FALSE(thin.applicable);
    CHECK_FALSE(thin.notes.empty());
    CHECK_THROWS_AS(bounds::knot_cusp_bounds(1, 145), hypothesis_error);
}

TEST_CASE("knot cusp bounds: H_lo increasing in c; limits as c grows") {
    int n = 6;
    double prev = 0.0;
    for (int c = 116; c <= 1116; c += 50) {
        auto rep = bounds::knot_cusp_bounds(n, c);
        CHECK(rep.H_lo > prev);
        prev = rep.H_lo;
    }
    auto far = bounds::knot_cusp_bounds(n, 100000000);
    CHECK_THAT(far.H_lo / n, WithinAbs(1.0, 1e-3));
    CHECK_THAT(far.H_hi / n, WithinAbs(n - 1.0, 2e-2));
}

TEST_CASE("two-bridge bounds reproduce the 0.18456 interval") {
    auto rep = bounds::two_bridge_bounds(3, 24);
    REQUIRE(rep.applicable);
    double fb = hk::fbar(1.0);
    CHECK_THAT(rep.H_lo, WithinAbs(std::pow(2.0 - std::sqrt(3.0) * fb, 2), 1e-12));
    CHECK_THAT(rep.H_hi, WithinAbs(std::pow(2.0 + std::sqrt(3.0) * fb, 2), 1e-12));
    CHECK_THAT(rep.H_lo, WithinAbs(2.82352875132283, 1e-9));
    CHECK_THAT(rep.H_hi, WithinAbs(5.38084151682016, 1e-9));

    auto rep2 = bounds::two_bridge_bounds(2, 24);
    CHECK_THAT(rep2.H_lo, WithinAbs(std::pow(std::sqrt(2.0) * (1.0 - fb), 2), 1e-12));
    CHECK_THROWS_AS(bounds::two_bridge_bounds(2, 23), hypothesis_error);
    CHECK_THROWS_AS(bounds::two_bridge_bounds(1, 24), hypothesis_error);
}

TEST_CASE("height envelope properties") {
    auto env = bounds::height_envelope(2.0, 4, 1.0);
    CHECK(env.lo <= 2.0);
    CHECK(env.hi >= 2.0);
    CHECK(env.delta >= 0.0);
    // delta scales exactly as sqrt(n)
    auto env4 = bounds::height_envelope(2.0, 16, 1.0);
    CHECK_THAT(env4.delta / env.delta, WithinRel(2.0, 1e-12));
    // large R1 collapses the interval
    auto far = bounds::height_envelope(2.0, 4, 6.0);
    CHECK(far.delta < 1e-4);
    // lower end at h0 = sqrt(n) equals sqrt(n) (1 - fbar(R1))
    for (double R1 : {0.8, 1.0, 1.5}) {
        int n = 7;
        auto e = bounds::height_envelope(std::sqrt(static_cast<double>(n)), n, R1);
        CHECK_THAT(e.lo, WithinRel(std::sqrt(static_cast<double>(n)) * (1.0 - hk::fbar(R1)), 1e-12));
    }
}

TEST_CASE("squared envelope at the 2-bridge inputs equals two_bridge_bounds") {
    for (int n : {2, 3, 5, 9}) {
        auto env = bounds::height_envelope(std::sqrt(2.0 * (n - 1.0)), n, 1.0);
        auto rep = bounds::two_bridge_bounds(n, 24);
        CHECK_THAT(env.lo * env.lo, WithinAbs(rep.H_lo, 1e-12));
        CHECK_THAT(env.hi * env.hi, WithinAbs(rep.H_hi, 1e-12));
    }
}

TEST_CASE("rate bound values and homogeneity") {
    CHECK_THAT(bounds::rate_bound(1.0, 1, 1.0, 1.0), WithinAbs(0.00404223197497988, 1e-12));
    // doubling the area divides the bound by sqrt 2
    double b1 = bounds::rate_bound(3.0, 5, 1.2, 1.0);
    double b2 = bounds::rate_bound(3.0, 5, 1.2, 2.0);
    CHECK_THAT(b1 / b2, WithinRel(std::sqrt(2.0), 1e-12));
    // C -> 0 limit
    CHECK(bounds::rate_bound(1.0, 1, 8.0, 1.0) < 1e-5);
    CHECK_THROWS_AS(bounds::rate_bound(-1.0, 1, 1.0, 1.0), hypothesis_error);
}

TEST_CASE("teich_speed and cusp boundary term") {
    CHECK(bounds::teich_speed(0.0, 0.0) == 0.0);
    CHECK_THAT(bounds::teich_speed(3.0, 4.0), WithinAbs(5.0, 1e-15));
    CHECK_THAT(bounds::cusp_boundary_term(1.0, 1.0, 2.0), WithinAbs(8.0, 1e-15));
    CHECK_THROWS_AS(bounds::cusp_boundary_term(1.0, 1.0, 0.0), hypothesis_error);
}

TEST_CASE("meridian lower bound") {
    CHECK_THAT(bounds::meridian_lower(std::log(2.0 / std::sqrt(3.0))), WithinAbs(0.25, 1e-14));
    CHECK_THAT(bounds::meridian_lower(1.0), WithinAbs(0.864664716763387, 1e-13));
    CHECK_THROWS_AS(bounds::meridian_lower(0.1), hypothesis_error);
}

TEST_CASE("quadrilateral width and its identity with the meridian bound") {
    CHECK_THAT(bounds::quad_width(1.0, 2.0), WithinAbs(0.864664716763387, 1e-13));
    for (double R = 0.15; R <= 3.0; R += 0.015) {
        CHECK_THAT(bounds::quad_width(R, 2.0 * R), WithinAbs(1.0 - std::exp(-2.0 * R), 1e-14));
    }
    // increasing in L for fixed H
    double prev = 0.0;
    for (double L = 0.1; L <= 5.0; L += 0.1) {
        double w = bounds::quad_width(1.3, L);
        CHECK(w > prev);
        prev = w;
    }
}

TEST_CASE("dehn filling check at the published anchors") {
    CHECK(bounds::dehn_filling_check(85, 145));
    CHECK_FALSE(bounds::dehn_filling_check(84, 145));
    CHECK(bounds::dehn_filling_check(85, 1000000000));
    CHECK_FALSE(bounds::dehn_filling_check(85, 100));  // below c threshold
}
