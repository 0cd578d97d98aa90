#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nomacell/numerics.hpp"
#include "nomacell/rng.hpp"

using namespace nomacell;
using Catch::Approx;

namespace {

// independent oracle: composite Simpson after u = t^a, which removes the
// t -> 0 endpoint singularity:
//   Int_0^x t^{a-1}(1-t)^{b-1} dt = (1/a) Int_0^{x^a} (1 - u^{1/a})^{b-1} du
double inc_beta_by_quadrature(double x, double a, double b) {
    const int n = 40000;
    const double log_norm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    auto f = [&](double u) {
        const double t = std::pow(u, 1.0 / a);
        if (t >= 1.0) return 0.0;
        return std::pow(1.0 - t, b - 1.0);
    };
    double s = 0.0;
    const double hi = std::pow(x, a);
    const double h = hi / n;
    for (int i = 0; i < n; ++i) {
        const double lo = i * h;
        s += h / 6.0 * (f(lo) + 4.0 * f(lo + 0.5 * h) + f(lo + h));
    }
    return std::exp(log_norm) * s / a;
}

}  // namespace

TEST_CASE("reg_inc_beta endpoints and closed forms") {
    CHECK(reg_inc_beta(0.0, 3.0, 2.0) == 0.0);
    CHECK(reg_inc_beta(1.0, 3.0, 2.0) == 1.0);
    CHECK(reg_inc_beta(0.5, 1.0, 1.0) == Approx(0.5).epsilon(1e-12));
    // I(x; 2, 2) = 3x^2 - 2x^3
    CHECK(reg_inc_beta(0.5, 2.0, 2.0) == Approx(3 * 0.25 - 2 * 0.125).epsilon(1e-12));
}

TEST_CASE("reg_inc_beta against quadrature oracle") {
    const double cases[][3] = {{0.2, 0.5, 5.0}, {0.7, 3.2, 1.4}, {0.35, 2.0, 8.5}, {0.9, 6.0, 0.7}};
    for (const auto& c : cases)
        CHECK(reg_inc_beta(c[0], c[1], c[2]) ==
              Approx(inc_beta_by_quadrature(c[0], c[1], c[2])).margin(1e-9));
}

TEST_CASE("reg_inc_beta symmetry property") {
    SplitMix64 rng(31337);
    for (int i = 0; i < 200; ++i) {
        const double x = rng.next_double();
        const double a = 0.1 + 10.0 * rng.next_double();
        const double b = 0.1 + 10.0 * rng.next_double();
        CHECK(reg_inc_beta(x, a, b) + reg_inc_beta(1.0 - x, b, a) == Approx(1.0).margin(1e-10));
    }
}

TEST_CASE("reg_inc_beta monotone in x") {
    double prev = 0.0;
    for (int i = 0; i <= 50; ++i) {
        const double v = reg_inc_beta(i / 50.0, 2.7, 0.9);
        CHECK(v >= prev - 1e-14);
        prev = v;
    }
}

TEST_CASE("reg_inc_beta domain errors") {
    CHECK_THROWS_AS(reg_inc_beta(-0.1, 1, 1), std::domain_error);
    CHECK_THROWS_AS(reg_inc_beta(1.1, 1, 1), std::domain_error);
    CHECK_THROWS_AS(reg_inc_beta(0.5, 0.0, 1), std::domain_error);
    CHECK_THROWS_AS(reg_inc_beta(0.5, 1, -2.0), std::domain_error);
}

TEST_CASE("log_gamma values and identity") {
    CHECK(log_gamma(1.0) == Approx(0.0).margin(1e-14));
    CHECK(log_gamma(5.0) == Approx(std::log(24.0)).epsilon(1e-12));
    CHECK(log_gamma(0.5) == Approx(0.5 * std::log(std::acos(-1.0))).epsilon(1e-12));
    for (int n = 2; n <= 15; ++n) {
        double fact = 1.0;
        for (int k = 2; k < n; ++k) fact *= k;
        CHECK(std::exp(log_gamma(n)) == Approx(fact).epsilon(1e-10));
    }
    CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
    CHECK_THROWS_AS(log_gamma(-3.0), std::domain_error);
}

TEST_CASE("quad_finite basics") {
    CHECK(quad_finite([](double) { return 1.0; }, 0, 1) == Approx(1.0).epsilon(1e-10));
    CHECK(quad_finite([](double x) { return x; }, 0, 2) == Approx(2.0).epsilon(1e-10));
    const double sqrt_pi = std::sqrt(std::acos(-1.0));
    CHECK(quad_finite([](double x) { return std::exp(-x * x); }, -5, 5) ==
          Approx(sqrt_pi).epsilon(1e-8));
    CHECK(quad_finite([](double x) { return std::sin(x); }, 0, std::acos(-1.0)) ==
          Approx(2.0).epsilon(1e-10));
}

TEST_CASE("quad_finite validates spec") {
    QuadSpec bad;
    bad.rel_tol = -1.0;
    CHECK_THROWS_AS(quad_finite([](double) { return 1.0; }, 0, 1, bad), std::invalid_argument);
    QuadSpec bad2;
    bad2.max_subdivisions = 0;
    CHECK_THROWS_AS(quad_finite([](double) { return 1.0; }, 0, 1, bad2), std::invalid_argument);
    CHECK_THROWS_AS(quad_finite([](double) { return 1.0; }, 1, 0), std::invalid_argument);
}

TEST_CASE("quad_finite reports non-convergence") {
    QuadSpec tight{1e-15, 1e-300, 3};
    CHECK_THROWS_AS(
        quad_finite([](double x) { return std::sin(50.0 / (x + 0.01)); }, 0, 1, tight),
        QuadratureError);
}

TEST_CASE("quad_semi_infinite basics") {
    CHECK(quad_semi_infinite([](double x) { return std::exp(-x); }, 0) ==
          Approx(1.0).epsilon(1e-8));
    CHECK(quad_semi_infinite([](double x) { return 1.0 / (1.0 + x * x); }, 0) ==
          Approx(0.5 * std::acos(-1.0)).epsilon(1e-8));
    CHECK(quad_semi_infinite([](double t) { return 1.0 / (t * t); }, 1) ==
          Approx(1.0).epsilon(1e-8));
}

TEST_CASE("quad_semi_infinite agrees with truncation plus analytic tail") {
    // exp(-x) over [0, inf) = [0, T] + e^{-T}
    for (double T : {2.0, 6.0, 12.0}) {
        const double whole = quad_semi_infinite([](double x) { return std::exp(-x); }, 0);
        const double split = quad_finite([](double x) { return std::exp(-x); }, 0, T) + std::exp(-T);
        CHECK(whole == Approx(split).epsilon(1e-6));
    }
}

TEST_CASE("find_root basics") {
    auto r1 = find_root([](double x) { return x - 0.5; }, 0, 1, 1e-10);
    REQUIRE(r1.has_value());
    CHECK(*r1 == Approx(0.5).margin(1e-9));
    auto r2 = find_root([](double x) { return x * x - 2.0; }, 0, 2, 1e-12);
    REQUIRE(r2.has_value());
    CHECK(*r2 == Approx(std::sqrt(2.0)).margin(1e-10));
    CHECK_FALSE(find_root([](double) { return 1.0; }, 0, 1, 1e-10).has_value());
}

TEST_CASE("find_root bracket property") {
    SplitMix64 rng(99);
    for (int i = 0; i < 50; ++i) {
        const double root = rng.next_double() * 10.0 - 5.0;
        const double scale = 0.1 + rng.next_double();
        auto f = [&](double x) { return scale * std::tanh(x - root); };
        auto r = find_root(f, -6.0, 6.0, 1e-9);
        REQUIRE(r.has_value());
        CHECK(std::fabs(f(*r)) <= std::max(std::fabs(f(*r - 1e-9)), std::fabs(f(*r + 1e-9))) + 1e-12);
        CHECK(*r == Approx(root).margin(1e-8));
    }
}

TEST_CASE("maximize_unimodal basics") {
    auto [x1, v1] = maximize_unimodal([](double x) { return -(x - 0.3) * (x - 0.3); }, 0, 1, 1e-9);
    CHECK(x1 == Approx(0.3).margin(1e-7));
    CHECK(v1 == Approx(0.0).margin(1e-12));
    auto [x2, v2] = maximize_unimodal([](double x) { return std::sin(x); }, 0, std::acos(-1.0), 1e-9);
    CHECK(x2 == Approx(0.5 * std::acos(-1.0)).margin(1e-7));
    CHECK(v2 == Approx(1.0).margin(1e-12));
    auto [x3, v3] = maximize_unimodal([](double x) { return x * (1.0 - x); }, 0, 1, 1e-9);
    CHECK(x3 == Approx(0.5).margin(1e-7));
    CHECK(v3 == Approx(0.25).margin(1e-12));
}
