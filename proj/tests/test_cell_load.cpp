#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

#include "nomacell/cell_load.hpp"

using namespace nomacell;
using Catch::Approx;

namespace {

SystemParams base_params() {
    SystemParams p;
    p.lambda = 1.0;
    p.tau = 0.7;
    return p;
}

const double pi = std::acos(-1.0);

// classical two-circle lens area for center distance d
double union_by_lens(double r1, double r2, double d) {
    const double a1 = std::acos((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1));
    const double a2 = std::acos((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2));
    const double lens = r1 * r1 * (a1 - 0.5 * std::sin(2.0 * a1)) +
                        r2 * r2 * (a2 - 0.5 * std::sin(2.0 * a2));
    return pi * (r1 * r1 + r2 * r2) - lens;
}

}  // namespace

TEST_CASE("union_area limits and lens cross-check") {
    CHECK(union_area(1.0, 1.0, 1e-9) == Approx(pi).epsilon(1e-6));       // coincident
    CHECK(union_area(1.0, 1.0, pi) == Approx(2.0 * pi).epsilon(1e-12));  // tangent at far point
    // u = pi/2 with unit radii puts the centers sqrt(2) apart
    CHECK(union_area(1.0, 1.0, pi / 2.0) ==
          Approx(union_by_lens(1.0, 1.0, std::sqrt(2.0))).epsilon(1e-12));
    CHECK(union_area(1.0, 0.6, 2.0) ==
          Approx(union_by_lens(1.0, 0.6, std::sqrt(1.0 + 0.36 - 1.2 * std::cos(2.0)))).epsilon(1e-12));
    CHECK_THROWS_AS(union_area(-1.0, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(union_area(1.0, 1.0, 4.0), std::domain_error);
}

TEST_CASE("union_area symmetry and bounds") {
    for (double r1 : {0.3, 1.0, 2.5})
        for (double r2 : {0.5, 1.7})
            for (double u : {0.1, 1.0, 2.0, 3.0}) {
                const double a = union_area(r1, r2, u);
                CHECK(a == Approx(union_area(r2, r1, u)).epsilon(1e-12));
                CHECK(a >= pi * std::max(r1 * r1, r2 * r2) - 1e-12);
                CHECK(a <= pi * (r1 * r1 + r2 * r2) + 1e-12);
            }
}

TEST_CASE("disk union branches") {
    // containment: small disk well inside the large one
    CHECK(detail::disk_union_area(2.0, 0.5, 0.3) == Approx(pi * 4.0).epsilon(1e-12));
    // disjoint
    CHECK(detail::disk_union_area(1.0, 1.0, 5.0) == Approx(2.0 * pi).epsilon(1e-12));
    // tangency edges are continuous
    CHECK(detail::disk_union_area(2.0, 0.5, 1.5 + 1e-12) == Approx(pi * 4.0).epsilon(1e-6));
    CHECK(detail::disk_union_area(1.0, 1.0, 2.0 - 1e-12) == Approx(2.0 * pi).epsilon(1e-6));
}

TEST_CASE("mean areas") {
    auto p = base_params();
    auto [mc, me] = mean_areas(p);
    CHECK(mc == Approx(0.49).epsilon(1e-14));
    CHECK(me == Approx(0.51).epsilon(1e-14));
    p.lambda = 2.0;
    auto [mc2, me2] = mean_areas(p);
    CHECK(mc2 == Approx(0.245).epsilon(1e-14));
    CHECK(me2 == Approx(0.255).epsilon(1e-14));
    CHECK(mc2 + me2 == Approx(0.5).epsilon(1e-14));  // mean typical-cell area 1/lambda
}

TEST_CASE("second moments match the frozen high-precision values") {
    const auto p = base_params();
    // frozen from an independent 3-D Gauss-Legendre tensor quadrature
    CHECK(second_moment_cc(p) == Approx(0.3518590412769618).epsilon(5e-4));
    CHECK(second_moment_ce(p) == Approx(0.32794397303363126).epsilon(5e-4));
    CHECK(second_moment_cc(p) >= 0.49 * 0.49);
    CHECK(second_moment_ce(p) >= 0.51 * 0.51);
}

TEST_CASE("tau -> 1 limit reproduces the Poisson-Voronoi cell moment") {
    auto p = base_params();
    p.tau = 0.99999;
    // E[A^2] = 1.28017/lambda^2 for the typical Poisson-Voronoi cell
    CHECK(second_moment_cc(p) == Approx(1.28017).epsilon(2e-3));
    // the CE region vanishes
    p.tau = 0.995;
    CHECK(second_moment_ce(p) < 2e-3);
}

TEST_CASE("second moment scaling in lambda") {
    auto p = base_params();
    const double at1 = second_moment_cc(p);
    p.lambda = 2.0;
    CHECK(second_moment_cc(p) == Approx(at1 / 4.0).epsilon(5e-4));
}

TEST_CASE("cc second moment increases with tau") {
    auto p = base_params();
    double prev = 0.0;
    for (double tau : {0.4, 0.6, 0.8}) {
        p.tau = tau;
        const double m = second_moment_cc(p);
        CHECK(m > prev);
        prev = m;
    }
}

TEST_CASE("gamma fit formulas and round trip") {
    const GammaFit f = gamma_fit({2.0, 6.0, UserClass::cc});
    CHECK(f.gamma1 == Approx(1.0).epsilon(1e-12));
    CHECK(f.gamma2 == Approx(2.0).epsilon(1e-12));
    // round trip: mean gamma2/gamma1, variance gamma2/gamma1^2
    const GammaFit g = gamma_fit({0.49, 0.3518590412769618, UserClass::cc});
    CHECK(g.gamma2 / g.gamma1 == Approx(0.49).margin(1e-10));
    CHECK(g.gamma2 / (g.gamma1 * g.gamma1) == Approx(0.3518590412769618 - 0.49 * 0.49).margin(1e-10));
    CHECK_THROWS_AS(gamma_fit({2.0, 4.0, UserClass::cc}), std::domain_error);  // variance 0
    CHECK_THROWS_AS(gamma_fit({2.0, 3.0, UserClass::cc}), std::domain_error);  // negative
}

TEST_CASE("load pmf matches direct quadrature of the mixture integral") {
    // frozen from direct numeric integration of the pmf integral
    const GammaFit fit{2.0, 3.0};
    const LoadPmf pmf = load_pmf(fit, 5.0, 80);
    const double expected[8] = {0.05824828908630699, 0.07746037580784236, 0.08889316938010369,
                                0.0933866650755257,  0.09237831802781533, 0.08744459878672195,
                                0.08002852783919898, 0.07131238532159556};
    for (int n = 1; n <= 8; ++n) CHECK(pmf.prob(n) == Approx(expected[n - 1]).epsilon(1e-9));
    CHECK(pmf.xi == Approx(0.2323783452933826).epsilon(1e-7));

    const GammaFit fit2{4.384496, 2.148403};  // the tau=0.7 CC fit
    const LoadPmf pmf2 = load_pmf(fit2, 5.0);
    CHECK(pmf2.prob(1) == Approx(0.3352480728830561).epsilon(1e-9));
    CHECK(pmf2.prob(4) == Approx(0.10292109114008464).epsilon(1e-9));
    CHECK(pmf2.xi == Approx(0.5590670323351254).epsilon(1e-8));
}

TEST_CASE("load pmf normalization, xi range, auto truncation") {
    const GammaFit fit{4.384496, 2.148403};
    for (double nu : {1.0, 5.0, 20.0}) {
        const LoadPmf pmf = load_pmf(fit, nu);
        const double total = std::accumulate(pmf.probs.begin(), pmf.probs.end(), 0.0);
        CHECK(total >= 1.0 - 1e-6);
        CHECK(total <= 1.0 + 1e-9);
        CHECK(pmf.xi > 0.0);
        CHECK(pmf.xi <= 1.0);
        CHECK(pmf.n_max <= 200);
        // mean load consistency: E[N] >= nu * E[A] (zero truncation only adds)
        double mean = 0.0;
        for (int n = 1; n <= pmf.n_max; ++n) mean += n * pmf.prob(n);
        CHECK(mean >= nu * fit.gamma2 / fit.gamma1 - 1e-6);
    }
    CHECK_THROWS_AS(load_pmf(fit, 5.0, 2), TruncationError);
}

TEST_CASE("near-degenerate gamma fit collapses to zero-truncated Poisson") {
    // variance -> 0 around a0 = 0.5 with nu = 5: ZTP(2.5)
    const double a0 = 0.5, var = 1e-10;
    const GammaFit fit{a0 / var, a0 * a0 / var};
    const LoadPmf pmf = load_pmf(fit, 5.0, 60);
    const double m = 5.0 * a0;
    double term = m * std::exp(-m) / (1.0 - std::exp(-m));
    for (int n = 1; n <= 10; ++n) {
        CHECK(pmf.prob(n) == Approx(term).epsilon(1e-4));
        term *= m / (n + 1);
    }
}
