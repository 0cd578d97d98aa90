#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nomacell/performance.hpp"

using namespace nomacell;
using Catch::Approx;

namespace {

// default system: (beta_c, beta_e) = (3, -3) dB, tau = 0.7, alpha = 4
SystemParams defaults() { return SystemParams{}; }

// gamma fits of the tau = 0.7, lambda = 1 region areas (frozen analytic moments)
const GammaFit fit_cc_area{4.384432743885834, 2.148372044504059};
const GammaFit fit_ce_area{7.517248433360255, 3.83379670101373};

struct Models {
    LoadPmf load_c, load_e;
    BetaFit fit_c, fit_e;
};

Models models_at(const SystemParams& p, Scheme scheme, double alloc) {
    Models m;
    m.load_c = load_pmf(fit_cc_area, p.nu);
    m.load_e = load_pmf(fit_ce_area, p.nu);
    const double cc = scheme == Scheme::noma ? chi_c(alloc, p.beta_c, p.beta_e) : p.beta_c;
    const double ce = scheme == Scheme::noma ? chi_e(alloc, p.beta_e) : p.beta_e;
    m.fit_c = beta_fit(meta_moment(UserClass::cc, cc, 1.0, p), meta_moment(UserClass::cc, cc, 2.0, p));
    m.fit_e = beta_fit(meta_moment(UserClass::ce, ce, 1.0, p), meta_moment(UserClass::ce, ce, 2.0, p));
    return m;
}

}  // namespace

TEST_CASE("mean rate identities and limits") {
    const auto p = defaults();
    const auto m = models_at(p, Scheme::noma, 0.5);

    const double direct = m.load_c.xi * std::log2(1.0 + p.beta_c) *
                          meta_moment(UserClass::cc, chi_c(0.5, p.beta_c, p.beta_e), 1.0, p);
    CHECK(mean_rate(UserClass::cc, Scheme::noma, 0.5, p, m.load_c) == Approx(direct).epsilon(1e-9));

    // NOMA CE rate collapses toward theta_nc
    const double tnc = theta_nc(p.beta_e);
    CHECK(mean_rate(UserClass::ce, Scheme::noma, tnc - 1e-7, p, m.load_e) < 1e-4);

    // OMA CC rate vanishes with eta -> 0 and is linear in eta
    CHECK(mean_rate(UserClass::cc, Scheme::oma, 1e-12, p, m.load_c) < 1e-10);
    const double r_half = mean_rate(UserClass::cc, Scheme::oma, 0.5, p, m.load_c);
    const double r_quarter = mean_rate(UserClass::cc, Scheme::oma, 0.25, p, m.load_c);
    CHECK(r_half == Approx(2.0 * r_quarter).epsilon(1e-9));

    // OMA/NOMA boundary: eta -> 1 recovers xi_c log2(1+beta_c) M1_oma
    const double full = m.load_c.xi * std::log2(1.0 + p.beta_c) * meta_moment(UserClass::cc, p.beta_c, 1.0, p);
    CHECK(mean_rate(UserClass::cc, Scheme::oma, 1.0 - 1e-12, p, m.load_c) ==
          Approx(full).epsilon(1e-9));
}

TEST_CASE("rate cdf endpoints and monotonicity") {
    const auto p = defaults();
    const auto m = models_at(p, Scheme::noma, 0.5);
    CHECK(rate_cdf(UserClass::cc, Scheme::noma, 0.0, 0.5, p, m.load_c, m.fit_c) == 0.0);
    // beyond log2(1+beta) even a lone perfectly-served user is below threshold
    const double wc = std::log2(1.0 + p.beta_c);
    CHECK(rate_cdf(UserClass::cc, Scheme::noma, wc * 1.0001, 0.5, p, m.load_c, m.fit_c) ==
          Approx(1.0).margin(1e-9));
    double prev = -1.0;
    for (int i = 0; i <= 50; ++i) {
        const double v = rate_cdf(UserClass::cc, Scheme::noma, wc * i / 50.0, 0.5, p, m.load_c, m.fit_c);
        CHECK(v >= prev - 1e-12);
        CHECK((v >= 0.0 && v <= 1.0));
        prev = v;
    }
    CHECK_THROWS_AS(rate_cdf(UserClass::cc, Scheme::noma, -0.1, 0.5, p, m.load_c, m.fit_c),
                    std::domain_error);
}

TEST_CASE("conditional mean delay") {
    CHECK(*cond_mean_delay(0.5, 0.25) == Approx(3.0).epsilon(1e-12));
    CHECK_FALSE(cond_mean_delay(0.25, 0.25).has_value());  // stability boundary
    CHECK_FALSE(cond_mean_delay(0.1, 0.25).has_value());
    CHECK(*cond_mean_delay(1.0, 1e-9) == Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(cond_mean_delay(0.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(cond_mean_delay(0.5, 1.0), std::domain_error);
}

TEST_CASE("delay ccdf limits and monotonicity") {
    const auto p = defaults();
    const auto m = models_at(p, Scheme::noma, 0.5);
    // t -> 0+: argument clamps to 1 for every load
    CHECK(delay_ccdf(UserClass::cc, Scheme::noma, 1e-9, 0.05, 0.5, p, m.load_c, m.fit_c) ==
          Approx(1.0).margin(1e-12));
    // t -> inf with vanishing arrival: argument -> 0
    CHECK(delay_ccdf(UserClass::cc, Scheme::noma, 1e9, 1e-9, 0.5, p, m.load_c, m.fit_c) <
          1e-6);
    double prev = 2.0;
    for (double t : {1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 200.0}) {
        const double v = delay_ccdf(UserClass::ce, Scheme::noma, t, 0.05, 0.5, p, m.load_e, m.fit_e);
        CHECK(v <= prev + 1e-12);
        prev = v;
    }
    // nondecreasing in the arrival rate
    prev = -1.0;
    for (double a : {0.01, 0.05, 0.1, 0.2, 0.4}) {
        const double v = delay_ccdf(UserClass::cc, Scheme::noma, 20.0, a, 0.5, p, m.load_c, m.fit_c);
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
}

TEST_CASE("oma curves carry the time-share scaling") {
    const auto p = defaults();
    const auto m = models_at(p, Scheme::oma, p.eta);
    // the OMA beta argument at rate r with share eta equals the NOMA-form
    // argument at rate r/eta evaluated with the same fit
    const double r = 0.1;
    const double lhs = rate_cdf(UserClass::cc, Scheme::oma, r, 0.5, p, m.load_c, m.fit_c);
    const double rhs = rate_cdf(UserClass::cc, Scheme::noma, r / 0.5, 0.5, p, m.load_c, m.fit_c);
    CHECK(lhs == Approx(rhs).epsilon(1e-12));
    const double d_lhs =
        delay_ccdf(UserClass::ce, Scheme::oma, 30.0, 0.05, 0.4, p, m.load_e, m.fit_e);
    // CE share is 1-eta = 0.6: same as NOMA with arguments scaled by 1/0.6
    double acc = 0.0, mass = 0.0, last = 0.0;
    for (int n = 1; n <= m.load_e.n_max; ++n) {
        const double arg = n / 0.6 * ((1.0 - 0.05) / 30.0 + 0.05);
        last = meta_cdf_clamped(arg, m.fit_e);
        acc += m.load_e.prob(n) * last;
        mass += m.load_e.prob(n);
    }
    acc += (1.0 - mass) * last;
    CHECK(d_lhs == Approx(acc).epsilon(1e-12));
}

TEST_CASE("mean rate consistent with the rate cdf within the approximation") {
    const auto p = defaults();
    for (Scheme scheme : {Scheme::noma, Scheme::oma}) {
        const double alloc = 0.5;
        const auto m = models_at(p, scheme, alloc);
        for (UserClass cls : {UserClass::cc, UserClass::ce}) {
            const auto& load = cls == UserClass::cc ? m.load_c : m.load_e;
            const auto& fit = cls == UserClass::cc ? m.fit_c : m.fit_e;
            const double wmax = std::log2(1.0 + p.beta(cls));
            const double mean = mean_rate(cls, scheme, alloc, p, load);
            const double integral = quad_finite(
                [&](double r) { return 1.0 - rate_cdf(cls, scheme, r, alloc, p, load, fit); }, 0.0,
                wmax, QuadSpec{1e-9, 1e-12, 4000});
            CHECK(integral == Approx(mean).epsilon(0.02));
        }
    }
}
