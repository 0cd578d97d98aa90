#pragma once

// Mean transmission rates, conditional-rate CDFs, the Geo/Geo/1 conditional
// mean delay, and delay-outage CCDF bounds, for NOMA and OMA under random
// scheduling. Expectations over the load pmf are finite sums to n_max; the
// residual tail mass is assigned the final beta value (the beta argument is
// monotone in n, so the tail contribution is bracketed by it and 1).

#include <cmath>
#include <optional>

#include "nomacell/cell_load.hpp"
#include "nomacell/meta.hpp"
#include "nomacell/params.hpp"

namespace nomacell {

namespace detail {

inline double log2_rate(double beta) { return std::log2(1.0 + beta); }

// OMA divides the beta argument by the scheduled time fraction.
inline double sched_fraction(UserClass cls, Scheme scheme, double theta_or_eta) {
    if (scheme == Scheme::noma) return 1.0;
    const double eta = theta_or_eta;
    if (!(eta > 0.0 && eta < 1.0)) throw InfeasibleError("OMA requires eta in (0,1)");
    return cls == UserClass::cc ? eta : 1.0 - eta;
}

// E_N[ I(min(arg(N), 1)) ] for arg(N) = scale * N.
inline double load_expectation_beta(const LoadPmf& load, const BetaFit& fit, double scale) {
    double acc = 0.0, mass = 0.0, last = 0.0;
    for (int n = 1; n <= load.n_max; ++n) {
        const double pn = load.prob(n);
        last = meta_cdf_clamped(scale * n, fit);
        acc += pn * last;
        mass += pn;
    }
    if (mass < 1.0) acc += (1.0 - mass) * last;
    return acc;
}

}  // namespace detail

// Mean transmission rate xi * f * log2(1+beta) * M_1, where f is the scheme's
// scheduling fraction (1 for NOMA, eta / 1-eta for OMA).
inline double mean_rate(UserClass cls, Scheme scheme, double theta_or_eta, const SystemParams& p,
                        const LoadPmf& load, const QuadSpec& spec = {}) {
    const double chi = scheme == Scheme::noma ? chi_of(cls, theta_or_eta, p) : p.beta(cls);
    const double m1 = meta_moment_cached(cls, chi, 1.0, p, spec);
    return detail::sched_fraction(cls, scheme, theta_or_eta) * load.xi *
           detail::log2_rate(p.beta(cls)) * m1;
}

// CDF of the conditional transmission rate at threshold `rate`.
inline double rate_cdf(UserClass cls, Scheme scheme, double rate, double theta_or_eta,
                       const SystemParams& p, const LoadPmf& load, const BetaFit& fit) {
    if (!(rate >= 0.0)) throw std::domain_error("rate_cdf: rate threshold must be >= 0");
    if (rate == 0.0) return 0.0;
    const double frac = detail::sched_fraction(cls, scheme, theta_or_eta);
    const double scale = rate / (frac * detail::log2_rate(p.beta(cls)));
    return detail::load_expectation_beta(load, fit, scale);
}

// Geo/Geo/1 conditional mean delay (1-arrival)/(mu-arrival); nullopt marks an
// unstable queue (mu <= arrival), which downstream estimators count as outage
// at every threshold.
inline std::optional<double> cond_mean_delay(double mu, double arrival) {
    if (!(mu > 0.0 && mu <= 1.0)) throw std::domain_error("cond_mean_delay: mu in (0,1]");
    if (!(arrival > 0.0 && arrival < 1.0))
        throw std::domain_error("cond_mean_delay: arrival in (0,1)");
    if (mu <= arrival) return std::nullopt;
    return (1.0 - arrival) / (mu - arrival);
}

// Upper bound on P[conditional mean delay >= t].
inline double delay_ccdf(UserClass cls, Scheme scheme, double delay_threshold, double arrival,
                         double theta_or_eta, [[maybe_unused]] const SystemParams& p,
                         const LoadPmf& load, const BetaFit& fit) {
    if (!(delay_threshold > 0.0)) throw std::domain_error("delay_ccdf: threshold must be > 0");
    if (!(arrival > 0.0 && arrival < 1.0)) throw std::domain_error("delay_ccdf: arrival in (0,1)");
    const double frac = detail::sched_fraction(cls, scheme, theta_or_eta);
    const double scale = ((1.0 - arrival) / delay_threshold + arrival) / frac;
    return detail::load_expectation_beta(load, fit, scale);
}

}  // namespace nomacell
