#pragma once

// Distance model for the typical cell: analytical laws of the service-link
// distance R_o and the dominant-interferer distance R_d for CC and CE users,
// plus exact inverse-transform samplers. Built on the correction-factor
// adjusted two-nearest-point law of the BS process.

#include <cmath>

#include "nomacell/numerics.hpp"
#include "nomacell/params.hpp"
#include "nomacell/rng.hpp"

namespace nomacell {

struct DistancePair {
    double r_o;
    double r_d;
    UserClass user_class;
};

// (tau^2, 1 - tau^2)
inline std::pair<double, double> class_probabilities(const SystemParams& p) {
    const double pc = p.tau * p.tau;
    return {pc, 1.0 - pc};
}

namespace detail {
inline double pr_lam(const SystemParams& p) {
    return std::acos(-1.0) * p.rho * p.lambda;
}
}  // namespace detail

inline double cdf_ro_cc(double r_o, const SystemParams& p) {
    if (r_o <= 0.0) return 0.0;
    const double q = detail::pr_lam(p);
    return -std::expm1(-q * r_o * r_o / (p.tau * p.tau));
}

inline double cdf_rd_given_ro_cc(double r_d, double r_o, const SystemParams& p) {
    const double lo = r_o / p.tau;
    if (r_d < lo) throw std::domain_error("cdf_rd_given_ro_cc: requires r_d >= r_o/tau");
    const double q = detail::pr_lam(p);
    return -std::expm1(-q * (r_d * r_d - lo * lo));
}

inline double joint_pdf_cc(double r_o, double r_d, const SystemParams& p) {
    if (!(r_o > 0.0) || !(r_d > r_o / p.tau)) return 0.0;
    const double q = detail::pr_lam(p);
    const double log_norm = 2.0 * std::log(2.0 * q) - 2.0 * std::log(p.tau);
    return std::exp(log_norm + std::log(r_o) + std::log(r_d) - q * r_d * r_d);
}

inline double cdf_ro_ce(double r_o, const SystemParams& p) {
    if (r_o <= 0.0) return 0.0;
    const double q = detail::pr_lam(p) * r_o * r_o;
    const double t2 = p.tau * p.tau;
    return 1.0 - (std::exp(-q) - t2 * std::exp(-q / t2)) / (1.0 - t2);
}

inline double cdf_rd_given_ro_ce(double r_d, double r_o, const SystemParams& p) {
    if (r_d < r_o) throw std::domain_error("cdf_rd_given_ro_ce: requires r_d >= r_o");
    if (r_d >= r_o / p.tau) return 1.0;
    const double q = detail::pr_lam(p);
    const double num = -std::expm1(-q * (r_d * r_d - r_o * r_o));
    const double den = -std::expm1(-q * r_o * r_o * (1.0 / (p.tau * p.tau) - 1.0));
    return num / den;
}

inline double joint_pdf_ce(double r_o, double r_d, const SystemParams& p) {
    if (!(r_o > 0.0) || !(r_d > r_o) || !(r_d <= r_o / p.tau)) return 0.0;
    const double q = detail::pr_lam(p);
    const double t2 = p.tau * p.tau;
    const double log_norm = 2.0 * std::log(2.0 * q) - std::log1p(-t2);
    return std::exp(log_norm + std::log(r_o) + std::log(r_d) - q * r_d * r_d);
}

// Exact inverse-transform sampling of (R_o, R_d). The CC chain has closed-form
// inverses; the CE R_o CDF is inverted by bisection (no closed form).
inline DistancePair sample_distance_pair(UserClass cls, const SystemParams& p, SplitMix64& rng) {
    const double q = detail::pr_lam(p);
    const double u1 = rng.next_open(), u2 = rng.next_open();
    if (cls == UserClass::cc) {
        const double r_o = p.tau * std::sqrt(-std::log1p(-u1) / q);
        const double lo = r_o / p.tau;
        const double r_d = std::sqrt(lo * lo - std::log1p(-u2) / q);
        return {r_o, r_d, cls};
    }
    // bracket the CE R_o quantile, then bisect
    double hi = 1.0 / std::sqrt(q);
    while (cdf_ro_ce(hi, p) < u1) hi *= 2.0;
    const double r_o = *find_root([&](double r) { return cdf_ro_ce(r, p) - u1; },
                                  0.0, hi, 1e-12 / std::sqrt(q) + 1e-15 * hi);
    const double den = -std::expm1(-q * r_o * r_o * (1.0 / (p.tau * p.tau) - 1.0));
    const double r_d = std::sqrt(r_o * r_o - std::log1p(-u2 * den) / q);
    return {r_o, std::min(r_d, r_o / p.tau), cls};
}

}  // namespace nomacell
