#pragma once

// Resource allocation: cell-sum-rate and effective-capacity objectives, the
// feasibility boundaries theta_hat / theta_NC, NOMA gains, the near-optimal
// P1/P2 rules, and a brute-force grid oracle.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>

#include "nomacell/meta.hpp"
#include "nomacell/performance.hpp"

namespace nomacell {

enum class RAProblem { p1, p2 };

struct RAResult {
    double allocation = 0.0;  // theta* (NOMA) or eta* (OMA)
    double objective = 0.0;   // CSR (P1) or SEC (P2)
    bool feasible = false;
    std::optional<double> root_lc;  // theta_lc / eta_c
    std::optional<double> root_e;   // theta_e / eta_e
    std::string failing_constraint;  // set when infeasible
};

// argmin of chi_c: beta_c/theta = beta_e/(1 - theta(1+beta_e)).
inline double theta_hat(double beta_c, double beta_e) {
    if (!(beta_c > 0.0 && beta_e > 0.0)) throw std::domain_error("theta_hat: betas must be > 0");
    return beta_c / (beta_c + beta_e + beta_c * beta_e);
}

// Cell sum rate (B = 1): the load-free sum of threshold-weighted first moments.
inline double csr(Scheme scheme, double theta_or_eta, const SystemParams& p,
                  const QuadSpec& spec = {}) {
    const double wc = std::log2(1.0 + p.beta_c), we = std::log2(1.0 + p.beta_e);
    if (scheme == Scheme::noma) {
        const double theta = theta_or_eta;
        return wc * meta_moment_cached(UserClass::cc, chi_c(theta, p.beta_c, p.beta_e), 1.0, p, spec) +
               we * meta_moment_cached(UserClass::ce, chi_e(theta, p.beta_e), 1.0, p, spec);
    }
    const double eta = theta_or_eta;
    if (!(eta > 0.0 && eta < 1.0)) throw InfeasibleError("csr: eta in (0,1)");
    return eta * wc * meta_moment_cached(UserClass::cc, p.beta_c, 1.0, p, spec) +
           (1.0 - eta) * we * meta_moment_cached(UserClass::ce, p.beta_e, 1.0, p, spec);
}

// Per-class NOMA-over-OMA rate gains (g_c, g_e) at power split theta and OMA
// time split eta.
inline std::pair<double, double> noma_gain(double theta, double eta, const SystemParams& p,
                                           const QuadSpec& spec = {}) {
    if (!(eta > 0.0 && eta < 1.0)) throw InfeasibleError("noma_gain: eta in (0,1)");
    const double gc = meta_moment_cached(UserClass::cc, chi_c(theta, p.beta_c, p.beta_e), 1.0, p, spec) /
                      (eta * meta_moment_cached(UserClass::cc, p.beta_c, 1.0, p, spec));
    const double ge = meta_moment_cached(UserClass::ce, chi_e(theta, p.beta_e), 1.0, p, spec) /
                      ((1.0 - eta) * meta_moment_cached(UserClass::ce, p.beta_e, 1.0, p, spec));
    return {gc, ge};
}

// Largest arrival rate whose delay-outage bound stays at the cap: the root of
// delay_ccdf(rho) = cap in rho. delay_ccdf is increasing in the arrival rate
// (thresholds are >= 1 slot); the bracket endpoints are checked before
// bisecting. Returns 0 when even rho -> 0+ violates the cap.
inline double effective_capacity(UserClass cls, Scheme scheme, double theta_or_eta,
                                 const TrafficParams& traffic, const SystemParams& p,
                                 const LoadPmf& load, const BetaFit& fit, double tol = 1e-6) {
    const double cap = traffic.outage_cap(cls);
    const double t = traffic.delay_thresh(cls);
    auto outage = [&](double arrival) {
        return delay_ccdf(cls, scheme, t, arrival, theta_or_eta, p, load, fit);
    };
    constexpr double lo = 1e-9, hi = 1.0 - 1e-9;
    if (outage(lo) > cap) return 0.0;
    if (outage(hi) <= cap) return hi;
    return *find_root([&](double r) { return outage(r) - cap; }, lo, hi, tol);
}

namespace detail {

constexpr double ra_eps = 1e-4;     // bracket margin for allocation roots
constexpr double ra_root_tol = 1e-6;

// Locates the binding root of `metric(x) = floor` for a metric that is
// increasing on [lo, hi]. A floor met already at lo never binds (root := lo);
// a floor unattainable at hi is infeasible (nullopt).
inline std::optional<double> rising_root(const std::function<double(double)>& metric, double floor,
                                         double lo, double hi) {
    if (floor <= 0.0 || metric(lo) >= floor) return lo;
    if (metric(hi) < floor) return std::nullopt;
    return find_root([&](double x) { return metric(x) - floor; }, lo, hi, ra_root_tol);
}

// Same for a metric decreasing on [lo, hi]: never-binding gives hi.
inline std::optional<double> falling_root(const std::function<double(double)>& metric, double floor,
                                          double lo, double hi) {
    if (floor <= 0.0 || metric(hi) >= floor) return hi;
    if (metric(lo) < floor) return std::nullopt;
    return find_root([&](double x) { return metric(x) - floor; }, lo, hi, ra_root_tol);
}

// Shared near-optimal rule. NOMA: theta* = min(theta_e, theta_hat) when
// theta_lc and theta_e exist with theta_e >= theta_lc. OMA: eta* = eta_e when
// eta_c <= eta_e (the objective is increasing in eta for beta_c > beta_e).
inline RAResult near_optimal(Scheme scheme, const SystemParams& p,
                             const std::function<double(double)>& metric_c,
                             const std::function<double(double)>& metric_e, double floor_c,
                             double floor_e, const std::function<double(double)>& objective) {
    RAResult res;
    if (scheme == Scheme::noma) {
        const double th = theta_hat(p.beta_c, p.beta_e);
        const double tnc = theta_nc(p.beta_e);
        res.root_lc = rising_root(metric_c, floor_c, ra_eps, th);
        res.root_e = falling_root(metric_e, floor_e, ra_eps, tnc - ra_eps);
        if (!res.root_lc) {
            res.failing_constraint = "cc floor unattainable on (0, theta_hat]";
            return res;
        }
        if (!res.root_e) {
            res.failing_constraint = "ce floor unattainable on (0, theta_nc)";
            return res;
        }
        if (*res.root_e < *res.root_lc) {
            res.failing_constraint = "theta_e < theta_lc (cc and ce floors conflict)";
            return res;
        }
        res.allocation = std::min(*res.root_e, th);
    } else {
        res.root_lc = rising_root(metric_c, floor_c, ra_eps, 1.0 - ra_eps);
        res.root_e = falling_root(metric_e, floor_e, ra_eps, 1.0 - ra_eps);
        if (!res.root_lc) {
            res.failing_constraint = "cc floor unattainable on (0, 1)";
            return res;
        }
        if (!res.root_e) {
            res.failing_constraint = "ce floor unattainable on (0, 1)";
            return res;
        }
        if (*res.root_e < *res.root_lc) {
            res.failing_constraint = "eta_c > eta_e (cc and ce floors conflict)";
            return res;
        }
        res.allocation = *res.root_e;
    }
    res.feasible = true;
    res.objective = objective(res.allocation);
    return res;
}

}  // namespace detail

// P1: CSR maximization under minimum mean-rate floors.
inline RAResult solve_p1(Scheme scheme, const SystemParams& p, const TrafficParams& traffic,
                         const LoadPmf& load_c, const LoadPmf& load_e, const QuadSpec& spec = {}) {
    traffic.validate();
    auto rate_c = [&](double x) { return mean_rate(UserClass::cc, scheme, x, p, load_c, spec); };
    auto rate_e = [&](double x) { return mean_rate(UserClass::ce, scheme, x, p, load_e, spec); };
    auto objective = [&](double x) { return csr(scheme, x, p, spec); };
    return detail::near_optimal(scheme, p, rate_c, rate_e, traffic.rate_floor_c,
                                traffic.rate_floor_e, objective);
}

namespace detail {

inline std::function<double(double)> ec_metric(UserClass cls, Scheme scheme, const SystemParams& p,
                                               const TrafficParams& traffic, const LoadPmf& load,
                                               const QuadSpec& spec) {
    return [=, &load](double x) {
        const double chi = scheme == Scheme::noma ? chi_of(cls, x, p) : p.beta(cls);
        const BetaFit fit = beta_fit(meta_moment_cached(cls, chi, 1.0, p, spec),
                                     meta_moment_cached(cls, chi, 2.0, p, spec));
        return effective_capacity(cls, scheme, x, traffic, p, load, fit);
    };
}

}  // namespace detail

// P2: sum-effective-capacity maximization under minimum EC floors. Beta fits
// are recomputed per candidate allocation (the kappas depend on chi(theta));
// the moment cache keeps the sweeps affordable.
inline RAResult solve_p2(Scheme scheme, const SystemParams& p, const TrafficParams& traffic,
                         const LoadPmf& load_c, const LoadPmf& load_e, const QuadSpec& spec = {}) {
    traffic.validate();
    auto ec_c = detail::ec_metric(UserClass::cc, scheme, p, traffic, load_c, spec);
    auto ec_e = detail::ec_metric(UserClass::ce, scheme, p, traffic, load_e, spec);
    auto objective = [&](double x) { return ec_c(x) + ec_e(x); };
    return detail::near_optimal(scheme, p, ec_c, ec_e, traffic.ec_floor_c, traffic.ec_floor_e,
                                objective);
}

// Exhaustive grid oracle with golden-section refinement around the best
// feasible grid point; the refined point is kept only if it stays feasible.
inline RAResult brute_force_ra(RAProblem problem, Scheme scheme, const SystemParams& p,
                               const TrafficParams& traffic, const LoadPmf& load_c,
                               const LoadPmf& load_e, int grid_size = 2000,
                               const QuadSpec& spec = {}) {
    if (grid_size < 100) throw std::invalid_argument("brute_force_ra: grid_size >= 100");
    traffic.validate();

    std::function<double(double)> metric_c, metric_e, objective;
    double floor_c, floor_e;
    if (problem == RAProblem::p1) {
        metric_c = [&](double x) { return mean_rate(UserClass::cc, scheme, x, p, load_c, spec); };
        metric_e = [&](double x) { return mean_rate(UserClass::ce, scheme, x, p, load_e, spec); };
        objective = [&](double x) { return csr(scheme, x, p, spec); };
        floor_c = traffic.rate_floor_c;
        floor_e = traffic.rate_floor_e;
    } else {
        metric_c = detail::ec_metric(UserClass::cc, scheme, p, traffic, load_c, spec);
        metric_e = detail::ec_metric(UserClass::ce, scheme, p, traffic, load_e, spec);
        objective = [metric_c, metric_e](double x) { return metric_c(x) + metric_e(x); };
        floor_c = traffic.ec_floor_c;
        floor_e = traffic.ec_floor_e;
    }
    auto feasible_at = [&](double x) {
        return metric_c(x) >= floor_c && metric_e(x) >= floor_e;
    };

    const double lo = detail::ra_eps;
    const double hi = (scheme == Scheme::noma ? theta_nc(p.beta_e) : 1.0) - detail::ra_eps;
    RAResult res;
    for (int i = 0; i < grid_size; ++i) {
        const double x = lo + (hi - lo) * i / (grid_size - 1.0);
        if (!feasible_at(x)) continue;
        const double obj = objective(x);
        if (!res.feasible || obj > res.objective) {
            res.feasible = true;
            res.allocation = x;
            res.objective = obj;
        }
    }
    if (!res.feasible) {
        res.failing_constraint = "no feasible grid point";
        return res;
    }
    const double step = (hi - lo) / (grid_size - 1.0);
    const double rlo = std::max(lo, res.allocation - step);
    const double rhi = std::min(hi, res.allocation + step);
    // refine with infeasible points masked out, so the search can climb up to
    // a binding-constraint boundary inside the bracket
    auto constrained = [&](double x) {
        return feasible_at(x) ? objective(x) : -std::numeric_limits<double>::infinity();
    };
    const auto [xr, fr] = maximize_unimodal(constrained, rlo, rhi, detail::ra_root_tol);
    if (fr > res.objective && feasible_at(xr)) {
        res.allocation = xr;
        res.objective = fr;
    }
    return res;
}

}  // namespace nomacell
