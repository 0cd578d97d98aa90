#pragma once

// CC/CE region area moments (circle-union geometry), gamma area fits, and the
// zero-truncated-Poisson-mixture load pmfs.
//
// Second moments are Robbins integrals over two test points x1, x2 at radii
// r1, r2 with angular separation u. With B_i / ~B_i the disks of radii r_i and
// r_i/tau centered at x_i, the void probabilities reduce to disk-union areas:
//   P[x1, x2 in Voc] = exp(-lambda U3)
//   P[x1, x2 in Voe] = exp(-lambda Uo) - exp(-lambda U1) - exp(-lambda U2)
//                      + exp(-lambda U3)
// where Uo = |B1 u B2|, U1 = |~B1 u B2|, U2 = |B1 u ~B2|, U3 = |~B1 u ~B2|,
// with the containment branch (area of the larger disk) whenever a scaled pair
// does not intersect. The Voe expression covers both of the case splits of the
// derivation: under containment it collapses to the two-term form.

#include <cmath>
#include <vector>

#include "nomacell/numerics.hpp"
#include "nomacell/params.hpp"

namespace nomacell {

struct RegionAreaStats {
    double mean;
    double second_moment;
    UserClass region;
};

// gamma1 = rate (1/area), gamma2 = shape
struct GammaFit {
    double gamma1;
    double gamma2;
};

struct LoadPmf {
    std::vector<double> probs;  // probs[i] = P[N = i+1]
    double xi;                  // sum_n P[N=n]/n
    int n_max;

    double prob(int n) const { return (n >= 1 && n <= n_max) ? probs[n - 1] : 0.0; }
};

namespace detail {

// Union area of two disks with radii z1, z2 and centers d apart, including the
// containment and disjoint branches.
inline double disk_union_area(double z1, double z2, double d) {
    const double pi = std::acos(-1.0);
    const double zmax = std::max(z1, z2), zmin = std::min(z1, z2);
    if (d + zmin <= zmax) return pi * zmax * zmax;      // one disk inside the other
    if (d >= z1 + z2) return pi * (z1 * z1 + z2 * z2);  // disjoint
    const double cos_u = (z1 * z1 + z2 * z2 - d * d) / (2.0 * z1 * z2);
    const double w1 = std::acos(std::clamp((z1 - z2 * cos_u) / d, -1.0, 1.0));
    const double w2 = std::acos(std::clamp((z2 - z1 * cos_u) / d, -1.0, 1.0));
    return z1 * z1 * (pi - w1 + 0.5 * std::sin(2.0 * w1)) +
           z2 * z2 * (pi - w2 + 0.5 * std::sin(2.0 * w2));
}

}  // namespace detail

// Union area of two circles of radii r1, r2 whose centers subtend angle u at
// an intersection point (so d^2 = r1^2 + r2^2 - 2 r1 r2 cos u). Any u in
// [0, pi] describes a valid intersecting configuration; the limits u -> 0
// (coincident for r1 = r2) and u = pi (tangent through the far point) are
// handled by the containment branch.
inline double union_area(double r1, double r2, double u) {
    if (!(r1 > 0.0) || !(r2 > 0.0)) throw std::domain_error("union_area: radii must be > 0");
    if (!(u >= 0.0 && u <= std::acos(-1.0)))
        throw std::domain_error("union_area: angle must be in [0, pi]");
    const double d2 = r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * std::cos(u);
    return detail::disk_union_area(r1, r2, std::sqrt(std::max(d2, 0.0)));
}

// E[|Voc|] = tau^2/lambda, E[|Voe|] = (1-tau^2)/lambda (exact).
inline std::pair<double, double> mean_areas(const SystemParams& p) {
    p.validate();
    const double t2 = p.tau * p.tau;
    return {t2 / p.lambda, (1.0 - t2) / p.lambda};
}

namespace detail {

template <class G>
inline double robbins_integral(double r_cut, const G& g, const QuadSpec& spec) {
    const double pi = std::acos(-1.0);
    const double s_cut = r_cut / (1.0 + r_cut);
    auto middle = [&](double u) {
        const double cu = std::cos(u);
        auto inner = [&](double s2) {
            const double om2 = 1.0 - s2;
            const double r2 = s2 / om2;
            auto innermost = [&](double s1) {
                const double om1 = 1.0 - s1;
                const double r1 = s1 / om1;
                const double d2 = r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * cu;
                const double d = std::sqrt(std::max(d2, 0.0));
                return g(r1, r2, d) * r1 * r2 / (om1 * om1);
            };
            return quad_finite(innermost, 0.0, s_cut, spec) / (om2 * om2);
        };
        return quad_finite(inner, 0.0, s_cut, spec);
    };
    return 4.0 * pi * quad_finite(middle, 0.0, pi, spec);
}

}  // namespace detail

// E[|Voc|^2]: triple integral of exp(-lambda U3).
inline double second_moment_cc(const SystemParams& p, const QuadSpec& spec = {1e-6, 1e-10, 2000}) {
    p.validate();
    const double pi = std::acos(-1.0);
    const double r_cut = p.tau * std::sqrt(42.0 / (pi * p.lambda));
    auto g = [&](double r1, double r2, double d) {
        const double u3 = detail::disk_union_area(r1 / p.tau, r2 / p.tau, d);
        return std::exp(-p.lambda * u3);
    };
    return detail::robbins_integral(r_cut, g, spec);
}

// E[|Voe|^2]: triple integral of the four-term union-area expression.
inline double second_moment_ce(const SystemParams& p, const QuadSpec& spec = {1e-6, 1e-10, 2000}) {
    p.validate();
    const double pi = std::acos(-1.0);
    const double r_cut = std::sqrt(42.0 / (pi * p.lambda));
    auto g = [&](double r1, double r2, double d) {
        const double uo = detail::disk_union_area(r1, r2, d);
        const double u1 = detail::disk_union_area(r1 / p.tau, r2, d);
        const double u2 = detail::disk_union_area(r1, r2 / p.tau, d);
        const double u3 = detail::disk_union_area(r1 / p.tau, r2 / p.tau, d);
        return std::exp(-p.lambda * uo) - std::exp(-p.lambda * u1) - std::exp(-p.lambda * u2) +
               std::exp(-p.lambda * u3);
    };
    return detail::robbins_integral(r_cut, g, spec);
}

inline RegionAreaStats region_area_stats(UserClass cls, const SystemParams& p,
                                         const QuadSpec& spec = {1e-6, 1e-10, 2000}) {
    const auto [mc, me] = mean_areas(p);
    if (cls == UserClass::cc) return {mc, second_moment_cc(p, spec), cls};
    return {me, second_moment_ce(p, spec), cls};
}

// Moment-matched gamma parameters (Eq.-style: rate gamma1, shape gamma2).
inline GammaFit gamma_fit(const RegionAreaStats& stats) {
    const double var = stats.second_moment - stats.mean * stats.mean;
    if (!(stats.mean > 0.0)) throw std::domain_error("gamma_fit: mean must be > 0");
    if (!(var > 0.0)) throw std::domain_error("gamma_fit: degenerate (variance <= 0)");
    const double gamma1 = stats.mean / var;
    return {gamma1, gamma1 * stats.mean};
}

// Load pmf: zero-truncated Poisson mixed over the gamma area fit,
//   P[N=n] = nu^n g1^g2 / (n! Gamma(g2)) Int a^{n+g2-1} e^{-(nu+g1)a} / (1-e^{-nu a}) da.
// The 1/(1-e^{-nu a}) factor is expanded as sum_k e^{-k nu a}, turning each
// term into a closed-form gamma integral:
//   P[N=n] = nu^n g1^g2 Gamma(n+g2) / (n! Gamma(g2)) sum_{k>=1} (k nu + g1)^{-(n+g2)}.
// n_max = 0 selects the smallest n with cumulative mass > 1-1e-8, capped at 200.
inline LoadPmf load_pmf(const GammaFit& fit, double nu, int n_max = 0) {
    if (!(nu > 0.0)) throw std::domain_error("load_pmf: requires nu > 0");
    if (!(fit.gamma1 > 0.0 && fit.gamma2 > 0.0))
        throw std::domain_error("load_pmf: invalid gamma fit");
    const bool auto_n = n_max <= 0;
    const int cap = auto_n ? 200 : n_max;

    LoadPmf pmf;
    pmf.probs.reserve(64);
    pmf.xi = 0.0;
    double cum = 0.0;
    const double g1 = fit.gamma1, g2 = fit.gamma2;
    const double log_base = std::log(nu + g1);
    for (int n = 1; n <= cap; ++n) {
        const double s = n + g2;
        // series sum normalized to its k=1 term; terms decay like k^{-s}
        double acc = 0.0;
        for (int k = 1; k < 1000000; ++k) {
            const double term = std::exp(-s * (std::log(k * nu + g1) - log_base));
            acc += term;
            const double tail_bound = std::exp(-(s - 1.0) * (std::log(k * nu + g1) - log_base)) *
                                      (nu + g1) / (nu * (s - 1.0));
            if (tail_bound < 1e-12 * acc) break;
        }
        const double log_p = n * std::log(nu) + g2 * std::log(g1) + std::lgamma(s) -
                             std::lgamma(n + 1.0) - std::lgamma(g2) - s * log_base;
        const double prob = std::exp(log_p) * acc;
        pmf.probs.push_back(prob);
        pmf.xi += prob / n;
        cum += prob;
        if (auto_n && cum > 1.0 - 1e-8) break;
    }
    pmf.n_max = static_cast<int>(pmf.probs.size());
    if (1.0 - cum > 1e-8)
        throw TruncationError("load_pmf: tail mass above 1e-8 at n_max; raise n_max");
    return pmf;
}

}  // namespace nomacell
