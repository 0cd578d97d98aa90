#pragma once

// Meta-distribution moments for CC/CE users under NOMA and OMA, the chi
// threshold composites, and beta moment-matched approximations.
//
// The b-th moment shares one kernel for both schemes:
//   M_b = rho^2/|dom| * Int_dom (rho + v Z_b(chi, v))^-2 (1 + chi v^{alpha/2})^-b dv
// with dom = (0, tau^2) for CC, (tau^2, 1) for CE, and
//   Z_b(chi, v) = chi^delta Int_{chi^-delta / v}^inf [1 - (1 + t^{-1/delta})^-b] dt.
// OMA is the same kernel evaluated at the raw SIR threshold.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <mutex>
#include <unordered_map>

#include "nomacell/numerics.hpp"
#include "nomacell/params.hpp"

namespace nomacell {

struct MetaMoments {
    double m1;
    double m2;
    UserClass user_class;
    Scheme scheme;
};

// kappa1/kappa2 of the moment-matched beta; a near-deterministic moment pair
// is flagged and represented as a point mass at m1 rather than rejected.
struct BetaFit {
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    bool degenerate = false;
    double mass = 0.0;
};

inline double theta_nc(double beta_e) {
    if (!(beta_e > 0.0)) throw std::domain_error("theta_nc: requires beta_e > 0");
    return 1.0 / (1.0 + beta_e);
}

inline double chi_e(double theta, double beta_e) {
    if (!(theta > 0.0) || theta >= theta_nc(beta_e))
        throw InfeasibleError("chi_e: requires 0 < theta < 1/(1+beta_e)");
    return beta_e / (1.0 - theta * (1.0 + beta_e));
}

inline double chi_c(double theta, double beta_c, double beta_e) {
    if (!(beta_c > 0.0)) throw std::domain_error("chi_c: requires beta_c > 0");
    return std::max(beta_c / theta, chi_e(theta, beta_e));
}

inline double chi_of(UserClass cls, double theta, const SystemParams& p) {
    return cls == UserClass::cc ? chi_c(theta, p.beta_c, p.beta_e) : chi_e(theta, p.beta_e);
}

// Z_b(chi, a): Laplace-functional exponent of the interference beyond the
// dominant interferer, in the squared-distance-ratio variable a = (R_o/R_d)^2.
inline double z_b(double chi, double a, double b, double delta, const QuadSpec& spec = {}) {
    if (!(chi > 0.0)) throw std::domain_error("z_b: requires chi > 0");
    if (!(a > 0.0 && a <= 1.0)) throw std::domain_error("z_b: requires a in (0, 1]");
    if (!(b >= 0.0)) throw std::domain_error("z_b: requires b >= 0");
    if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("z_b: requires 0 < delta < 1");
    if (b == 0.0) return 0.0;
    const double chi_d = std::pow(chi, delta);
    const double lo = 1.0 / (chi_d * a);
    const double inv_delta = 1.0 / delta;
    auto f = [=](double t) { return -std::expm1(-b * std::log1p(std::pow(t, -inv_delta))); };
    return chi_d * quad_semi_infinite(f, lo, spec);
}

// Shared moment kernel (Theorem/Corollary pair). Independent of lambda.
inline double meta_moment(UserClass cls, double chi, double b, const SystemParams& p,
                          const QuadSpec& spec = {}) {
    p.validate();
    if (!(chi > 0.0)) throw std::domain_error("meta_moment: requires chi > 0");
    if (!(b >= 0.0)) throw std::domain_error("meta_moment: requires b >= 0");
    const double t2 = p.tau * p.tau;
    const double lo = cls == UserClass::cc ? 0.0 : t2;
    const double hi = cls == UserClass::cc ? t2 : 1.0;
    const double half_alpha = 0.5 * p.alpha;
    const double delta = p.delta();
    QuadSpec inner = spec;
    inner.abs_tol = std::min(spec.abs_tol, 1e-12);
    auto kernel = [&](double v) {
        const double z = b == 0.0 ? 0.0 : z_b(chi, v, b, delta, inner);
        const double base = p.rho + v * z;
        return 1.0 / (base * base * std::pow(1.0 + chi * std::pow(v, half_alpha), b));
    };
    const double integral = quad_finite(kernel, lo, hi, spec);
    return p.rho * p.rho / (hi - lo) * integral;
}

inline double moment_noma(UserClass cls, double b, double theta, const SystemParams& p,
                          const QuadSpec& spec = {}) {
    return meta_moment(cls, chi_of(cls, theta, p), b, p, spec);
}

inline double moment_oma(UserClass cls, double b, const SystemParams& p,
                         const QuadSpec& spec = {}) {
    return meta_moment(cls, p.beta(cls), b, p, spec);
}

namespace detail {

struct MomentKey {
    UserClass cls;
    double chi, b, alpha, tau, rho, rel_tol;
    bool operator==(const MomentKey&) const = default;
};

struct MomentKeyHash {
    static std::uint64_t mix(std::uint64_t h, double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        h ^= bits + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
    std::size_t operator()(const MomentKey& k) const {
        std::uint64_t h = k.cls == UserClass::cc ? 0x1234 : 0x4321;
        for (double v : {k.chi, k.b, k.alpha, k.tau, k.rho, k.rel_tol}) h = mix(h, v);
        return static_cast<std::size_t>(h);
    }
};

}  // namespace detail

// Memoized kernel evaluation: RA sweeps and bisections revisit identical
// (class, chi, b) points many times. The lock guards the map only; quadrature
// runs outside it, so concurrent calls never block on other keys.
inline double meta_moment_cached(UserClass cls, double chi, double b, const SystemParams& p,
                                 const QuadSpec& spec = {}) {
    static std::unordered_map<detail::MomentKey, double, detail::MomentKeyHash> cache;
    static std::mutex mtx;
    const detail::MomentKey key{cls, chi, b, p.alpha, p.tau, p.rho, spec.rel_tol};
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const double value = meta_moment(cls, chi, b, p, spec);
    {
        std::lock_guard<std::mutex> lock(mtx);
        cache.emplace(key, value);
    }
    return value;
}

// Moment-matched beta parameters (kappa_1s, kappa_2s).
inline BetaFit beta_fit(double m1, double m2) {
    constexpr double eps = 1e-12;
    if (!(m1 >= 0.0 && m1 <= 1.0 && m2 >= 0.0))
        throw std::domain_error("beta_fit: moments must be probabilities");
    if (m1 <= eps || m1 >= 1.0 - eps || m2 - m1 * m1 <= eps || m1 - m2 <= eps)
        return {0.0, 0.0, true, m1};
    const double kappa2 = (m1 - m2) * (1.0 - m1) / (m2 - m1 * m1);
    const double kappa1 = m1 * kappa2 / (1.0 - m1);
    return {kappa1, kappa2, false, m1};
}

inline BetaFit beta_fit(const MetaMoments& m) { return beta_fit(m.m1, m.m2); }

// Meta-distribution CDF approximation I(min(x,1); kappa1, kappa2), with the
// degenerate fit as a step at the mass point. Arguments above 1 are legal
// (clamped), matching the min(., 1) in the rate/delay theorems.
inline double meta_cdf_clamped(double x, const BetaFit& fit) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    if (fit.degenerate) return x >= fit.mass ? 1.0 : 0.0;
    return reg_inc_beta(x, fit.kappa1, fit.kappa2);
}

// Approximate meta CCDF: P[conditional success probability > x].
inline double meta_ccdf(double x, const BetaFit& fit) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("meta_ccdf: x in [0,1]");
    return 1.0 - meta_cdf_clamped(x, fit);
}

}  // namespace nomacell
