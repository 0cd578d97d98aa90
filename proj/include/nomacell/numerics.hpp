#pragma once

// Shared special functions, adaptive quadrature and 1-D searches used by the
// analytical modules. All functions are pure; safe to call concurrently.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "nomacell/common.hpp"

namespace nomacell {

struct QuadSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw std::invalid_argument("QuadSpec: tolerances must be > 0");
        if (max_subdivisions < 1)
            throw std::invalid_argument("QuadSpec: max_subdivisions must be >= 1");
    }
};

inline double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma: requires x > 0");
    return std::lgamma(x);
}

namespace detail {

// Continued fraction for the incomplete beta (Lentz's method).
inline double beta_cont_frac(double a, double b, double x) {
    constexpr int max_iter = 300;
    constexpr double eps = 3e-16;
    const double tiny = std::numeric_limits<double>::min() / eps;

    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) return h;
    }
    return h;  // converged to machine precision for all arguments produced by the fits
}

}  // namespace detail

// Regularized incomplete beta function I(x; a, b).
inline double reg_inc_beta(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("reg_inc_beta: requires a, b > 0");
    if (!(x >= 0.0) || !(x <= 1.0)) throw std::domain_error("reg_inc_beta: requires x in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    // symmetry switch keeps the continued fraction in its fast-converging region
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * detail::beta_cont_frac(a, b, x) / a;
    return 1.0 - front * detail::beta_cont_frac(b, a, 1.0 - x) / b;
}

namespace detail {

// Gauss-Kronrod 7-15 pair on [-1, 1] (QUADPACK abscissae/weights).
inline constexpr double gk_nodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double gk_wk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double gk_wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
inline void gk15(const F& f, double lo, double hi, double& integral, double& err) {
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    const double fc = f(c);
    double res_k = gk_wk[7] * fc;
    double res_g = gk_wg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double x = h * gk_nodes[i];
        const double fs = f(c - x) + f(c + x);
        res_k += gk_wk[i] * fs;
        if (i % 2 == 1) res_g += gk_wg[i / 2] * fs;
    }
    integral = res_k * h;
    err = std::fabs((res_k - res_g) * h);
}

struct QuadSegment {
    double lo, hi, integral, err;
};

}  // namespace detail

// Globally adaptive Gauss-Kronrod quadrature over [lo, hi]: repeatedly bisect
// the segment with the largest error estimate until the global estimate meets
// the tolerance.
template <class F>
inline double quad_finite(const F& f, double lo, double hi, const QuadSpec& spec = {}) {
    spec.validate();
    if (!(lo <= hi)) throw std::invalid_argument("quad_finite: requires lo <= hi");
    if (lo == hi) return 0.0;

    std::vector<detail::QuadSegment> segs;
    segs.reserve(64);
    double integral, err;
    detail::gk15(f, lo, hi, integral, err);
    segs.push_back({lo, hi, integral, err});
    double total = integral, total_err = err;

    for (int iter = 0; iter < spec.max_subdivisions; ++iter) {
        if (total_err <= std::max(spec.abs_tol, spec.rel_tol * std::fabs(total))) return total;
        std::size_t worst = 0;
        for (std::size_t i = 1; i < segs.size(); ++i)
            if (segs[i].err > segs[worst].err) worst = i;
        const detail::QuadSegment seg = segs[worst];
        const double mid = 0.5 * (seg.lo + seg.hi);
        if (mid <= seg.lo || mid >= seg.hi) return total;  // interval at machine resolution
        detail::QuadSegment left{seg.lo, mid, 0, 0}, right{mid, seg.hi, 0, 0};
        detail::gk15(f, left.lo, left.hi, left.integral, left.err);
        detail::gk15(f, right.lo, right.hi, right.integral, right.err);
        total += left.integral + right.integral - seg.integral;
        total_err += left.err + right.err - seg.err;
        segs[worst] = left;
        segs.push_back(right);
    }
    if (total_err <= std::max(spec.abs_tol, spec.rel_tol * std::fabs(total))) return total;
    throw QuadratureError("quad_finite: no convergence after max_subdivisions");
}

// Integral over [lo, inf) via t = lo + s/(1-s), s in [0, 1). The Kronrod rule
// never evaluates the endpoints, so integrable endpoint behavior is handled by
// adaptive refinement.
template <class F>
inline double quad_semi_infinite(const F& f, double lo, const QuadSpec& spec = {}) {
    auto g = [&](double s) {
        const double om = 1.0 - s;
        return f(lo + s / om) / (om * om);
    };
    return quad_finite(g, 0.0, 1.0, spec);
}

// Bisection on [lo, hi]; returns nullopt when f does not change sign (used
// upstream to signal RA infeasibility rather than as an error).
template <class F>
inline std::optional<double> find_root(const F& f, double lo, double hi, double tol) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) return std::nullopt;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

// Golden-section search for the maximum of a unimodal f on [lo, hi].
// For non-unimodal f the result is a local maximum.
template <class F>
inline std::pair<double, double> maximize_unimodal(const F& f, double lo, double hi, double tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
        if (x1 >= x2) break;
    }
    const double xm = 0.5 * (a + b);
    return {xm, f(xm)};
}

}  // namespace nomacell
