#pragma once

// Monte Carlo stochastic-geometry oracle. Realizes the typical cell (PPP plus
// a Slivnyak nucleus at the origin), classifies CC/CE users, and estimates
// meta moments/CCDFs, region areas, load histograms, rate CDFs, delay outage,
// and Geo/Geo/1 delays.
//
// Determinism: every realization draws from its own SplitMix64 stream keyed by
// (seed, realization index); accumulation is chunked with a fixed chunk size
// and combined in chunk order, so results are bit-identical for any thread
// count.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <thread>
#include <vector>

#include "nomacell/meta.hpp"
#include "nomacell/params.hpp"
#include "nomacell/rng.hpp"

namespace nomacell {

struct Vec2 {
    double x, y;
};

struct SimConfig {
    std::uint64_t n_realizations = 100000;
    double window_radius = 0.0;  // 0 -> 6/sqrt(lambda)
    std::uint64_t seed = 1;
    std::uint32_t area_samples = 10000;  // hit-or-miss points per realization
    unsigned n_threads = 0;              // 0 -> hardware concurrency

    double window(const SystemParams& p) const {
        return window_radius > 0.0 ? window_radius : 6.0 / std::sqrt(p.lambda);
    }
};

struct NetworkRealization {
    std::vector<Vec2> bs_points;  // interferers; the serving BS at the origin is implicit
    Vec2 user;
    double r_o;
    double r_d;
    UserClass user_class;
    double window_radius;
    int retries;  // pathological-realization regenerations
};

namespace detail {

inline int poisson_count(SplitMix64& rng, double mean) {
    // exponential-spacings method; window means here are ~lambda*pi*W^2 ~ 113
    int n = 0;
    double acc = 0.0;
    while (true) {
        acc -= std::log(rng.next_open());
        if (acc > mean) return n;
        ++n;
    }
}

inline Vec2 uniform_in_disc(SplitMix64& rng, double radius) {
    const double r = radius * std::sqrt(rng.next_double());
    const double phi = 2.0 * std::acos(-1.0) * rng.next_double();
    return {r * std::cos(phi), r * std::sin(phi)};
}

// Zero-truncated Poisson by inverse transform on P(n+1)/P(n) = mean/(n+1).
inline int sample_ztp(SplitMix64& rng, double mean) {
    if (mean < 1e-9) return 1;
    const double u = rng.next_double();
    double term = mean * std::exp(-mean) / (-std::expm1(-mean));
    double cum = term;
    int n = 1;
    const int guard = static_cast<int>(10.0 * mean) + 200;
    while (u > cum && n < guard) {
        ++n;
        term *= mean / n;
        cum += term;
    }
    return n;
}

// Uniform bucket grid over [-W, W]^2 answering nearest-point queries. The
// query expands cell rings until the ring lower bound certifies the running
// minimum; it may return early (and inexactly) once the minimum provably
// drops below `stop`, which is all the cell-membership test needs.
class PointGrid {
  public:
    PointGrid(const std::vector<Vec2>* pts, double extent, double target_cell) : pts_(pts), extent_(extent) {
        n_ = std::max(1, std::min(512, static_cast<int>(std::ceil(2.0 * extent / target_cell))));
        cell_ = 2.0 * extent / n_;
        counts_.assign(static_cast<std::size_t>(n_) * n_ + 1, 0);
        for (const Vec2& p : *pts_) ++counts_[cell_of(p) + 1];
        for (std::size_t i = 1; i < counts_.size(); ++i) counts_[i] += counts_[i - 1];
        order_.resize(pts_->size());
        std::vector<std::uint32_t> cursor(counts_.begin(), counts_.end() - 1);
        for (std::uint32_t i = 0; i < pts_->size(); ++i) order_[cursor[cell_of((*pts_)[i])]++] = i;
    }

    double min_dist(Vec2 q, double stop) const {
        const int qi = coord(q.x), qj = coord(q.y);
        double best2 = std::numeric_limits<double>::infinity();
        const double stop2 = stop * stop;
        for (int ring = 0;; ++ring) {
            if (ring > 0) {
                const double lb = (ring - 1) * cell_;
                if (best2 <= lb * lb) break;
                if (qi - ring < 0 && qi + ring >= n_ && qj - ring < 0 && qj + ring >= n_) break;
            }
            scan_ring(q, qi, qj, ring, best2);
            if (best2 < stop2) return std::sqrt(best2);
        }
        return std::sqrt(best2);
    }

  private:
    void scan_ring(Vec2 q, int qi, int qj, int ring, double& best2) const {
        const int ilo = qi - ring, ihi = qi + ring;
        for (int i = ilo; i <= ihi; ++i) {
            if (i < 0 || i >= n_) continue;
            const bool edge_row = (i == ilo || i == ihi);
            for (int j = qj - ring; j <= qj + ring; ++j) {
                if (!edge_row && j != qj - ring && j != qj + ring) continue;
                if (j < 0 || j >= n_) continue;
                const std::size_t c = static_cast<std::size_t>(i) * n_ + j;
                for (std::uint32_t k = counts_[c]; k < counts_[c + 1]; ++k) {
                    const Vec2& p = (*pts_)[order_[k]];
                    const double dx = p.x - q.x, dy = p.y - q.y;
                    const double d2 = dx * dx + dy * dy;
                    if (d2 < best2) best2 = d2;
                }
            }
        }
    }

    int coord(double v) const {
        const int c = static_cast<int>((v + extent_) / cell_);
        return std::min(std::max(c, 0), n_ - 1);
    }
    std::size_t cell_of(const Vec2& p) const {
        return static_cast<std::size_t>(coord(p.x)) * n_ + coord(p.y);
    }

    const std::vector<Vec2>* pts_;
    double extent_;
    int n_;
    double cell_;
    std::vector<std::uint32_t> counts_;
    std::vector<std::uint32_t> order_;
};

// Deterministic chunked parallel loop; per-chunk states are combined by the
// caller in chunk order.
template <class State, class PerRealization>
inline std::vector<State> run_chunked(std::uint64_t n, std::uint64_t seed, unsigned n_threads,
                                      const PerRealization& body) {
    constexpr std::uint64_t chunk = 1024;
    const std::uint64_t n_chunks = (n + chunk - 1) / chunk;
    std::vector<State> states(n_chunks);
    unsigned hw = n_threads ? n_threads : std::max(1u, std::thread::hardware_concurrency());
    hw = static_cast<unsigned>(std::min<std::uint64_t>(hw, n_chunks));
    std::atomic<std::uint64_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::uint64_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            const std::uint64_t lo = c * chunk, hi = std::min(n, lo + chunk);
            for (std::uint64_t idx = lo; idx < hi; ++idx) {
                SplitMix64 rng = stream_rng(seed, idx);
                body(idx, rng, states[c]);
            }
        }
    };
    if (hw <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(hw);
        for (unsigned t = 0; t < hw; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return states;
}

struct AreaSample {
    double a_cc, a_ce, a_cell;
};

// Hit-or-miss areas of the CC/CE regions over the disc of radius W/2, reusing
// the cell-membership predicate with the tau-scaled classification.
inline AreaSample hit_or_miss_areas(const NetworkRealization& real, const PointGrid& grid,
                                    const SystemParams& p, std::uint32_t samples,
                                    SplitMix64& rng) {
    const double half_w = 0.5 * real.window_radius;
    std::uint32_t cnt_cc = 0, cnt_ce = 0;
    for (std::uint32_t i = 0; i < samples; ++i) {
        const Vec2 v = uniform_in_disc(rng, half_w);
        const double r_o = std::hypot(v.x, v.y);
        const double md = grid.min_dist(v, r_o);
        if (md <= r_o) continue;  // outside the typical cell
        if (r_o <= p.tau * md) {
            ++cnt_cc;
        } else {
            ++cnt_ce;
        }
    }
    const double S = std::acos(-1.0) * half_w * half_w;
    return {S * cnt_cc / samples, S * cnt_ce / samples, S * (cnt_cc + cnt_ce) / samples};
}

}  // namespace detail

// One typical-cell instance: PPP of intensity lambda in the window disc, the
// nucleus at the origin (Slivnyak), and a user drawn uniformly in V_o by
// rejection from the disc of radius window/2 with the cell-membership test.
inline NetworkRealization realize_typical_cell(const SystemParams& p, const SimConfig& cfg,
                                               SplitMix64& rng) {
    const double W = cfg.window(p);
    const double pi = std::acos(-1.0);
    NetworkRealization real;
    real.window_radius = W;
    real.retries = 0;
    while (true) {
        const int n = detail::poisson_count(rng, p.lambda * pi * W * W);
        if (n == 0) {  // pathological: empty window
            ++real.retries;
            continue;
        }
        real.bs_points.clear();
        real.bs_points.reserve(n);
        for (int i = 0; i < n; ++i) real.bs_points.push_back(detail::uniform_in_disc(rng, W));
        const detail::PointGrid grid(&real.bs_points, W, std::sqrt(2.0 / p.lambda));
        while (true) {
            const Vec2 y = detail::uniform_in_disc(rng, 0.5 * W);
            const double r_o = std::hypot(y.x, y.y);
            const double md = grid.min_dist(y, r_o);
            if (md > r_o) {
                real.user = y;
                real.r_o = r_o;
                real.r_d = md;
                real.user_class = r_o <= p.tau * md ? UserClass::cc : UserClass::ce;
                return real;
            }
        }
    }
}

// Per-interferer ratios (r_o/d_x)^alpha; the conditional success probability
// at threshold chi is the product over interferers of 1/(1 + chi q_x), i.e.
// fading averaged analytically, computed in log space.
inline std::vector<double> interference_ratios(const NetworkRealization& real, double alpha) {
    std::vector<double> q;
    q.reserve(real.bs_points.size());
    for (const Vec2& x : real.bs_points) {
        const double d = std::hypot(x.x - real.user.x, x.y - real.user.y);
        q.push_back(std::pow(real.r_o / d, alpha));
    }
    return q;
}

inline double success_prob_from_ratios(const std::vector<double>& q, double chi) {
    double log_p = 0.0;
    for (double v : q) log_p -= std::log1p(chi * v);
    return std::exp(log_p);
}

inline double cond_success_prob(const NetworkRealization& real, double chi, const SystemParams& p) {
    if (!(chi > 0.0)) throw std::domain_error("cond_success_prob: chi > 0");
    return success_prob_from_ratios(interference_ratios(real, p.alpha), chi);
}

// --- meta-distribution estimation -----------------------------------------

// SIR-threshold composites per class; OMA passes the raw betas.
struct ChiPair {
    double chi_cc;
    double chi_ce;
};

struct MetaEstimate {
    double m1_cc = 0, m2_cc = 0, m1_ce = 0, m2_ce = 0;
    double se_m1_cc = 0, se_m1_ce = 0;
    std::uint64_t n_cc = 0, n_ce = 0;
    std::vector<double> ccdf_x;   // 101-point grid on [0, 1]
    std::vector<double> ccdf_cc;  // empirical P[p > x]
    std::vector<double> ccdf_ce;
};

// Estimates meta moments and CCDFs for several threshold pairs over one shared
// set of realizations (the geometry is reused across a theta/scheme grid).
inline std::vector<MetaEstimate> estimate_meta_multi(const SystemParams& p,
                                                     const std::vector<ChiPair>& chis,
                                                     const SimConfig& cfg) {
    p.validate();
    constexpr int nx = 101;
    const std::size_t k = chis.size();
    struct State {
        std::vector<double> s1_cc, s2_cc, s1_ce, s2_ce;  // size k
        std::vector<std::uint64_t> hist_cc, hist_ce;     // size k*(nx+1): buckets of ceil(100 p)
        std::uint64_t n_cc = 0, n_ce = 0;
        bool init = false;
    };
    auto states = detail::run_chunked<State>(
        cfg.n_realizations, cfg.seed, cfg.n_threads,
        [&](std::uint64_t, SplitMix64& rng, State& st) {
            if (!st.init) {
                st.s1_cc.assign(k, 0.0);
                st.s2_cc.assign(k, 0.0);
                st.s1_ce.assign(k, 0.0);
                st.s2_ce.assign(k, 0.0);
                st.hist_cc.assign(k * (nx + 1), 0);
                st.hist_ce.assign(k * (nx + 1), 0);
                st.init = true;
            }
            const NetworkRealization real = realize_typical_cell(p, cfg, rng);
            const auto q = interference_ratios(real, p.alpha);
            const bool cc = real.user_class == UserClass::cc;
            (cc ? st.n_cc : st.n_ce) += 1;
            for (std::size_t i = 0; i < k; ++i) {
                const double chi = cc ? chis[i].chi_cc : chis[i].chi_ce;
                const double ps = success_prob_from_ratios(q, chi);
                auto& s1 = cc ? st.s1_cc : st.s1_ce;
                auto& s2 = cc ? st.s2_cc : st.s2_ce;
                auto& hist = cc ? st.hist_cc : st.hist_ce;
                s1[i] += ps;
                s2[i] += ps * ps;
                // p > x_j for exactly the j below ceil(100 p)
                const int bucket = std::min(nx, static_cast<int>(std::ceil(ps * (nx - 1))));
                ++hist[i * (nx + 1) + bucket];
            }
        });

    std::uint64_t n_cc = 0, n_ce = 0;
    for (const auto& st : states)
        if (st.init) {
            n_cc += st.n_cc;
            n_ce += st.n_ce;
        }
    std::vector<MetaEstimate> out(k);
    for (std::size_t i = 0; i < k; ++i) {
        MetaEstimate& e = out[i];
        e.n_cc = n_cc;
        e.n_ce = n_ce;
        double s1c = 0, s2c = 0, s1e = 0, s2e = 0;
        std::vector<std::uint64_t> hc(nx + 1, 0), he(nx + 1, 0);
        for (const auto& st : states) {
            if (!st.init) continue;
            s1c += st.s1_cc[i];
            s2c += st.s2_cc[i];
            s1e += st.s1_ce[i];
            s2e += st.s2_ce[i];
            for (int j = 0; j <= nx; ++j) {
                hc[j] += st.hist_cc[i * (nx + 1) + j];
                he[j] += st.hist_ce[i * (nx + 1) + j];
            }
        }
        e.m1_cc = n_cc ? s1c / n_cc : 0.0;
        e.m2_cc = n_cc ? s2c / n_cc : 0.0;
        e.m1_ce = n_ce ? s1e / n_ce : 0.0;
        e.m2_ce = n_ce ? s2e / n_ce : 0.0;
        e.se_m1_cc = n_cc ? std::sqrt(std::max(0.0, e.m2_cc - e.m1_cc * e.m1_cc) / n_cc) : 0.0;
        e.se_m1_ce = n_ce ? std::sqrt(std::max(0.0, e.m2_ce - e.m1_ce * e.m1_ce) / n_ce) : 0.0;
        e.ccdf_x.resize(nx);
        e.ccdf_cc.resize(nx);
        e.ccdf_ce.resize(nx);
        std::vector<std::uint64_t> sufc(nx + 2, 0), sufe(nx + 2, 0);
        for (int j = nx; j >= 0; --j) {
            sufc[j] = sufc[j + 1] + hc[j];
            sufe[j] = sufe[j + 1] + he[j];
        }
        for (int j = 0; j < nx; ++j) {
            e.ccdf_x[j] = static_cast<double>(j) / (nx - 1);
            e.ccdf_cc[j] = n_cc ? static_cast<double>(sufc[j + 1]) / n_cc : 0.0;
            e.ccdf_ce[j] = n_ce ? static_cast<double>(sufe[j + 1]) / n_ce : 0.0;
        }
    }
    return out;
}

// Single theta, NOMA composites.
inline MetaEstimate estimate_meta(const SystemParams& p, double theta, const SimConfig& cfg) {
    const ChiPair chi{chi_c(theta, p.beta_c, p.beta_e), chi_e(theta, p.beta_e)};
    return estimate_meta_multi(p, {chi}, cfg)[0];
}

// --- areas and loads -------------------------------------------------------

struct AreaLoadEstimate {
    double mean_cc = 0, mean_ce = 0;
    double second_cc = 0, second_ce = 0;
    double second_cell = 0;  // E[|V_o|^2] sample moment (tau-independent check)
    std::vector<double> load_hist_cc, load_hist_ce;  // index n-1 -> P[N = n]
    // area densities over [0, area_hist_max) in area_hist_bins equal bins
    std::vector<double> area_hist_cc, area_hist_ce;
    double area_hist_max = 0.0;
    std::uint64_t n = 0;

    static constexpr int area_hist_bins = 80;
};

// Per-realization hit-or-miss region areas plus one zero-truncated-Poisson
// load draw per region given the realized areas.
inline AreaLoadEstimate estimate_areas_and_loads(const SystemParams& p, const SimConfig& cfg) {
    p.validate();
    constexpr int hist_max = 512;
    constexpr int abins = AreaLoadEstimate::area_hist_bins;
    const double amax = 4.0 / p.lambda;
    struct State {
        double s_cc = 0, s_ce = 0, s2_cc = 0, s2_ce = 0, s2_cell = 0;
        std::vector<std::uint64_t> hist_cc, hist_ce, ahist_cc, ahist_ce;
        bool init = false;
    };
    auto states = detail::run_chunked<State>(
        cfg.n_realizations, cfg.seed, cfg.n_threads,
        [&](std::uint64_t, SplitMix64& rng, State& st) {
            if (!st.init) {
                st.hist_cc.assign(hist_max, 0);
                st.hist_ce.assign(hist_max, 0);
                st.ahist_cc.assign(abins, 0);
                st.ahist_ce.assign(abins, 0);
                st.init = true;
            }
            const NetworkRealization real = realize_typical_cell(p, cfg, rng);
            const detail::PointGrid grid(&real.bs_points, real.window_radius,
                                         std::sqrt(2.0 / p.lambda));
            const auto area = detail::hit_or_miss_areas(real, grid, p, cfg.area_samples, rng);
            st.s_cc += area.a_cc;
            st.s_ce += area.a_ce;
            st.s2_cc += area.a_cc * area.a_cc;
            st.s2_ce += area.a_ce * area.a_ce;
            st.s2_cell += area.a_cell * area.a_cell;
            const int bc = std::min(abins - 1, static_cast<int>(area.a_cc / amax * abins));
            const int be = std::min(abins - 1, static_cast<int>(area.a_ce / amax * abins));
            ++st.ahist_cc[bc];
            ++st.ahist_ce[be];
            const int n_cc = detail::sample_ztp(rng, p.nu * area.a_cc);
            const int n_ce = detail::sample_ztp(rng, p.nu * area.a_ce);
            ++st.hist_cc[std::min(n_cc, hist_max) - 1];
            ++st.hist_ce[std::min(n_ce, hist_max) - 1];
        });

    AreaLoadEstimate e;
    e.n = cfg.n_realizations;
    e.area_hist_max = amax;
    e.load_hist_cc.assign(hist_max, 0.0);
    e.load_hist_ce.assign(hist_max, 0.0);
    e.area_hist_cc.assign(abins, 0.0);
    e.area_hist_ce.assign(abins, 0.0);
    double s_cc = 0, s_ce = 0, s2_cc = 0, s2_ce = 0, s2_cell = 0;
    for (const auto& st : states) {
        if (!st.init) continue;
        s_cc += st.s_cc;
        s_ce += st.s_ce;
        s2_cc += st.s2_cc;
        s2_ce += st.s2_ce;
        s2_cell += st.s2_cell;
        for (int j = 0; j < hist_max; ++j) {
            e.load_hist_cc[j] += static_cast<double>(st.hist_cc[j]);
            e.load_hist_ce[j] += static_cast<double>(st.hist_ce[j]);
        }
        for (int j = 0; j < abins; ++j) {
            e.area_hist_cc[j] += static_cast<double>(st.ahist_cc[j]);
            e.area_hist_ce[j] += static_cast<double>(st.ahist_ce[j]);
        }
    }
    const double n = static_cast<double>(e.n);
    e.mean_cc = s_cc / n;
    e.mean_ce = s_ce / n;
    e.second_cc = s2_cc / n;
    e.second_ce = s2_ce / n;
    e.second_cell = s2_cell / n;
    for (int j = 0; j < hist_max; ++j) {
        e.load_hist_cc[j] /= n;
        e.load_hist_ce[j] /= n;
    }
    const double bin_w = amax / abins;
    for (int j = 0; j < abins; ++j) {  // normalize to densities
        e.area_hist_cc[j] /= n * bin_w;
        e.area_hist_ce[j] /= n * bin_w;
    }
    return e;
}

// --- rate and delay curves -------------------------------------------------

struct RateDelayEstimate {
    std::vector<double> rate_cdf_cc, rate_cdf_ce;    // P[rate <= grid value]
    std::vector<double> delay_out_cc, delay_out_ce;  // P[mean delay >= grid value]
    std::uint64_t n_cc = 0, n_ce = 0;
};

// Couples the load and the success probability through the SAME realization
// (area from the realized cell, p from the realized interferers), so the
// comparison against the analytic curves also quantifies the independence
// assumption's error.
inline RateDelayEstimate estimate_rate_delay(const SystemParams& p, Scheme scheme,
                                             const TrafficParams& traffic, const SimConfig& cfg,
                                             const std::vector<double>& rate_grid_cc,
                                             const std::vector<double>& rate_grid_ce,
                                             const std::vector<double>& delay_grid_cc,
                                             const std::vector<double>& delay_grid_ce) {
    p.validate();
    traffic.validate();
    const double chi_cc_v = scheme == Scheme::noma ? chi_c(p.theta, p.beta_c, p.beta_e) : p.beta_c;
    const double chi_ce_v = scheme == Scheme::noma ? chi_e(p.theta, p.beta_e) : p.beta_e;
    const double frac_cc = scheme == Scheme::noma ? 1.0 : p.eta;
    const double frac_ce = scheme == Scheme::noma ? 1.0 : 1.0 - p.eta;
    const double w_cc = std::log2(1.0 + p.beta_c), w_ce = std::log2(1.0 + p.beta_e);

    struct State {
        std::vector<std::uint64_t> rate_cc, rate_ce, delay_cc, delay_ce;
        std::uint64_t n_cc = 0, n_ce = 0;
        bool init = false;
    };
    auto states = detail::run_chunked<State>(
        cfg.n_realizations, cfg.seed, cfg.n_threads,
        [&](std::uint64_t, SplitMix64& rng, State& st) {
            if (!st.init) {
                st.rate_cc.assign(rate_grid_cc.size(), 0);
                st.rate_ce.assign(rate_grid_ce.size(), 0);
                st.delay_cc.assign(delay_grid_cc.size(), 0);
                st.delay_ce.assign(delay_grid_ce.size(), 0);
                st.init = true;
            }
            const NetworkRealization real = realize_typical_cell(p, cfg, rng);
            const detail::PointGrid grid(&real.bs_points, real.window_radius,
                                         std::sqrt(2.0 / p.lambda));
            const auto area = detail::hit_or_miss_areas(real, grid, p, cfg.area_samples, rng);
            const bool cc = real.user_class == UserClass::cc;
            const double ps = cond_success_prob(real, cc ? chi_cc_v : chi_ce_v, p);
            const double a = cc ? area.a_cc : area.a_ce;
            const int n_users = detail::sample_ztp(rng, p.nu * a);
            const double mu = (cc ? frac_cc : frac_ce) * ps / n_users;
            const double rate = mu * (cc ? w_cc : w_ce);
            const double arrival = cc ? traffic.arrival_c : traffic.arrival_e;
            const bool unstable = mu <= arrival;
            const double delay = unstable ? 0.0 : (1.0 - arrival) / (mu - arrival);
            const auto& rgrid = cc ? rate_grid_cc : rate_grid_ce;
            const auto& dgrid = cc ? delay_grid_cc : delay_grid_ce;
            auto& rcnt = cc ? st.rate_cc : st.rate_ce;
            auto& dcnt = cc ? st.delay_cc : st.delay_ce;
            (cc ? st.n_cc : st.n_ce) += 1;
            for (std::size_t j = 0; j < rgrid.size(); ++j)
                if (rate <= rgrid[j]) ++rcnt[j];
            for (std::size_t j = 0; j < dgrid.size(); ++j)
                if (unstable || delay >= dgrid[j]) ++dcnt[j];
        });

    RateDelayEstimate e;
    e.rate_cdf_cc.assign(rate_grid_cc.size(), 0.0);
    e.rate_cdf_ce.assign(rate_grid_ce.size(), 0.0);
    e.delay_out_cc.assign(delay_grid_cc.size(), 0.0);
    e.delay_out_ce.assign(delay_grid_ce.size(), 0.0);
    for (const auto& st : states) {
        if (!st.init) continue;
        e.n_cc += st.n_cc;
        e.n_ce += st.n_ce;
        for (std::size_t j = 0; j < e.rate_cdf_cc.size(); ++j) e.rate_cdf_cc[j] += st.rate_cc[j];
        for (std::size_t j = 0; j < e.rate_cdf_ce.size(); ++j) e.rate_cdf_ce[j] += st.rate_ce[j];
        for (std::size_t j = 0; j < e.delay_out_cc.size(); ++j) e.delay_out_cc[j] += st.delay_cc[j];
        for (std::size_t j = 0; j < e.delay_out_ce.size(); ++j) e.delay_out_ce[j] += st.delay_ce[j];
    }
    for (auto& v : e.rate_cdf_cc) v /= std::max<std::uint64_t>(e.n_cc, 1);
    for (auto& v : e.rate_cdf_ce) v /= std::max<std::uint64_t>(e.n_ce, 1);
    for (auto& v : e.delay_out_cc) v /= std::max<std::uint64_t>(e.n_cc, 1);
    for (auto& v : e.delay_out_ce) v /= std::max<std::uint64_t>(e.n_ce, 1);
    return e;
}

// --- Geo/Geo/1 --------------------------------------------------------------

// Discrete-time single-server queue: Bernoulli(arrival) arrivals at slot end,
// geometric(mu) service from the following slot; returns the mean sojourn time
// in slots over the departed packets. Stable operation requires mu > arrival.
inline double queue_sim(double mu, double arrival, std::uint64_t n_slots, SplitMix64& rng) {
    if (!(mu > 0.0 && mu <= 1.0) || !(arrival >= 0.0 && arrival < 1.0))
        throw std::domain_error("queue_sim: mu in (0,1], arrival in [0,1)");
    std::vector<std::uint64_t> queue;  // arrival slots, FIFO ring
    std::size_t head = 0;
    double total = 0.0;
    std::uint64_t served = 0;
    for (std::uint64_t slot = 1; slot <= n_slots; ++slot) {
        if (head < queue.size() && rng.next_double() < mu) {
            total += static_cast<double>(slot - queue[head]);
            ++head;
            ++served;
            if (head > 4096 && head * 2 > queue.size()) {
                queue.erase(queue.begin(), queue.begin() + static_cast<std::ptrdiff_t>(head));
                head = 0;
            }
        }
        if (rng.next_double() < arrival) queue.push_back(slot);
    }
    return served ? total / static_cast<double>(served) : 0.0;
}

}  // namespace nomacell
