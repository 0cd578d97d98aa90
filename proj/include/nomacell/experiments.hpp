#pragma once

// Experiment runner: reproduces the analysis figures as CSV data plus a JSON
// run manifest. Configuration comes in as JSON (dB thresholds converted to
// linear here, nowhere else); every run is reproducible from its manifest.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>
#include <vector>

#include "nomacell/csv.hpp"
#include "nomacell/nomacell.hpp"
#include "nomacell/validation.hpp"
#include "nomacell/version.hpp"

namespace nomacell {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SweepSpec {
    std::string variable;  // theta | eta | tau | nu | threshold
    std::vector<double> grid;
};

struct ExperimentConfig {
    std::string experiment;
    SystemParams params;
    TrafficParams traffic;
    SimConfig sim;
    SweepSpec sweep;
    std::string output_dir = ".";
    double validation_scale = 1.0;  // validate experiment only
};

inline const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{
        "moments-sweep", "meta-ccdf",    "area-dist", "load-pmf", "rate-outage",
        "delay-outage",  "rate-region",  "ra-p1",     "ra-p2",    "validate"};
    return names;
}

namespace detail {

template <class T>
T field_or(const nlohmann::json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
}

inline void expect_known_keys(const nlohmann::json& j, const std::vector<std::string>& known,
                              const std::string& section) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw ConfigError("unknown config field '" + section + "." + it.key() + "'");
    }
}

}  // namespace detail

inline ExperimentConfig config_from_json(const nlohmann::json& j, const std::string& experiment) {
    if (std::find(experiment_names().begin(), experiment_names().end(), experiment) ==
        experiment_names().end())
        throw ConfigError("unknown experiment '" + experiment + "'");
    ExperimentConfig cfg;
    cfg.experiment = experiment;
    detail::expect_known_keys(
        j, {"params", "traffic", "sim", "sweep", "output_dir", "validation_scale"}, "");

    if (j.contains("params")) {
        const auto& p = j.at("params");
        detail::expect_known_keys(p,
                                  {"lambda", "nu", "alpha", "tau", "beta_c_db", "beta_e_db",
                                   "theta", "eta"},
                                  "params");
        cfg.params.lambda = detail::field_or(p, "lambda", cfg.params.lambda);
        cfg.params.nu = detail::field_or(p, "nu", cfg.params.nu);
        cfg.params.alpha = detail::field_or(p, "alpha", cfg.params.alpha);
        cfg.params.tau = detail::field_or(p, "tau", cfg.params.tau);
        // the single dB -> linear conversion point
        cfg.params.beta_c = db_to_linear(detail::field_or(p, "beta_c_db", 3.0));
        cfg.params.beta_e = db_to_linear(detail::field_or(p, "beta_e_db", -3.0));
        cfg.params.theta = detail::field_or(p, "theta", cfg.params.theta);
        cfg.params.eta = detail::field_or(p, "eta", cfg.params.eta);
    }
    if (j.contains("traffic")) {
        const auto& t = j.at("traffic");
        detail::expect_known_keys(t,
                                  {"rate_floor_c", "rate_floor_e", "arrival_c", "arrival_e",
                                   "delay_thresh_c", "delay_thresh_e", "outage_cap_c",
                                   "outage_cap_e", "ec_floor_c", "ec_floor_e"},
                                  "traffic");
        auto& tr = cfg.traffic;
        tr.rate_floor_c = detail::field_or(t, "rate_floor_c", tr.rate_floor_c);
        tr.rate_floor_e = detail::field_or(t, "rate_floor_e", tr.rate_floor_e);
        tr.arrival_c = detail::field_or(t, "arrival_c", tr.arrival_c);
        tr.arrival_e = detail::field_or(t, "arrival_e", tr.arrival_e);
        tr.delay_thresh_c = detail::field_or(t, "delay_thresh_c", tr.delay_thresh_c);
        tr.delay_thresh_e = detail::field_or(t, "delay_thresh_e", tr.delay_thresh_e);
        tr.outage_cap_c = detail::field_or(t, "outage_cap_c", tr.outage_cap_c);
        tr.outage_cap_e = detail::field_or(t, "outage_cap_e", tr.outage_cap_e);
        tr.ec_floor_c = detail::field_or(t, "ec_floor_c", tr.ec_floor_c);
        tr.ec_floor_e = detail::field_or(t, "ec_floor_e", tr.ec_floor_e);
    }
    if (j.contains("sim")) {
        const auto& s = j.at("sim");
        detail::expect_known_keys(
            s, {"n_realizations", "window_radius", "seed", "area_samples", "n_threads"}, "sim");
        cfg.sim.n_realizations = detail::field_or<std::uint64_t>(s, "n_realizations", cfg.sim.n_realizations);
        cfg.sim.window_radius = detail::field_or(s, "window_radius", cfg.sim.window_radius);
        cfg.sim.seed = detail::field_or<std::uint64_t>(s, "seed", cfg.sim.seed);
        cfg.sim.area_samples = detail::field_or<std::uint32_t>(s, "area_samples", cfg.sim.area_samples);
        cfg.sim.n_threads = detail::field_or<unsigned>(s, "n_threads", cfg.sim.n_threads);
    }
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        detail::expect_known_keys(s, {"variable", "grid"}, "sweep");
        cfg.sweep.variable = detail::field_or<std::string>(s, "variable", "");
        cfg.sweep.grid = detail::field_or(s, "grid", std::vector<double>{});
        for (std::size_t i = 1; i < cfg.sweep.grid.size(); ++i)
            if (!(cfg.sweep.grid[i] > cfg.sweep.grid[i - 1]))
                throw ConfigError("sweep.grid must be strictly increasing");
        static const std::vector<std::string> vars{"theta", "eta", "tau", "nu", "threshold", ""};
        if (std::find(vars.begin(), vars.end(), cfg.sweep.variable) == vars.end())
            throw ConfigError("sweep.variable must be one of theta|eta|tau|nu|threshold");
    }
    cfg.output_dir = detail::field_or<std::string>(j, "output_dir", cfg.output_dir);
    cfg.validation_scale = detail::field_or(j, "validation_scale", cfg.validation_scale);
    try {
        cfg.params.validate();
        cfg.traffic.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

// --set key.path=value overrides on the raw JSON tree
inline void apply_override(nlohmann::json& j, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key.path=value: " + assignment);
    const std::string path = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);
    nlohmann::json* node = &j;
    std::size_t pos = 0;
    while (true) {
        const auto dot = path.find('.', pos);
        const std::string key = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
        if (key.empty()) throw ConfigError("bad --set path: " + path);
        if (dot == std::string::npos) {
            nlohmann::json parsed = nlohmann::json::parse(value, nullptr, false);
            (*node)[key] = parsed.is_discarded() ? nlohmann::json(value) : parsed;
            return;
        }
        node = &(*node)[key];
        pos = dot + 1;
    }
}

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["params"] = {{"lambda", cfg.params.lambda},
                   {"nu", cfg.params.nu},
                   {"alpha", cfg.params.alpha},
                   {"tau", cfg.params.tau},
                   {"beta_c_db", linear_to_db(cfg.params.beta_c)},
                   {"beta_e_db", linear_to_db(cfg.params.beta_e)},
                   {"theta", cfg.params.theta},
                   {"eta", cfg.params.eta}};
    j["traffic"] = {{"rate_floor_c", cfg.traffic.rate_floor_c},
                    {"rate_floor_e", cfg.traffic.rate_floor_e},
                    {"arrival_c", cfg.traffic.arrival_c},
                    {"arrival_e", cfg.traffic.arrival_e},
                    {"delay_thresh_c", cfg.traffic.delay_thresh_c},
                    {"delay_thresh_e", cfg.traffic.delay_thresh_e},
                    {"outage_cap_c", cfg.traffic.outage_cap_c},
                    {"outage_cap_e", cfg.traffic.outage_cap_e},
                    {"ec_floor_c", cfg.traffic.ec_floor_c},
                    {"ec_floor_e", cfg.traffic.ec_floor_e}};
    j["sim"] = {{"n_realizations", cfg.sim.n_realizations},
                {"window_radius", cfg.sim.window_radius},
                {"seed", cfg.sim.seed},
                {"area_samples", cfg.sim.area_samples},
                {"n_threads", cfg.sim.n_threads}};
    j["sweep"] = {{"variable", cfg.sweep.variable}, {"grid", cfg.sweep.grid}};
    j["output_dir"] = cfg.output_dir;
    j["validation_scale"] = cfg.validation_scale;
    return j;
}

namespace detail {

inline std::string out_path(const ExperimentConfig& cfg, const std::string& file) {
    return (std::filesystem::path(cfg.output_dir) / file).string();
}

inline std::vector<double> default_theta_grid(const SystemParams& p, int n) {
    std::vector<double> g;
    const double tnc = theta_nc(p.beta_e);
    for (int i = 1; i <= n; ++i) g.push_back(tnc * i / (n + 1.0));
    return g;
}

inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> g;
    for (int i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * i / (n - 1.0));
    return g;
}

struct RegionModels {
    GammaFit gfit_c, gfit_e;
    LoadPmf load_c, load_e;
    RegionAreaStats stats_c, stats_e;
};

inline RegionModels region_models(const SystemParams& p, const QuadSpec& spec) {
    RegionModels m;
    m.stats_c = region_area_stats(UserClass::cc, p, spec);
    m.stats_e = region_area_stats(UserClass::ce, p, spec);
    m.gfit_c = gamma_fit(m.stats_c);
    m.gfit_e = gamma_fit(m.stats_e);
    m.load_c = load_pmf(m.gfit_c, p.nu);
    m.load_e = load_pmf(m.gfit_e, p.nu);
    return m;
}

inline BetaFit moment_fit(UserClass cls, double chi, const SystemParams& p, const QuadSpec& spec) {
    return beta_fit(meta_moment_cached(cls, chi, 1.0, p, spec),
                    meta_moment_cached(cls, chi, 2.0, p, spec));
}

// --- individual experiments ----------------------------------------------

inline std::vector<std::string> run_moments_sweep(const ExperimentConfig& cfg) {
    const auto& p = cfg.params;
    const QuadSpec quad{1e-8, 1e-12, 4000};
    std::vector<double> thetas =
        cfg.sweep.grid.empty() ? default_theta_grid(p, 13) : cfg.sweep.grid;
    const double tnc = theta_nc(p.beta_e);

    std::vector<ChiPair> chis;
    std::vector<std::size_t> sim_index(thetas.size(), SIZE_MAX);
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        if (thetas[i] > 0.0 && thetas[i] < tnc) {
            sim_index[i] = chis.size();
            chis.push_back({chi_c(thetas[i], p.beta_c, p.beta_e), chi_e(thetas[i], p.beta_e)});
        }
    }
    chis.push_back({p.beta_c, p.beta_e});  // OMA
    const auto est = estimate_meta_multi(p, chis, cfg.sim);

    CsvWriter noma(out_path(cfg, "moments_noma.csv"),
                   {"theta", "m1_cc_analytic", "m2_cc_analytic", "m1_ce_analytic",
                    "m2_ce_analytic", "m1_cc_sim", "m2_cc_sim", "m1_ce_sim", "m2_ce_sim"});
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        if (sim_index[i] == SIZE_MAX) {  // past the necessary condition: everything is zero
            noma.row(std::vector<double>{thetas[i], 0, 0, 0, 0, 0, 0, 0, 0});
            continue;
        }
        const auto& ch = chis[sim_index[i]];
        const auto& e = est[sim_index[i]];
        noma.row({thetas[i], meta_moment_cached(UserClass::cc, ch.chi_cc, 1.0, p, quad),
                  meta_moment_cached(UserClass::cc, ch.chi_cc, 2.0, p, quad),
                  meta_moment_cached(UserClass::ce, ch.chi_ce, 1.0, p, quad),
                  meta_moment_cached(UserClass::ce, ch.chi_ce, 2.0, p, quad), e.m1_cc, e.m2_cc,
                  e.m1_ce, e.m2_ce});
    }
    CsvWriter oma(out_path(cfg, "moments_oma.csv"),
                  {"m1_cc_analytic", "m2_cc_analytic", "m1_ce_analytic", "m2_ce_analytic",
                   "m1_cc_sim", "m2_cc_sim", "m1_ce_sim", "m2_ce_sim"});
    const auto& eo = est.back();
    oma.row({meta_moment_cached(UserClass::cc, p.beta_c, 1.0, p, quad),
             meta_moment_cached(UserClass::cc, p.beta_c, 2.0, p, quad),
             meta_moment_cached(UserClass::ce, p.beta_e, 1.0, p, quad),
             meta_moment_cached(UserClass::ce, p.beta_e, 2.0, p, quad), eo.m1_cc, eo.m2_cc,
             eo.m1_ce, eo.m2_ce});
    return {"moments_noma.csv", "moments_oma.csv"};
}

inline std::vector<std::string> run_meta_ccdf(const ExperimentConfig& cfg) {
    const auto& p = cfg.params;
    const QuadSpec quad{1e-8, 1e-12, 4000};
    const std::vector<ChiPair> chis{{chi_c(p.theta, p.beta_c, p.beta_e), chi_e(p.theta, p.beta_e)},
                                    {p.beta_c, p.beta_e}};
    const auto est = estimate_meta_multi(p, chis, cfg.sim);
    const BetaFit noma_cc = moment_fit(UserClass::cc, chis[0].chi_cc, p, quad);
    const BetaFit noma_ce = moment_fit(UserClass::ce, chis[0].chi_ce, p, quad);
    const BetaFit oma_cc = moment_fit(UserClass::cc, p.beta_c, p, quad);
    const BetaFit oma_ce = moment_fit(UserClass::ce, p.beta_e, p, quad);

    CsvWriter out(out_path(cfg, "meta_ccdf.csv"),
                  {"x", "ccdf_beta_noma_cc", "ccdf_sim_noma_cc", "ccdf_beta_noma_ce",
                   "ccdf_sim_noma_ce", "ccdf_beta_oma_cc", "ccdf_sim_oma_cc", "ccdf_beta_oma_ce",
                   "ccdf_sim_oma_ce"});
    for (std::size_t i = 0; i < est[0].ccdf_x.size(); ++i) {
        const double x = est[0].ccdf_x[i];
        out.row({x, meta_ccdf(x, noma_cc), est[0].ccdf_cc[i], meta_ccdf(x, noma_ce),
                 est[0].ccdf_ce[i], meta_ccdf(x, oma_cc), est[1].ccdf_cc[i],
                 meta_ccdf(x, oma_ce), est[1].ccdf_ce[i]});
    }
    return {"meta_ccdf.csv"};
}

inline std::vector<std::string> run_area_dist(const ExperimentConfig& cfg) {
    const auto& p = cfg.params;
    const auto models = region_models(p, QuadSpec{1e-7, 1e-11, 4000});
    const auto est = estimate_areas_and_loads(p, cfg.sim);

    auto gamma_pdf = [](const GammaFit& f, double a) {
        if (a <= 0.0) return 0.0;
        return std::exp(f.gamma2 * std::log(f.gamma1) + (f.gamma2 - 1.0) * std::log(a) -
                        f.gamma1 * a - std::lgamma(f.gamma2));
    };
    CsvWriter dist(out_path(cfg, "area_dist.csv"),
                   {"area", "pdf_gamma_cc", "density_sim_cc", "pdf_gamma_ce", "density_sim_ce"});
    const int bins = AreaLoadEstimate::area_hist_bins;
    for (int i = 0; i < bins; ++i) {
        const double a = (i + 0.5) * est.area_hist_max / bins;
        dist.row({a, gamma_pdf(models.gfit_c, a), est.area_hist_cc[i], gamma_pdf(models.gfit_e, a),
                  est.area_hist_ce[i]});
    }
    CsvWriter mom(out_path(cfg, "area_moments.csv"),
                  {"region", "mean_analytic", "mean_sim", "second_moment_analytic",
                   "second_moment_sim", "gamma1", "gamma2"});
    mom.row({std::string("cc"), format_double(models.stats_c.mean), format_double(est.mean_cc),
             format_double(models.stats_c.second_moment), format_double(est.second_cc),
             format_double(models.gfit_c.gamma1), format_double(models.gfit_c.gamma2)});
    mom.row({std::string("ce"), format_double(models.stats_e.mean), format_double(est.mean_ce),
             format_double(models.stats_e.second_moment), format_double(est.second_ce),
             format_double(models.gfit_e.gamma1), format_double(models.gfit_e.gamma2)});
    return {"area_dist.csv", "area_moments.csv"};
}

inline std::vector<std::string> run_load_pmf(const ExperimentConfig& cfg) {
    const auto& p = cfg.params;
    const auto models = region_models(p, QuadSpec{1e-7, 1e-11, 4000});
    const auto est = estimate_areas_and_loads(p, cfg.sim);
    const int n_rows = std::max(models.load_c.n_max, models.load_e.n_max);
    CsvWriter out(out_path(cfg, "load_pmf.csv"),
                  {"n", "pmf_analytic_cc", "pmf_sim_cc", "pmf_analytic_ce", "pmf_sim_ce"});
    for (int n = 1; n <= n_rows; ++n) {
        const auto hist = [&](const std::vector<double>& h) {
            return n <= static_cast<int>(h.size()) ? h[n - 1] : 0.0;
        };
        out.row({static_cast<double>(n), models.load_c.prob(n), hist(est.load_hist_cc),
                 models.load_e.prob(n), hist(est.load_hist_ce)});
    }
    return {"load_pmf.csv"};
}

inline std::vector<std::string> run_rate_delay_outage(const ExperimentConfig& cfg, bool rate) {
    const auto& p = cfg.params;
    const QuadSpec quad{1e-8, 1e-12, 4000};
    const auto models = region_models(p, QuadSpec{1e-7, 1e-11, 4000});
    const double wc = std::log2(1.0 + p.beta_c), we = std::log2(1.0 + p.beta_e);

    std::vector<double> grid_c, grid_e;
    if (!cfg.sweep.grid.empty()) {
        grid_c = grid_e = cfg.sweep.grid;
    } else if (rate) {
        grid_c = linspace(0.0, wc, 26);
        grid_e = linspace(0.0, we, 26);
    } else {
        for (int i = 0; i <= 20; ++i)
            grid_c.push_back(std::exp(std::log(100.0) * i / 20.0));
        grid_e = grid_c;
    }

    std::vector<std::string> files;
    for (Scheme scheme : {Scheme::noma, Scheme::oma}) {
        const double alloc = scheme == Scheme::noma ? p.theta : p.eta;
        const double cc_chi = scheme == Scheme::noma ? chi_c(p.theta, p.beta_c, p.beta_e) : p.beta_c;
        const double ce_chi = scheme == Scheme::noma ? chi_e(p.theta, p.beta_e) : p.beta_e;
        const BetaFit fit_c = moment_fit(UserClass::cc, cc_chi, p, quad);
        const BetaFit fit_e = moment_fit(UserClass::ce, ce_chi, p, quad);
        const auto est = rate ? estimate_rate_delay(p, scheme, cfg.traffic, cfg.sim, grid_c, grid_e,
                                                    {1.0}, {1.0})
                              : estimate_rate_delay(p, scheme, cfg.traffic, cfg.sim, {0.0}, {0.0},
                                                    grid_c, grid_e);
        const std::string file = rate ? std::string("rate_outage_") + to_string(scheme) + ".csv"
                                      : std::string("delay_outage_") + to_string(scheme) + ".csv";
        if (rate) {
            CsvWriter out(out_path(cfg, file),
                          {"rate_bits_per_slot_hz_cc", "cdf_analytic_cc", "cdf_sim_cc",
                           "rate_bits_per_slot_hz_ce", "cdf_analytic_ce", "cdf_sim_ce"});
            for (std::size_t i = 0; i < grid_c.size(); ++i)
                out.row({grid_c[i],
                         rate_cdf(UserClass::cc, scheme, grid_c[i], alloc, p, models.load_c, fit_c),
                         est.rate_cdf_cc[i], grid_e[i],
                         rate_cdf(UserClass::ce, scheme, grid_e[i], alloc, p, models.load_e, fit_e),
                         est.rate_cdf_ce[i]});
        } else {
            CsvWriter out(out_path(cfg, file),
                          {"delay_threshold_slots", "outage_analytic_cc", "outage_sim_cc",
                           "outage_analytic_ce", "outage_sim_ce"});
            for (std::size_t i = 0; i < grid_c.size(); ++i)
                out.row({grid_c[i],
                         delay_ccdf(UserClass::cc, scheme, grid_c[i], cfg.traffic.arrival_c, alloc,
                                    p, models.load_c, fit_c),
                         est.delay_out_cc[i],
                         delay_ccdf(UserClass::ce, scheme, grid_e[i], cfg.traffic.arrival_e, alloc,
                                    p, models.load_e, fit_e),
                         est.delay_out_ce[i]});
        }
        files.push_back(file);
    }
    return files;
}

inline std::vector<std::string> run_rate_region(const ExperimentConfig& cfg) {
    const auto& p = cfg.params;
    const QuadSpec quad{1e-7, 1e-11, 4000};
    const auto models = region_models(p, QuadSpec{1e-7, 1e-11, 4000});
    const std::vector<double> thetas =
        cfg.sweep.grid.empty() ? default_theta_grid(p, 25) : cfg.sweep.grid;

    CsvWriter noma(out_path(cfg, "rate_region_noma.csv"),
                   {"theta", "rate_cc_bits_per_slot_hz", "rate_ce_bits_per_slot_hz"});
    for (double th : thetas)
        noma.row({th, mean_rate(UserClass::cc, Scheme::noma, th, p, models.load_c, quad),
                  mean_rate(UserClass::ce, Scheme::noma, th, p, models.load_e, quad)});

    const auto etas = linspace(0.02, 0.98, 25);
    CsvWriter oma(out_path(cfg, "rate_region_oma.csv"),
                  {"eta", "rate_cc_bits_per_slot_hz", "rate_ce_bits_per_slot_hz"});
    for (double eta : etas)
        oma.row({eta, mean_rate(UserClass::cc, Scheme::oma, eta, p, models.load_c, quad),
                 mean_rate(UserClass::ce, Scheme::oma, eta, p, models.load_e, quad)});

    // simultaneous-gain region: for each eta, the best-balanced power split
    CsvWriter gains(out_path(cfg, "noma_gain.csv"),
                    {"eta", "theta_best", "gain_cc", "gain_ce", "both_above_one"});
    for (double eta : etas) {
        double best_min = -1.0, best_th = 0.0, best_gc = 0.0, best_ge = 0.0;
        for (double th : thetas) {
            const auto [gc, ge] = noma_gain(th, eta, p, quad);
            if (std::min(gc, ge) > best_min) {
                best_min = std::min(gc, ge);
                best_th = th;
                best_gc = gc;
                best_ge = ge;
            }
        }
        gains.row({eta, best_th, best_gc, best_ge, best_min > 1.0 ? 1.0 : 0.0});
    }
    return {"rate_region_noma.csv", "rate_region_oma.csv", "noma_gain.csv"};
}

inline std::vector<std::string> run_ra(const ExperimentConfig& cfg, RAProblem prob) {
    const auto& p = cfg.params;
    const QuadSpec quad{1e-6, 1e-10, 2000};
    const auto base = region_models(p, QuadSpec{1e-7, 1e-11, 4000});
    const std::vector<double> nus =
        cfg.sweep.grid.empty() ? std::vector<double>{2.0, 5.0, 10.0, 20.0} : cfg.sweep.grid;

    const std::string file = prob == RAProblem::p1 ? "ra_p1.csv" : "ra_p2.csv";
    const std::string obj = prob == RAProblem::p1 ? "csr_bits_per_slot_hz" : "sec_packets_per_slot";
    CsvWriter out(out_path(cfg, file),
                  {"nu", "theta_star", obj + "_noma", "feasible_noma", "theta_brute",
                   obj + "_noma_brute", "eta_star", obj + "_oma", "feasible_oma", "eta_brute",
                   obj + "_oma_brute"});
    for (double nu : nus) {
        auto q = p;
        q.nu = nu;
        const auto load_c = load_pmf(base.gfit_c, nu);
        const auto load_e = load_pmf(base.gfit_e, nu);
        auto solve = [&](Scheme s) {
            return prob == RAProblem::p1 ? solve_p1(s, q, cfg.traffic, load_c, load_e, quad)
                                         : solve_p2(s, q, cfg.traffic, load_c, load_e, quad);
        };
        const auto noma = solve(Scheme::noma);
        const auto oma = solve(Scheme::oma);
        const auto bn = brute_force_ra(prob, Scheme::noma, q, cfg.traffic, load_c, load_e, 2000, quad);
        const auto bo = brute_force_ra(prob, Scheme::oma, q, cfg.traffic, load_c, load_e, 2000, quad);
        out.row({nu, noma.allocation, noma.objective, noma.feasible ? 1.0 : 0.0, bn.allocation,
                 bn.objective, oma.allocation, oma.objective, oma.feasible ? 1.0 : 0.0,
                 bo.allocation, bo.objective});
    }
    return {file};
}

inline std::vector<std::string> run_validate(const ExperimentConfig& cfg, bool& failed) {
    ValidationOptions opt;
    opt.seed = cfg.sim.seed;
    opt.n_threads = cfg.sim.n_threads;
    opt.scale = cfg.validation_scale;
    const auto report = run_validation(opt);
    CsvWriter out(out_path(cfg, "validation_report.csv"),
                  {"id", "criterion", "pass", "detail", "seconds"});
    for (const auto& r : report.results) {
        std::printf("[%s] %2d  %s — %s (%.1f s)\n", r.pass ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.detail.c_str(), r.seconds);
        out.row({std::to_string(r.id), r.name, r.pass ? "1" : "0", r.detail,
                 format_double(r.seconds)});
    }
    std::printf("%zu/%zu criteria passed\n",
                static_cast<std::size_t>(std::count_if(report.results.begin(),
                                                       report.results.end(),
                                                       [](const auto& r) { return r.pass; })),
                report.results.size());
    failed = !report.all_pass;
    return {"validation_report.csv"};
}

}  // namespace detail

struct ExperimentResult {
    int exit_code = 0;
    std::vector<std::string> outputs;
};

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output_dir);
    const auto t0 = std::chrono::steady_clock::now();

    ExperimentResult result;
    bool validation_failed = false;
    if (cfg.experiment == "moments-sweep") {
        result.outputs = detail::run_moments_sweep(cfg);
    } else if (cfg.experiment == "meta-ccdf") {
        result.outputs = detail::run_meta_ccdf(cfg);
    } else if (cfg.experiment == "area-dist") {
        result.outputs = detail::run_area_dist(cfg);
    } else if (cfg.experiment == "load-pmf") {
        result.outputs = detail::run_load_pmf(cfg);
    } else if (cfg.experiment == "rate-outage") {
        result.outputs = detail::run_rate_delay_outage(cfg, true);
    } else if (cfg.experiment == "delay-outage") {
        result.outputs = detail::run_rate_delay_outage(cfg, false);
    } else if (cfg.experiment == "rate-region") {
        result.outputs = detail::run_rate_region(cfg);
    } else if (cfg.experiment == "ra-p1") {
        result.outputs = detail::run_ra(cfg, RAProblem::p1);
    } else if (cfg.experiment == "ra-p2") {
        result.outputs = detail::run_ra(cfg, RAProblem::p2);
    } else if (cfg.experiment == "validate") {
        result.outputs = detail::run_validate(cfg, validation_failed);
    } else {
        throw ConfigError("unknown experiment '" + cfg.experiment + "'");
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    nlohmann::json manifest;
    manifest["experiment"] = cfg.experiment;
    manifest["config"] = config_to_json(cfg);
    manifest["seed"] = cfg.sim.seed;
    manifest["code_version"] = version_string;
    manifest["wall_time_seconds"] = wall;
    manifest["outputs"] = result.outputs;
    std::ofstream mf(detail::out_path(cfg, "manifest.json"), std::ios::binary);
    mf << manifest.dump(2) << "\n";
    result.outputs.push_back("manifest.json");

    result.exit_code = validation_failed ? 2 : 0;
    return result;
}

}  // namespace nomacell
