#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nomacell/experiments.hpp"

using namespace nomacell;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
        if (s[i] == '\r' && s[i + 1] == '\n') ++n;
    return n;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("config: defaults, dB conversion, overrides") {
    nlohmann::json j = nlohmann::json::object();
    auto cfg = config_from_json(j, "moments-sweep");
    CHECK(cfg.params.beta_c == Approx(1.9952623149688795).epsilon(1e-12));
    CHECK(cfg.params.beta_e == Approx(0.5011872336272722).epsilon(1e-12));
    CHECK(cfg.params.tau == 0.7);
    CHECK(cfg.sim.n_realizations == 100000);

    apply_override(j, "params.beta_c_db=0");
    apply_override(j, "params.tau=0.6");
    apply_override(j, "sim.seed=77");
    apply_override(j, "output_dir=/tmp/somewhere");
    cfg = config_from_json(j, "moments-sweep");
    CHECK(cfg.params.beta_c == Approx(1.0).epsilon(1e-12));
    CHECK(cfg.params.tau == 0.6);
    CHECK(cfg.sim.seed == 77);
    CHECK(cfg.output_dir == "/tmp/somewhere");
}

TEST_CASE("config: diagnostics for bad input") {
    nlohmann::json j = nlohmann::json::object();
    CHECK_THROWS_AS(config_from_json(j, "no-such-experiment"), ConfigError);

    j["params"]["no_such_field"] = 1.0;
    CHECK_THROWS_AS(config_from_json(j, "moments-sweep"), ConfigError);
    j.erase("params");

    j["sweep"]["variable"] = "bogus";
    CHECK_THROWS_AS(config_from_json(j, "moments-sweep"), ConfigError);
    j["sweep"]["variable"] = "theta";
    j["sweep"]["grid"] = {0.3, 0.2};
    CHECK_THROWS_AS(config_from_json(j, "moments-sweep"), ConfigError);
    j.erase("sweep");

    j["params"] = {{"tau", 1.4}};
    CHECK_THROWS_AS(config_from_json(j, "moments-sweep"), ConfigError);

    // field diagnostics carry the offending name
    try {
        nlohmann::json bad;
        bad["params"] = {{"lambda", "not-a-number"}};
        config_from_json(bad, "moments-sweep");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("lambda") != std::string::npos);
    }
}

TEST_CASE("moments-sweep writes grid-shaped, byte-reproducible CSVs") {
    const auto dir = fresh_dir("nomacell_test_moments");
    nlohmann::json j;
    j["params"] = {{"beta_c_db", 0.0}, {"beta_e_db", -3.0}};
    j["sim"] = {{"n_realizations", 4000}, {"seed", 5}};
    j["sweep"] = {{"variable", "theta"}, {"grid", {0.2, 0.4, 0.9}}};  // 0.9 beyond theta_nc
    j["output_dir"] = dir.string();
    const auto cfg = config_from_json(j, "moments-sweep");
    const auto res = run_experiment(cfg);
    CHECK(res.exit_code == 0);

    const auto csv = slurp(dir / "moments_noma.csv");
    CHECK(count_lines(csv) == 1 + 3);  // header + one row per grid point
    // the infeasible grid point carries zeros
    CHECK(csv.find("0.9,0,0,0,0,0,0,0,0") != std::string::npos);
    CHECK(fs::exists(dir / "moments_oma.csv"));

    const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["experiment"] == "moments-sweep");
    CHECK(manifest["seed"] == 5);
    CHECK(manifest["config"]["params"]["tau"] == Approx(0.7));
    CHECK(manifest.contains("wall_time_seconds"));
    CHECK(manifest.contains("code_version"));

    // byte-identical reproduction
    const auto dir2 = fresh_dir("nomacell_test_moments2");
    j["output_dir"] = dir2.string();
    run_experiment(config_from_json(j, "moments-sweep"));
    CHECK(slurp(dir / "moments_noma.csv") == slurp(dir2 / "moments_noma.csv"));
    CHECK(slurp(dir / "moments_oma.csv") == slurp(dir2 / "moments_oma.csv"));
}

TEST_CASE("ra-p1 emits solver and oracle columns with NOMA above OMA") {
    const auto dir = fresh_dir("nomacell_test_ra");
    nlohmann::json j;
    j["sweep"] = {{"variable", "nu"}, {"grid", {5.0}}};
    j["output_dir"] = dir.string();
    const auto cfg = config_from_json(j, "ra-p1");
    const auto res = run_experiment(cfg);
    CHECK(res.exit_code == 0);
    const auto csv = slurp(dir / "ra_p1.csv");
    REQUIRE(count_lines(csv) == 2);
    // parse the data row
    std::stringstream ss(csv.substr(csv.find("\r\n") + 2));
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    REQUIRE(row.size() == 11);
    const double csr_noma = row[2], feas_noma = row[3], brute_noma = row[5];
    const double csr_oma = row[7], feas_oma = row[8];
    CHECK(feas_noma == 1.0);
    CHECK(feas_oma == 1.0);
    CHECK(csr_noma >= csr_oma);
    CHECK(csr_noma == Approx(brute_noma).epsilon(0.01));
}

TEST_CASE("smaller experiments run end to end") {
    nlohmann::json j;
    j["sim"] = {{"n_realizations", 3000}, {"seed", 9}, {"area_samples", 2000}};
    {
        const auto dir = fresh_dir("nomacell_test_ccdf");
        j["output_dir"] = dir.string();
        CHECK(run_experiment(config_from_json(j, "meta-ccdf")).exit_code == 0);
        CHECK(count_lines(slurp(dir / "meta_ccdf.csv")) == 102);
    }
    {
        const auto dir = fresh_dir("nomacell_test_load");
        j["output_dir"] = dir.string();
        CHECK(run_experiment(config_from_json(j, "load-pmf")).exit_code == 0);
        CHECK(fs::exists(dir / "load_pmf.csv"));
    }
    {
        const auto dir = fresh_dir("nomacell_test_area");
        j["output_dir"] = dir.string();
        CHECK(run_experiment(config_from_json(j, "area-dist")).exit_code == 0);
        CHECK(count_lines(slurp(dir / "area_dist.csv")) == 81);
        CHECK(count_lines(slurp(dir / "area_moments.csv")) == 3);
    }
    {
        const auto dir = fresh_dir("nomacell_test_rate");
        j["output_dir"] = dir.string();
        CHECK(run_experiment(config_from_json(j, "rate-outage")).exit_code == 0);
        CHECK(count_lines(slurp(dir / "rate_outage_noma.csv")) == 27);
        CHECK(count_lines(slurp(dir / "rate_outage_oma.csv")) == 27);
    }
    {
        const auto dir = fresh_dir("nomacell_test_delay");
        j["output_dir"] = dir.string();
        CHECK(run_experiment(config_from_json(j, "delay-outage")).exit_code == 0);
        CHECK(count_lines(slurp(dir / "delay_outage_noma.csv")) == 22);
    }
    {
        const auto dir = fresh_dir("nomacell_test_region");
        nlohmann::json jr = j;
        jr["output_dir"] = dir.string();
        jr["sweep"] = {{"variable", "theta"}, {"grid", {0.1, 0.2, 0.3, 0.4}}};
        CHECK(run_experiment(config_from_json(jr, "rate-region")).exit_code == 0);
        CHECK(count_lines(slurp(dir / "rate_region_noma.csv")) == 5);
        CHECK(count_lines(slurp(dir / "noma_gain.csv")) == 26);
    }
}

TEST_CASE("validate experiment writes a report and returns 0 or 2") {
    const auto dir = fresh_dir("nomacell_test_validate");
    nlohmann::json j;
    j["output_dir"] = dir.string();
    j["validation_scale"] = 0.03;
    const auto res = run_experiment(config_from_json(j, "validate"));
    CHECK((res.exit_code == 0 || res.exit_code == 2));
    const auto csv = slurp(dir / "validation_report.csv");
    CHECK(count_lines(csv) == 11);  // header + 10 criteria
}
