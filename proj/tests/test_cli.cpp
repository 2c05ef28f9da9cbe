// End-to-end tests of the command-line front end. The binary path is
// injected by the build as LEVICOOL_CLI_PATH; every invocation runs in a
// scratch directory under the system temp path.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string cli = LEVICOOL_CLI_PATH;

int run(const std::string& args) {
    int rc = std::system((cli + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("levicool_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

json read_json(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(bool(in));
    json j;
    in >> j;
    return j;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("usage and exit codes") {
    CHECK(run("--help") == 0);
    CHECK(run("budget --help") == 0);
    CHECK(run("") == 2);                     // a subcommand is required
    CHECK(run("--no-such-flag") == 2);
    CHECK(run("frobnicate") == 2);           // unknown subcommand
    CHECK(run("fit") == 2);                  // missing required --in
    CHECK(run("budget --format=yaml") == 2); // invalid format choice
    CHECK(run("fit --in /nonexistent/spectrum.csv") == 1); // analysis error
}

TEST_CASE("budget subcommand writes a self-consistent report") {
    auto dir = scratch("budget");
    REQUIRE(run("budget --out " + dir.string()) == 0);
    auto j = read_json(dir / "budget_report.json");
    CHECK(j["command"] == "budget");
    CHECK(j["version"] == "1.0.0");
    auto& b = j["results"]["budget"];
    CHECK(double(b["Gamma_gas"]["value"]) == doctest::Approx(19.5e3).epsilon(0.02));
    CHECK(double(b["Gamma_rec"]["value"]) == doctest::Approx(5.6e3).epsilon(0.02));
    CHECK(double(b["Gamma_phase"]["value"]) == 0.0);
    double total = double(b["Gamma_gas"]["value"]) + double(b["Gamma_rec"]["value"]);
    CHECK(double(b["Gamma_total"]["value"]) == doctest::Approx(total));
    CHECK(b["c_pp"]["provenance"] == "pass-through");

    // the phase-noise bound is additive and flagged as such
    REQUIRE(run("budget --include-phase --out " + dir.string()) == 0);
    auto jp = read_json(dir / "budget_report.json");
    CHECK(double(jp["results"]["budget"]["Gamma_phase"]["value"]) ==
          doctest::Approx(200.0));
}

TEST_CASE("simulate then fit closes the thermometry loop") {
    auto dir = scratch("loop");
    REQUIRE(run("simulate --seed 42 --out " + dir.string()) == 0);
    auto sim = read_json(dir / "simulate_report.json");
    double n_pred = sim["results"]["n_x_lyapunov"];
    CHECK(n_pred > 0.2);
    CHECK(n_pred < 0.6);
    REQUIRE(fs::exists(dir / "spectrum.csv"));

    REQUIRE(run("fit --in " + (dir / "spectrum.csv").string() + " --out " +
                dir.string()) == 0);
    auto fit = read_json(dir / "fit_report.json");
    double n = fit["results"]["occupation"]["n"];
    double sig = fit["results"]["occupation"]["sigma_n"];
    CHECK(std::abs(n - n_pred) < 3.0 * sig);
    CHECK(double(fit["results"]["T_mode_K"]) < 20e-6);
    CHECK(double(fit["results"]["ground_state_probability"]) > 0.5);
}

TEST_CASE("simulate is deterministic under a fixed seed") {
    auto d1 = scratch("det1"), d2 = scratch("det2");
    REQUIRE(run("simulate --seed 7 --out " + d1.string()) == 0);
    REQUIRE(run("simulate --seed 7 --out " + d2.string()) == 0);
    CHECK(read_file(d1 / "spectrum.csv") == read_file(d2 / "spectrum.csv"));

    auto d3 = scratch("det3");
    REQUIRE(run("simulate --seed 8 --out " + d3.string()) == 0);
    CHECK(read_file(d1 / "spectrum.csv") != read_file(d3 / "spectrum.csv"));
}

TEST_CASE("sweep emits CSV when asked") {
    auto dir = scratch("sweep");
    REQUIRE(run("sweep --points 11 --format csv --out " + dir.string()) == 0);
    REQUIRE(fs::exists(dir / "sweep.csv"));
    std::ifstream in(dir / "sweep.csv");
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines >= 12); // header + 11 grid points

    // JSON format embeds the sweep in the report instead
    auto dj = scratch("sweepj");
    REQUIRE(run("sweep --points 5 --out " + dj.string()) == 0);
    auto j = read_json(dj / "sweep_report.json");
    CHECK(j["results"]["sweep"].size() == 5);
    CHECK_FALSE(fs::exists(dj / "sweep.csv"));
}

TEST_CASE("decohere forecast") {
    auto dir = scratch("decohere");
    REQUIRE(run("decohere --out " + dir.string()) == 0);
    auto j = read_json(dir / "decohere_report.json");
    auto& ff = j["results"]["free_fall"];
    CHECK(double(ff["tau_target"]["value"]) == doctest::Approx(12e-3).epsilon(0.05));
    CHECK(double(ff["required_pressure_mbar"]["value"]) <= 2e-11);
    CHECK(bool(ff["blackbody_dominates"]));
}

TEST_CASE("report subcommand reproduces the reference table") {
    auto dir = scratch("report");
    CHECK(run("report --out " + dir.string()) == 0);
    auto j = read_json(dir / "paper_report.json");
    CHECK(bool(j["results"]["comparison"]["all_pass"]));
}

TEST_CASE("LEVICOOL_OUT environment variable sets the output directory") {
    auto dir = scratch("envout");
    setenv("LEVICOOL_OUT", dir.string().c_str(), 1);
    int rc = run("budget");
    unsetenv("LEVICOOL_OUT");
    REQUIRE(rc == 0);
    CHECK(fs::exists(dir / "budget_report.json"));
}

TEST_CASE("explicit config file is loaded and hashed") {
    auto dir = scratch("config");
    // round-trip the built-in defaults through a file
    REQUIRE(run("budget --out " + dir.string()) == 0);
    auto defaults = read_json(dir / "budget_report.json")["config"];
    auto cfg_path = dir / "config.json";
    std::ofstream(cfg_path) << defaults.dump(2);

    REQUIRE(run("budget --config " + cfg_path.string() + " --out " + dir.string()) == 0);
    auto j = read_json(dir / "budget_report.json");
    CHECK(j["input_hashes"].contains("config"));

    // a broken config is a usage error
    std::ofstream(cfg_path) << "{ \"particle\": {} }";
    CHECK(run("budget --config " + cfg_path.string() + " --out " + dir.string()) == 2);
}
