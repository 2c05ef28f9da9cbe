// levicool: command-line front end for the cavity-cooling toolkit.
// Exit codes: 0 success, 1 analysis failure (fit/instability), 2 usage
// or config errors.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "levicool/budget.hpp"
#include "levicool/cavity.hpp"
#include "levicool/config.hpp"
#include "levicool/cooling.hpp"
#include "levicool/decohere.hpp"
#include "levicool/errors.hpp"
#include "levicool/physpar.hpp"
#include "levicool/report.hpp"
#include "levicool/specgen.hpp"
#include "levicool/thermo.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace levicool;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 12345;
    std::string format = "json";
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "experiment config JSON");
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seed, "RNG seed");
    cmd->add_option("--format", opts.format, "side-file format")
        ->check(CLI::IsMember({"csv", "json"}));
}

ExperimentConfig load(const CommonOpts& opts) {
    if (opts.config_path.empty()) return paper_defaults();
    return load_config(opts.config_path);
}

fs::path out_dir(const CommonOpts& opts) {
    std::string dir = opts.out_dir;
    if (dir.empty()) {
        if (const char* env = std::getenv("LEVICOOL_OUT")) dir = env;
    }
    if (dir.empty()) dir = ".";
    fs::create_directories(dir);
    return dir;
}

RunReport make_report(const ExperimentConfig& cfg, const std::string& command,
                      const CommonOpts& opts) {
    RunReport rep;
    rep.config = cfg;
    rep.command = command;
    rep.seed = opts.seed;
    if (!opts.config_path.empty())
        rep.input_hashes["config"] = file_sha_like_hash(opts.config_path);
    return rep;
}

std::vector<double> centered_grid(double span, std::size_t n) {
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i)
        grid[i] = -span + 2.0 * span * double(i) / double(n - 1);
    return grid;
}

// shared heating input for the linearized model: recoil as extra white
// force diffusion on top of the gas bath
double extra_heating(const ExperimentConfig& cfg) {
    return recoil_heating(cfg.trap, cfg.particle, 'x');
}

int cmd_simulate(const CommonOpts& opts, const std::string& method, int n_avg,
                 double duration) {
    auto cfg = load(opts);
    auto dir = out_dir(opts);
    auto model = make_linear_model(cfg, extra_heating(cfg));
    auto ss = steady_state_covariance(model);
    auto rates = scattering_rates(cfg.drive.coupling_x, cfg.cavity.kappa,
                                  cfg.drive.detuning, cfg.trap.omega_x);
    double gamma_eff = rates.gamma_opt() + model.gamma_gas;

    RunReport rep = make_report(cfg, "simulate", opts);
    rep.results["n_x_lyapunov"] = ss.n_x;
    rep.results["gamma_eff_hz"] = gamma_eff / two_pi;
    rep.results["model_hash"] = model_hash(model);

    PsdTrace psd;
    if (method == "langevin") {
        double dt = 0.02 * two_pi / std::max(cfg.trap.omega_x, cfg.cavity.kappa);
        auto run = simulate_langevin(model, dt, duration, opts.seed);
        write_trace(run.heterodyne, (dir / "trace.bin").string());
        std::size_t seg = 4096;
        psd = welch_psd(run.heterodyne, seg, WelchWindow::hann);
        rep.input_hashes["trace"] = file_sha_like_hash((dir / "trace.bin").string());
    } else {
        auto params = SpectrumModelParams::from_config(cfg, ss.n_x, gamma_eff);
        auto grid = centered_grid(2.5 * cfg.trap.omega_x, 4001);
        psd = synthesize_spectrum(heterodyne_model(params, grid), n_avg, opts.seed);
    }
    write_psd_csv(psd, (dir / "spectrum.csv").string());
    rep.results["spectrum_file"] = "spectrum.csv";
    rep.write((dir / "simulate_report.json").string());
    std::cout << "n_x = " << ss.n_x << "  (spectrum.csv written)\n";
    return 0;
}

int cmd_fit(const CommonOpts& opts, const std::string& in_path, bool include_y) {
    auto cfg = load(opts);
    auto dir = out_dir(opts);
    auto psd = read_psd_csv(in_path);
    auto fit = fit_sidebands(psd, std::nullopt, {}, include_y);
    auto occ = occupation_from_asymmetry(fit, cfg.cavity.kappa, cfg.drive.detuning);

    RunReport rep = make_report(cfg, "fit", opts);
    rep.input_hashes["spectrum"] = file_sha_like_hash(in_path);
    rep.results["occupation"] = occupation_json(occ);
    rep.results["fit"] = {
        {"a_S", fit.a_S},
        {"a_AS", fit.a_AS},
        {"omega_x_hz", fit.omega_x / two_pi},
        {"gamma_x_hz", fit.gamma_x / two_pi},
        {"reduced_chi2", fit.reduced_chi2},
    };
    auto mt = occupation_temperature(occ.n, fit.omega_x);
    rep.results["T_mode_K"] = mt.T_mode;
    rep.results["ground_state_probability"] = mt.ground_prob;
    rep.write((dir / "fit_report.json").string());
    std::cout << "n = " << occ.n << " +/- " << occ.sigma_n << "\n";
    return 0;
}

int cmd_kappa(const CommonOpts& opts, const std::vector<std::string>& scans_in) {
    auto cfg = load(opts);
    auto dir = out_dir(opts);
    std::vector<TransmissionScan> scans;
    for (const auto& p : scans_in) scans.push_back(read_scan_csv(p));
    auto fit = fit_linewidth(scans);

    RunReport rep = make_report(cfg, "kappa", opts);
    for (std::size_t i = 0; i < scans_in.size(); ++i)
        rep.input_hashes["scan_" + std::to_string(i)] = file_sha_like_hash(scans_in[i]);
    rep.results["kappa_hz"] = fit.kappa / two_pi;
    rep.results["kappa_sigma_hz"] = fit.kappa_sigma / two_pi;
    rep.results["fsr_hz"] = fit.fsr / two_pi;
    rep.results["n_scans"] = scans.size();
    rep.write((dir / "kappa_report.json").string());
    std::cout << "kappa/2pi = " << fit.kappa / two_pi << " +/- "
              << fit.kappa_sigma / two_pi << " Hz\n";
    return 0;
}

int cmd_detuning(const CommonOpts& opts, const std::string& in_path, double band_lo_hz,
                 double band_hi_hz) {
    auto cfg = load(opts);
    auto dir = out_dir(opts);
    auto psd = read_psd_csv(in_path);
    auto est = estimate_detuning(psd, two_pi * band_lo_hz, two_pi * band_hi_hz,
                                 cfg.cavity.kappa);

    RunReport rep = make_report(cfg, "detuning", opts);
    rep.input_hashes["spectrum"] = file_sha_like_hash(in_path);
    rep.results["delta_hz"] = est.delta / two_pi;
    rep.results["sigma_hz"] = est.sigma / two_pi;
    rep.results["good"] = est.good;
    rep.results["low_confidence"] = est.low_confidence;
    rep.write((dir / "detuning_report.json").string());
    std::cout << "delta/2pi = " << est.delta / two_pi << " +/- " << est.sigma / two_pi
              << " Hz\n";
    return est.good ? 0 : 1;
}

int cmd_budget(const CommonOpts& opts, bool include_phase) {
    auto cfg = load(opts);
    auto dir = out_dir(opts);
    auto bud = total_budget(cfg, include_phase);

    RunReport rep = make_report(cfg, "budget", opts);
    rep.results["budget"] = budget_json(bud);
    rep.write((dir / "budget_report.json").string());
    std::cout << "Gamma_total/2pi = " << bud.Gamma_total / two_pi
              << " Hz, C = " << bud.cooperativity << "\n";
    return 0;
}

int cmd_sweep(const CommonOpts& opts, const std::string& pressure_range,
              double dmin_hz, double dmax_hz, int points) {
    auto cfg = load(opts);
    auto dir = out_dir(opts);
    double p_lo = cfg.environment.pressure * 0.7;
    double p_hi = cfg.environment.pressure * 1.3;
    if (!pressure_range.empty()) {
        auto colon = pressure_range.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("--pressure expects LO:HI in mbar");
        p_lo = std::stod(pressure_range.substr(0, colon)) * 1e2; // mbar -> Pa
        p_hi = std::stod(pressure_range.substr(colon + 1)) * 1e2;
    }
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i)
        grid[i] = two_pi * (dmin_hz + (dmax_hz - dmin_hz) * double(i) / (points - 1));
    auto sweep = detuning_sweep(cfg, grid, p_lo, p_hi);

    RunReport rep = make_report(cfg, "sweep", opts);
    if (opts.format == "csv") {
        write_sweep_csv(sweep, (dir / "sweep.csv").string());
        rep.results["sweep_file"] = "sweep.csv";
    } else {
        rep.results["sweep"] = sweep_json(sweep);
    }
    rep.write((dir / "sweep_report.json").string());
    std::cout << "sweep written (" << sweep.size() << " points)\n";
    return 0;
}

int cmd_decohere(const CommonOpts& opts, double target_nm, double n_bar) {
    auto cfg = load(opts);
    auto dir = out_dir(opts);
    double target = target_nm > 0 ? target_nm * 1e-9 : cfg.particle.radius;
    auto ff = free_fall_plan(cfg, target, n_bar);

    RunReport rep = make_report(cfg, "decohere", opts);
    rep.results["free_fall"] = free_fall_json(ff);
    rep.write((dir / "decohere_report.json").string());
    std::cout << "tau = " << ff.tau_target * 1e3 << " ms, required pressure = "
              << ff.required_pressure_mbar << " mbar\n";
    return 0;
}

int cmd_report(const CommonOpts& opts) {
    auto cfg = load(opts);
    auto dir = out_dir(opts);
    auto cmp = reproduce_paper(cfg);

    RunReport rep = make_report(cfg, "report", opts);
    rep.results["comparison"] = comparison_json(cmp);
    rep.write((dir / "paper_report.json").string());
    std::cout << format_comparison(cmp);
    if (!cmp.all_pass) {
        for (const auto& r : cmp.rows)
            if (!r.pass)
                std::cerr << "FAIL: " << r.name << " computed " << r.computed
                          << " vs " << r.reference << "\n";
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"levitated-nanoparticle cavity cooling toolkit"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string method = "model", in_path, pressure_range;
    std::vector<std::string> scans_in;
    int n_avg = 500, points = 41;
    double duration = 0.2, band_lo = 50e3, band_hi = 150e3;
    double dmin = 200e3, dmax = 500e3, target_nm = 0, n_bar = 0.43;
    bool include_y = false, include_phase = false;

    auto* sim = app.add_subcommand("simulate", "predict n_x and synthesize a spectrum");
    add_common(sim, opts);
    sim->add_option("--method", method, "model | langevin")
        ->check(CLI::IsMember({"model", "langevin"}));
    sim->add_option("--n-avg", n_avg, "averaged segments for synthesis");
    sim->add_option("--duration", duration, "langevin duration in s");

    auto* fit = app.add_subcommand("fit", "sideband-asymmetry thermometry on a spectrum");
    add_common(fit, opts);
    fit->add_option("--in", in_path, "spectrum CSV")->required();
    fit->add_flag("--include-y", include_y, "fit the residual y mode too");

    auto* kap = app.add_subcommand("kappa", "cavity linewidth from transmission scans");
    add_common(kap, opts);
    kap->add_option("--in", scans_in, "scan CSV files")->required();

    auto* det = app.add_subcommand("detuning", "detuning from classical-noise asymmetry");
    add_common(det, opts);
    det->add_option("--in", in_path, "spectrum CSV")->required();
    det->add_option("--band-lo", band_lo, "analysis band start, Hz");
    det->add_option("--band-hi", band_hi, "analysis band end, Hz");

    auto* bud = app.add_subcommand("budget", "heating and noise budget");
    add_common(bud, opts);
    bud->add_flag("--include-phase", include_phase, "include the phase-noise bound");

    auto* swp = app.add_subcommand("sweep", "occupation vs detuning band");
    add_common(swp, opts);
    swp->add_option("--pressure", pressure_range, "pressure band LO:HI in mbar");
    swp->add_option("--delta-min", dmin, "grid start, Hz");
    swp->add_option("--delta-max", dmax, "grid end, Hz");
    swp->add_option("--points", points, "grid points");

    auto* dec = app.add_subcommand("decohere", "free-fall coherence forecast");
    add_common(dec, opts);
    dec->add_option("--target", target_nm, "target wavepacket size, nm (default: radius)");
    dec->add_option("--n-bar", n_bar, "occupation for the Eq. S9 pair");

    auto* repc = app.add_subcommand("report", "reproduce the reference comparison table");
    add_common(repc, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(opts, method, n_avg, duration);
        if (fit->parsed()) return cmd_fit(opts, in_path, include_y);
        if (kap->parsed()) return cmd_kappa(opts, scans_in);
        if (det->parsed()) return cmd_detuning(opts, in_path, band_lo, band_hi);
        if (bud->parsed()) return cmd_budget(opts, include_phase);
        if (swp->parsed()) return cmd_sweep(opts, pressure_range, dmin, dmax, points);
        if (dec->parsed()) return cmd_decohere(opts, target_nm, n_bar);
        if (repc->parsed()) return cmd_report(opts);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "analysis error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
