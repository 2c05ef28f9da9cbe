#include "levicool/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "levicool/physpar.hpp"

namespace levicool {

using nlohmann::json;

namespace {

json item(double value, const char* unit, const char* provenance = "computed") {
    return json{{"value", value}, {"unit", unit}, {"provenance", provenance}};
}

const char* method_name(OccupationMethod m) {
    switch (m) {
        case OccupationMethod::joint_fit: return "joint_fit";
        case OccupationMethod::masked_fit: return "masked_fit";
        case OccupationMethod::band_power: return "band_power";
        case OccupationMethod::worst_case: return "worst_case";
        case OccupationMethod::rate_ratio: return "rate_ratio";
    }
    return "unknown";
}

} // namespace

json budget_json(const HeatingBudget& b) {
    return json{
        {"Gamma_gas", item(b.Gamma_gas / two_pi, "Hz")},
        {"Gamma_rec", item(b.Gamma_rec / two_pi, "Hz")},
        {"Gamma_phase", item(b.Gamma_phase / two_pi, "Hz", "pass-through")},
        {"Gamma_total", item(b.Gamma_total / two_pi, "Hz")},
        {"gamma_int_x", item(b.gamma_int_x / two_pi, "Hz")},
        {"gamma_int_y", item(b.gamma_int_y / two_pi, "Hz")},
        {"gamma_int_z", item(b.gamma_int_z / two_pi, "Hz")},
        {"n_phase", item(b.n_phase, "phonons")},
        {"n_int", item(b.n_int, "phonons", "pass-through")},
        {"c_pp", item(b.c_pp, "1", "pass-through")},
        {"c_qq", item(b.c_qq, "1", "pass-through")},
        {"cooperativity", item(b.cooperativity, "1")},
        {"T_trap", item(b.T_trap, "s")},
        {"N_osc", item(b.N_osc, "1")},
    };
}

json free_fall_json(const FreeFallReport& r) {
    return json{
        {"Lambda_gas", item(r.Lambda_gas, "Hz/m^2")},
        {"Lambda_total", item(r.Lambda_total, "Hz/m^2")},
        {"Lambda_bb",
         json{{"scattering", r.Lambda_bb.scattering},
              {"emission", r.Lambda_bb.emission},
              {"absorption", r.Lambda_bb.absorption},
              {"total", r.Lambda_bb_total},
              {"unit", "Hz/m^2"},
              {"provenance", "pass-through"}}},
        {"t_max", item(r.t_max, "s")},
        {"xi_max", item(r.xi_max, "m")},
        {"Gamma_sat", item(r.Gamma_sat, "Hz")},
        {"tau_target", item(r.tau_target, "s")},
        {"required_rate", item(r.required_rate, "Hz")},
        {"required_pressure_pa", item(r.required_pressure, "Pa")},
        {"required_pressure_mbar", item(r.required_pressure_mbar, "mbar")},
        {"t_max_bb", item(r.t_max_bb, "s")},
        {"xi_max_bb", item(r.xi_max_bb, "m")},
        {"blackbody_dominates", r.blackbody_dominates},
        {"sigma_of_t", r.sigma_of_t},
        // no formula given for the cryogenic regime; quoted as-is
        {"cryogenic_note", "internal temperature below 130 K suppresses blackbody emission"},
    };
}

json occupation_json(const OccupationResult& r) {
    return json{
        {"n", r.n},
        {"sigma_n", r.sigma_n},
        {"method", method_name(r.method)},
        {"inputs_hash", r.inputs_hash},
        {"low_confidence", r.low_confidence},
    };
}

json sweep_json(const std::vector<SweepPoint>& sweep) {
    json arr = json::array();
    for (const auto& p : sweep)
        arr.push_back(json{{"delta_hz", p.delta / two_pi},
                           {"n_low", p.n_low},
                           {"n_high", p.n_high},
                           {"n_ultimate", p.n_ultimate},
                           {"stable", p.stable}});
    return arr;
}

json RunReport::to_json() const {
    json hashes = json::object();
    for (const auto& [k, v] : input_hashes) hashes[k] = v;
    return json{
        {"version", version},
        {"command", command},
        {"seed", seed},
        {"config", json::parse(config_to_json(config))},
        {"input_hashes", hashes},
        {"results", results},
    };
}

void RunReport::write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("report: cannot write " + path);
    out << to_json().dump(2) << "\n";
}

std::string file_sha_like_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("hash: cannot read " + path);
    std::uint64_t h = 1469598103934665603ull;
    char buf[4096];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
    }
    std::ostringstream ss;
    ss << std::hex << std::setw(16) << std::setfill('0') << h;
    return ss.str();
}

PaperComparison reproduce_paper(const ExperimentConfig& cfg) {
    PaperComparison cmp;
    auto abs_row = [&](const std::string& name, double got, double ref, double tol,
                       const std::string& desc) {
        cmp.rows.push_back({name, got, ref, desc, std::abs(got - ref) <= tol});
    };
    auto rel_row = [&](const std::string& name, double got, double ref, double rel,
                       const std::string& desc) {
        cmp.rows.push_back({name, got, ref, desc, std::abs(got - ref) <= rel * ref});
    };

    const auto& pc = cfg.constants;
    double omega = cfg.trap.omega_x;

    // the reference total heating/decoherence rate and its gas part are
    // measured quantities; the ab-initio budget estimates are compared
    // against them separately at the looser factor-2 level
    const double Gamma_meas = two_pi * 20.6e3;     // rad/s
    const double Gamma_gas_meas = two_pi * 15.0e3; // rad/s

    double n_min = backaction_limit(cfg.cavity.kappa, omega);
    abs_row("n_min (backaction)", n_min, 0.025, 0.0005, "+/- 0.0005");

    double g = cfg.drive.coupling_x;
    double C = 4.0 * g * g / (cfg.cavity.kappa * Gamma_meas);
    abs_row("cooperativity C", C, 5.0, 0.2, "+/- 0.2");

    auto mt = occupation_temperature(0.43, omega, pc);
    abs_row("T_mode at n=0.43 [uK]", mt.T_mode * 1e6, 12.2, 0.1, "+/- 0.1 uK");

    double x_zpf = zero_point_fluctuation(cfg.particle.mass, omega, pc);
    rel_row("x_zpf [pm]", x_zpf * 1e12, 3.1, 0.02, "+/- 2%");

    double l_th = thermal_de_broglie(cfg.environment.gas_molecule_mass,
                                     cfg.environment.temperature, pc);
    rel_row("lambda_th [pm]", l_th * 1e12, 19.0, 0.03, "+/- 3%");

    double Lambda = localization_parameter(Gamma_meas, x_zpf);
    auto [t_max, xi_max] = short_distance_expansion(Lambda, cfg.particle.mass,
                                                    omega, 0.43, pc);
    rel_row("t_max [us]", t_max * 1e6, 1.42, 0.03, "+/- 3%");
    rel_row("xi_max [pm]", xi_max * 1e12, 10.2, 0.03, "+/- 3%");

    double Lambda_gas = localization_parameter(Gamma_gas_meas, x_zpf);
    double Gamma_sat = saturation_rate(Lambda_gas, l_th);
    rel_row("Gamma_sat [MHz]", Gamma_sat * 1e-6, 3.6, 0.15, "+/- 15%");

    FreeFallReport ff = free_fall_plan(cfg, cfg.particle.radius);
    rel_row("tau (target = radius) [ms]", ff.tau_target * 1e3, 12.0, 0.10, "+/- 10%");

    double pr = ff.required_pressure_mbar;
    cmp.rows.push_back({"required pressure [mbar]", pr, 2e-11, "factor 1.5",
                        pr <= 2e-11 * 1.5 && pr >= 2e-11 / 1.5});

    rel_row("t_max_bb [ms]", ff.t_max_bb * 1e3, 0.55, 0.10, "+/- 10%");

    cmp.all_pass = true;
    for (const auto& r : cmp.rows) cmp.all_pass = cmp.all_pass && r.pass;
    return cmp;
}

std::string format_comparison(const PaperComparison& cmp) {
    std::ostringstream out;
    out << std::left << std::setw(32) << "quantity" << std::setw(14) << "computed"
        << std::setw(14) << "reference" << std::setw(12) << "tolerance"
        << "status\n";
    out << std::string(78, '-') << "\n";
    for (const auto& r : cmp.rows) {
        out << std::left << std::setw(32) << r.name << std::setw(14)
            << std::setprecision(5) << r.computed << std::setw(14) << r.reference
            << std::setw(12) << r.tolerance << (r.pass ? "pass" : "FAIL") << "\n";
    }
    out << (cmp.all_pass ? "all rows pass\n" : "FAILURES present\n");
    return out.str();
}

json comparison_json(const PaperComparison& cmp) {
    json rows = json::array();
    for (const auto& r : cmp.rows)
        rows.push_back(json{{"name", r.name},
                            {"computed", r.computed},
                            {"reference", r.reference},
                            {"tolerance", r.tolerance},
                            {"pass", r.pass}});
    return json{{"rows", rows}, {"all_pass", cmp.all_pass}};
}

} // namespace levicool
