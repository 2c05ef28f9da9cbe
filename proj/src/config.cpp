#include "levicool/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "levicool/physpar.hpp"

namespace levicool {

using nlohmann::json;

double DriveSpec::rin_at(double omega) const {
    if (rin_psd.empty()) return 0.0;
    if (omega <= rin_psd.front().freq) return rin_psd.front().psd;
    if (omega >= rin_psd.back().freq) return rin_psd.back().psd;
    for (std::size_t i = 1; i < rin_psd.size(); ++i) {
        if (omega <= rin_psd[i].freq) {
            const auto& a = rin_psd[i - 1];
            const auto& b = rin_psd[i];
            double t = (omega - a.freq) / (b.freq - a.freq);
            return a.psd + t * (b.psd - a.psd);
        }
    }
    return rin_psd.back().psd;
}

namespace {

double get_num(const json& j, const std::string& section, const std::string& key,
               const std::string& unit) {
    if (!j.contains(key))
        throw ConfigError("config: missing field " + section + "." + key + " (" + unit + ")");
    if (!j.at(key).is_number())
        throw ConfigError("config: field " + section + "." + key + " must be a number (" + unit + ")");
    return j.at(key).get<double>();
}

double get_pos(const json& j, const std::string& section, const std::string& key,
               const std::string& unit) {
    double v = get_num(j, section, key, unit);
    if (v <= 0)
        throw ConfigError("config: field " + section + "." + key + " must be > 0 (" + unit + ")");
    return v;
}

} // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: JSON parse error: ") + e.what());
    }
    ExperimentConfig cfg;
    const auto& pc = cfg.constants;

    for (const char* sec : {"particle", "trap", "cavity", "environment", "drive"})
        if (!j.contains(sec))
            throw ConfigError(std::string("config: missing section ") + sec);

    {
        const json& p = j["particle"];
        cfg.particle.diameter = get_pos(p, "particle", "diameter", "m");
        cfg.particle.density = get_pos(p, "particle", "density", "kg/m^3");
        cfg.particle.refractive_eps = get_pos(p, "particle", "refractive_eps", "dimensionless");
        if (p.contains("eps_bb")) {
            if (!p["eps_bb"].is_array() || p["eps_bb"].size() != 2)
                throw ConfigError("config: particle.eps_bb must be [re, im]");
            cfg.particle.eps_bb = {p["eps_bb"][0].get<double>(), p["eps_bb"][1].get<double>()};
        }
        cfg.particle.T_internal = get_pos(p, "particle", "T_internal", "K");
        cfg.particle.radius = cfg.particle.diameter / 2.0;
        cfg.particle.mass = mass_from_diameter(cfg.particle.diameter, cfg.particle.density);
    }
    {
        const json& t = j["trap"];
        cfg.trap.power = get_pos(t, "trap", "power", "W");
        cfg.trap.wavelength = get_pos(t, "trap", "wavelength", "m");
        cfg.trap.waist_x = get_pos(t, "trap", "waist_x", "m");
        cfg.trap.waist_y = get_pos(t, "trap", "waist_y", "m");
        cfg.trap.omega_x = two_pi * get_pos(t, "trap", "freq_x", "Hz");
        cfg.trap.omega_y = two_pi * get_pos(t, "trap", "freq_y", "Hz");
        cfg.trap.omega_z = two_pi * get_pos(t, "trap", "freq_z", "Hz");
        cfg.trap.wavenumber = two_pi / cfg.trap.wavelength;
        cfg.trap.rayleigh_length =
            cfg.trap.waist_x * cfg.trap.waist_y * std::numbers::pi / cfg.trap.wavelength;
        if (!(cfg.trap.omega_x > cfg.trap.omega_y && cfg.trap.omega_y > cfg.trap.omega_z))
            cfg.warnings.push_back("trap: expected frequency ordering freq_x > freq_y > freq_z");
    }
    {
        const json& c = j["cavity"];
        cfg.cavity.kappa = two_pi * get_pos(c, "cavity", "linewidth", "Hz");
        cfg.cavity.fsr = two_pi * get_pos(c, "cavity", "fsr", "Hz");
        cfg.cavity.finesse = get_pos(c, "cavity", "finesse", "dimensionless");
        cfg.cavity.length = pc.c * std::numbers::pi / cfg.cavity.fsr;
        double finesse_calc = cfg.cavity.fsr / cfg.cavity.kappa;
        if (std::abs(finesse_calc - cfg.cavity.finesse) > 0.05 * cfg.cavity.finesse)
            cfg.warnings.push_back("cavity: finesse differs from fsr/linewidth by more than 5%");
    }
    {
        const json& e = j["environment"];
        cfg.environment.pressure = 100.0 * get_pos(e, "environment", "pressure_mbar", "mbar");
        cfg.environment.temperature = get_pos(e, "environment", "temperature", "K");
        cfg.environment.gas_molecule_mass =
            pc.u * get_pos(e, "environment", "gas_mass_u", "u");
    }
    {
        const json& d = j["drive"];
        cfg.drive.detuning = two_pi * get_num(d, "drive", "detuning", "Hz");
        cfg.drive.drive_amplitude = two_pi * get_pos(d, "drive", "drive_amplitude", "Hz");
        cfg.drive.particle_position = get_num(d, "drive", "particle_position", "m");
        cfg.drive.coupling_x = two_pi * get_pos(d, "drive", "coupling_x", "Hz");
        cfg.drive.coupling_y_frac =
            d.contains("coupling_y_frac") ? get_num(d, "drive", "coupling_y_frac", "dimensionless") : 0.0;
        cfg.drive.lo_power = get_num(d, "drive", "lo_power", "W");
        if (cfg.drive.lo_power < 0)
            throw ConfigError("config: field drive.lo_power must be >= 0 (W)");
        cfg.drive.het_freq = two_pi * get_pos(d, "drive", "het_freq", "Hz");
        cfg.drive.phase_noise_psd = get_num(d, "drive", "phase_noise_psd", "Hz^2/Hz");
        if (cfg.drive.phase_noise_psd < 0)
            throw ConfigError("config: field drive.phase_noise_psd must be >= 0 (Hz^2/Hz)");
        if (d.contains("rin_db")) {
            for (const auto& row : d["rin_db"]) {
                if (!row.is_array() || row.size() != 2)
                    throw ConfigError("config: drive.rin_db rows must be [freq_hz, dB_per_hz]");
                cfg.drive.rin_psd.push_back(
                    {two_pi * row[0].get<double>(), std::pow(10.0, row[1].get<double>() / 10.0)});
            }
            if (!std::is_sorted(cfg.drive.rin_psd.begin(), cfg.drive.rin_psd.end(),
                                [](const RinPoint& a, const RinPoint& b) { return a.freq < b.freq; }))
                throw ConfigError("config: drive.rin_db must be sorted by frequency (Hz)");
        }
        cfg.drive.c_pp = d.contains("c_pp") ? get_num(d, "drive", "c_pp", "dimensionless") : 2.5e-3;
        cfg.drive.c_qq = d.contains("c_qq") ? get_num(d, "drive", "c_qq", "dimensionless") : 2e-5;
        cfg.drive.n_int = d.contains("n_int") ? get_num(d, "drive", "n_int", "phonons") : 1e-4;

        double om_max = std::max({cfg.trap.omega_x, cfg.trap.omega_y, cfg.trap.omega_z});
        if (cfg.drive.het_freq <= om_max)
            throw ConfigError("config: drive.het_freq (Hz) must exceed all trap frequencies");
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["particle"] = {
        {"diameter", cfg.particle.diameter},
        {"density", cfg.particle.density},
        {"refractive_eps", cfg.particle.refractive_eps},
        {"eps_bb", {cfg.particle.eps_bb.real(), cfg.particle.eps_bb.imag()}},
        {"T_internal", cfg.particle.T_internal},
    };
    j["trap"] = {
        {"power", cfg.trap.power},
        {"wavelength", cfg.trap.wavelength},
        {"waist_x", cfg.trap.waist_x},
        {"waist_y", cfg.trap.waist_y},
        {"freq_x", cfg.trap.omega_x / two_pi},
        {"freq_y", cfg.trap.omega_y / two_pi},
        {"freq_z", cfg.trap.omega_z / two_pi},
    };
    j["cavity"] = {
        {"linewidth", cfg.cavity.kappa / two_pi},
        {"fsr", cfg.cavity.fsr / two_pi},
        {"finesse", cfg.cavity.finesse},
    };
    j["environment"] = {
        {"pressure_mbar", cfg.environment.pressure / 100.0},
        {"temperature", cfg.environment.temperature},
        {"gas_mass_u", cfg.environment.gas_molecule_mass / cfg.constants.u},
    };
    json rin = json::array();
    for (const auto& p : cfg.drive.rin_psd)
        rin.push_back({p.freq / two_pi, 10.0 * std::log10(p.psd)});
    j["drive"] = {
        {"detuning", cfg.drive.detuning / two_pi},
        {"drive_amplitude", cfg.drive.drive_amplitude / two_pi},
        {"particle_position", cfg.drive.particle_position},
        {"coupling_x", cfg.drive.coupling_x / two_pi},
        {"coupling_y_frac", cfg.drive.coupling_y_frac},
        {"lo_power", cfg.drive.lo_power},
        {"het_freq", cfg.drive.het_freq / two_pi},
        {"phase_noise_psd", cfg.drive.phase_noise_psd},
        {"rin_db", rin},
        {"c_pp", cfg.drive.c_pp},
        {"c_qq", cfg.drive.c_qq},
        {"n_int", cfg.drive.n_int},
    };
    return j.dump(2);
}

ExperimentConfig paper_defaults() {
    // Keep in sync with data/paper_defaults.json.
    static const char* text = R"json({
  "particle": {
    "diameter": 143e-9,
    "density": 1850.0,
    "refractive_eps": 2.1,
    "eps_bb": [2.1, 0.57],
    "T_internal": 700.0
  },
  "trap": {
    "power": 0.4,
    "wavelength": 1.064e-6,
    "waist_x": 0.67e-6,
    "waist_y": 0.77e-6,
    "freq_x": 305e3,
    "freq_y": 275e3,
    "freq_z": 80e3
  },
  "cavity": {
    "linewidth": 193e3,
    "fsr": 14.0192e9,
    "finesse": 73000
  },
  "environment": {
    "pressure_mbar": 1e-6,
    "temperature": 300.0,
    "gas_mass_u": 28.0
  },
  "drive": {
    "detuning": 315e3,
    "drive_amplitude": 4e9,
    "particle_position": 269e-9,
    "coupling_x": 71e3,
    "coupling_y_frac": 0.35,
    "lo_power": 400e-6,
    "het_freq": 10.2e6,
    "phase_noise_psd": 0.1,
    "rin_db": [[100e3, -135.0], [2e6, -135.0]],
    "c_pp": 2.5e-3,
    "c_qq": 2e-5,
    "n_int": 1e-4
  }
})json";
    return parse_config(text);
}

} // namespace levicool
