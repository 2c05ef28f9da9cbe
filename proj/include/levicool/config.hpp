#ifndef LEVICOOL_CONFIG_HPP
#define LEVICOOL_CONFIG_HPP

#include <complex>
#include <string>
#include <vector>

#include "levicool/constants.hpp"
#include "levicool/errors.hpp"

namespace levicool {

// All frequencies below are angular (rad/s). Config files use ordinary Hz
// and pressure in mbar; the conversion happens on load.

struct ParticleSpec {
    double diameter = 0;        // m
    double density = 0;         // kg/m^3
    double refractive_eps = 0;  // relative permittivity (real part)
    std::complex<double> eps_bb{0, 0}; // average permittivity for blackbody
    double T_internal = 0;      // K

    double radius = 0;          // m, derived
    double mass = 0;            // kg, derived
};

struct TrapSpec {
    double power = 0;       // W
    double wavelength = 0;  // m
    double waist_x = 0;     // m
    double waist_y = 0;     // m
    double omega_x = 0;     // rad/s
    double omega_y = 0;     // rad/s
    double omega_z = 0;     // rad/s

    double wavenumber = 0;      // rad/m, derived
    double rayleigh_length = 0; // m, derived
};

struct CavitySpec {
    double kappa = 0;   // rad/s
    double fsr = 0;     // rad/s
    double finesse = 0; // dimensionless

    double length = 0;  // m, derived: c*pi/fsr
};

struct EnvironmentSpec {
    double pressure = 0;          // Pa
    double temperature = 0;       // K
    double gas_molecule_mass = 0; // kg
};

struct RinPoint {
    double freq;  // rad/s
    double psd;   // 1/Hz
};

struct DriveSpec {
    double detuning = 0;          // rad/s, omega_cav - omega_tw
    double drive_amplitude = 0;   // rad/s, E_d
    double particle_position = 0; // m along cavity axis, 0 = antinode
    double coupling_x = 0;        // rad/s, g_x
    double coupling_y_frac = 0;   // residual y coupling as fraction of g_x
    double lo_power = 0;          // W
    double het_freq = 0;          // rad/s
    double phase_noise_psd = 0;   // Hz^2/Hz at Omega_x
    std::vector<RinPoint> rin_psd; // tabulated RIN vs frequency
    double c_pp = 0;              // pass-through excess-noise constants
    double c_qq = 0;
    double n_int = 0;             // reported intensity-noise phonon constant

    // Linear interpolation in the RIN table; clamps at the table ends.
    double rin_at(double omega) const;
};

struct ExperimentConfig {
    PhysicalConstants constants;
    ParticleSpec particle;
    TrapSpec trap;
    CavitySpec cavity;
    EnvironmentSpec environment;
    DriveSpec drive;

    // Messages from soft cross-field checks (e.g. frequency ordering).
    std::vector<std::string> warnings;
};

// Parses and validates a config JSON document. Throws ConfigError with a
// field-specific message on any invariant violation.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

// Serializes back to the file schema (Hz / mbar units).
std::string config_to_json(const ExperimentConfig& cfg);

// The bundled parameter set reproducing the reference experiment.
ExperimentConfig paper_defaults();

} // namespace levicool

#endif
