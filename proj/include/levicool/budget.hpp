#ifndef LEVICOOL_BUDGET_HPP
#define LEVICOOL_BUDGET_HPP

#include "levicool/config.hpp"

namespace levicool {

struct GasHeating {
    double gamma_gas; // rad/s, momentum damping
    double Gamma_gas; // rad/s, phonon heating rate gamma * n_th
};

// Epstein free-molecular drag: gamma = 15.8 r^2 p / (m vbar),
// vbar = sqrt(8 k_B T / (pi m_gas)).
GasHeating gas_heating(double pressure, double temperature, double m_gas,
                       double radius, double mass, double omega,
                       const PhysicalConstants& pc = {});

// Rayleigh-dipole photon recoil heating for motion along the given axis
// ('x'/'y' transverse to scattering direction factor 2/5, 'z' along 1/5).
double recoil_heating(const TrapSpec& trap, const ParticleSpec& particle,
                      char axis, const PhysicalConstants& pc = {});

// n_phase = (n_phot / kappa) * S_phidot(Omega_x)
double phase_noise_phonons(double n_phot, double kappa, double S_phidot);

// gamma_int = -pi^2 nu^2 S_RIN(2 nu); nu in ordinary Hz, result in rad/s.
double intensity_noise_damping(double nu_mech_hz, double S_RIN_at_2nu);

struct BudgetItem {
    double value = 0;
    const char* unit = "";
    const char* provenance = "computed"; // or "pass-through"
};

struct HeatingBudget {
    double Gamma_gas = 0;   // rad/s
    double Gamma_rec = 0;   // rad/s
    double Gamma_phase = 0; // rad/s (0 when excluded)
    double gamma_int_x = 0; // rad/s, signed (negative = heating)
    double gamma_int_y = 0;
    double gamma_int_z = 0;
    double n_phase = 0;     // phonons
    double n_int = 0;       // phonons, pass-through
    double c_pp = 0;        // pass-through
    double c_qq = 0;        // pass-through
    double Gamma_total = 0; // rad/s
    double cooperativity = 0;
    double T_trap = 0; // s
    double N_osc = 0;  // Omega_x / Gamma_total
};

// Aggregates gas, recoil and (optionally) phase-noise heating along x and
// derives cooperativity, trap coherence time and oscillation count.
HeatingBudget total_budget(const ExperimentConfig& cfg, bool include_phase);

} // namespace levicool

#endif
