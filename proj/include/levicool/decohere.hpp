#ifndef LEVICOOL_DECOHERE_HPP
#define LEVICOOL_DECOHERE_HPP

#include <string>
#include <utility>

#include "levicool/config.hpp"

namespace levicool {

// Blackbody localization components (Hz/m^2). The defaults are the
// reference values for a 700 K internal temperature and the recorded
// average permittivity; first-principles formulas are out of scope.
struct BlackbodyLambda {
    double scattering = 1e15;
    double emission = 2.3e20;
    double absorption = 1.4e18;
    double total() const { return scattering + emission + absorption; }
};

struct FreeFallReport {
    double Lambda_gas = 0;      // Hz/m^2, from the gas heating rate only
    double Lambda_total = 0;    // Hz/m^2, gas + recoil
    BlackbodyLambda Lambda_bb;
    double Lambda_bb_total = 0; // Hz/m^2
    double t_max = 0;           // s, short-distance coherence time
    double xi_max = 0;          // m, maximum coherence length
    double Gamma_sat = 0;       // Hz, saturated rate lambda_th^2 Lambda_gas
    double tau_target = 0;      // s, expansion time to target sigma
    double required_rate = 0;   // Hz, 1/tau_target
    double required_pressure = 0;      // Pa
    double required_pressure_mbar = 0; // echoed in mbar
    double t_max_bb = 0;        // s, blackbody-limited
    double xi_max_bb = 0;       // m
    bool blackbody_dominates = false;  // at the required pressure
    std::string sigma_of_t = "sigma(t) = x_zpf * (1 + Omega_x * t)";
};

// Lambda = Gamma / x_zpf^2 (Gamma in rad/s, Lambda in Hz/m^2).
double localization_parameter(double Gamma, double x_zpf);

// Eq. S9 pair: t_max = (3 m (2n+1) / (2 Lambda hbar omega))^(1/3),
// xi_max = sqrt(2) (2 hbar omega / (3 m Lambda^2 (2n+1)))^(1/6).
std::pair<double, double> short_distance_expansion(double Lambda, double mass,
                                                   double omega, double n_bar,
                                                   const PhysicalConstants& pc = {});

// Gamma_sat = lambda_th^2 * Lambda, with the gas-only Lambda: collisions
// are the localization mechanism once the tweezer is off.
double saturation_rate(double Lambda_gas_only, double lambda_th);

// Full free-fall forecast at the configured pressure and a target
// wavepacket size. target_sigma must be >= x_zpf.
FreeFallReport free_fall_plan(const ExperimentConfig& cfg, double target_sigma,
                              double n_bar = 0.43,
                              const BlackbodyLambda& bb = {});

} // namespace levicool

#endif
