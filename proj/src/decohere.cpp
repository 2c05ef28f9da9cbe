#include "levicool/decohere.hpp"

#include <cmath>
#include <stdexcept>
#include <tuple>

#include "levicool/budget.hpp"
#include "levicool/physpar.hpp"

namespace levicool {

double localization_parameter(double Gamma, double x_zpf) {
    if (Gamma <= 0 || x_zpf <= 0)
        throw std::domain_error("localization_parameter: inputs must be > 0");
    return Gamma / (x_zpf * x_zpf);
}

std::pair<double, double> short_distance_expansion(double Lambda, double mass,
                                                   double omega, double n_bar,
                                                   const PhysicalConstants& pc) {
    if (Lambda <= 0 || mass <= 0 || omega <= 0)
        throw std::domain_error("short_distance_expansion: Lambda, mass, omega must be > 0");
    if (n_bar < 0)
        throw std::domain_error("short_distance_expansion: n_bar must be >= 0");
    double occ = 2.0 * n_bar + 1.0;
    double t_max = std::cbrt(3.0 * mass * occ / (2.0 * Lambda * pc.hbar * omega));
    double xi_max = std::sqrt(2.0) *
                    std::pow(2.0 * pc.hbar * omega / (3.0 * mass * Lambda * Lambda * occ),
                             1.0 / 6.0);
    return {t_max, xi_max};
}

double saturation_rate(double Lambda_gas_only, double lambda_th) {
    if (Lambda_gas_only <= 0 || lambda_th <= 0)
        throw std::domain_error("saturation_rate: inputs must be > 0");
    return lambda_th * lambda_th * Lambda_gas_only;
}

FreeFallReport free_fall_plan(const ExperimentConfig& cfg, double target_sigma,
                              double n_bar, const BlackbodyLambda& bb) {
    const auto& pc = cfg.constants;
    double x_zpf = zero_point_fluctuation(cfg.particle.mass, cfg.trap.omega_x, pc);
    if (target_sigma < x_zpf)
        throw std::domain_error("free_fall_plan: target_sigma below x_zpf");

    auto gas = gas_heating(cfg.environment.pressure, cfg.environment.temperature,
                           cfg.environment.gas_molecule_mass, cfg.particle.radius,
                           cfg.particle.mass, cfg.trap.omega_x, pc);
    double Gamma_rec = recoil_heating(cfg.trap, cfg.particle, 'x', pc);
    double lambda_th = thermal_de_broglie(cfg.environment.gas_molecule_mass,
                                          cfg.environment.temperature, pc);

    FreeFallReport rep;
    rep.Lambda_gas = localization_parameter(gas.Gamma_gas, x_zpf);
    rep.Lambda_total = localization_parameter(gas.Gamma_gas + Gamma_rec, x_zpf);
    rep.Lambda_bb = bb;
    rep.Lambda_bb_total = bb.total();

    std::tie(rep.t_max, rep.xi_max) =
        short_distance_expansion(rep.Lambda_total, cfg.particle.mass,
                                 cfg.trap.omega_x, n_bar, pc);
    std::tie(rep.t_max_bb, rep.xi_max_bb) =
        short_distance_expansion(rep.Lambda_bb_total, cfg.particle.mass,
                                 cfg.trap.omega_x, n_bar, pc);

    rep.Gamma_sat = saturation_rate(rep.Lambda_gas, lambda_th);

    // free expansion sigma(t) = x_zpf (1 + Omega t), so reaching the
    // target takes tau = (target/x_zpf - 1)/Omega
    rep.tau_target = (target_sigma / x_zpf - 1.0) / cfg.trap.omega_x;
    if (rep.tau_target > 0) {
        rep.required_rate = 1.0 / rep.tau_target;
        rep.required_pressure =
            cfg.environment.pressure * (rep.required_rate / rep.Gamma_sat);
        rep.required_pressure = std::min(rep.required_pressure, cfg.environment.pressure);
    } else {
        rep.required_rate = rep.Gamma_sat; // degenerate target: no constraint
        rep.required_pressure = cfg.environment.pressure;
    }
    rep.required_pressure_mbar = rep.required_pressure * 1e-2;

    // the required pressure makes the gas rate exactly marginal (1/tau),
    // so blackbody is the binding limit when its coherence time is shorter
    // than the planned expansion
    rep.blackbody_dominates = rep.t_max_bb < rep.tau_target;
    return rep;
}

} // namespace levicool
