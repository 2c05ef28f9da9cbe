#ifndef LEVICOOL_COOLING_HPP
#define LEVICOOL_COOLING_HPP

#include <Eigen/Dense>
#include <vector>

#include "levicool/config.hpp"

namespace levicool {

struct ScatteringRates {
    double A_minus; // anti-Stokes, rad/s
    double A_plus;  // Stokes, rad/s
    double gamma_opt() const { return A_minus - A_plus; }
};

// A∓ = g^2 kappa / ((kappa/2)^2 + (delta ∓ omega)^2)
ScatteringRates scattering_rates(double g, double kappa, double delta, double omega);

// n_min = (kappa / 4 omega)^2
double backaction_limit(double kappa, double omega);

// Rate-equation steady state n = (Gamma_heat + A+) / (A- - A+).
// Throws InstabilityError when the optical damping is not positive.
double predict_occupation(double Gamma_heat, double g, double kappa,
                          double delta, double omega);

struct CoolingPoint {
    double delta;
    double gamma_opt;
    double A_minus;
    double A_plus;
    double n_min;
    double n_pred;
};

// Linearized 4D model in ground-state-normalized quadratures
// (x, p, X_cav, Y_cav); vacuum variance 1/2 per quadrature.
struct LinearModel {
    Eigen::Matrix4d drift;     // A
    Eigen::Matrix4d diffusion; // D in  A V + V A^T + D = 0
    double gamma_gas = 0;      // rad/s, mechanical damping used
    double n_th = 0;           // bath occupation used
};

// Builds the model from mechanical/cavity parameters. Gamma_extra is
// additional white force diffusion in phonons/s (recoil, phase noise).
LinearModel make_linear_model(double omega, double gamma_gas, double n_th,
                              double kappa, double delta, double g,
                              double Gamma_extra);

LinearModel make_linear_model(const ExperimentConfig& cfg, double Gamma_extra);

struct SteadyState {
    Eigen::Matrix4d covariance;
    double n_x;
    double residual; // ||A V + V A^T + D|| (Frobenius)
};

// Solves the continuous Lyapunov equation for the steady covariance.
// Throws InstabilityError (listing eigenvalues) when drift is not Hurwitz.
SteadyState steady_state_covariance(const LinearModel& model);

struct SweepPoint {
    double delta;
    double n_low;      // lower pressure bound
    double n_high;     // upper pressure bound
    double n_ultimate; // recoil-limited (p <= 1e-8 mbar)
    bool stable;
};

// Fig.2c-style band: Lyapunov occupation vs detuning at both pressure
// extremes plus the recoil-limited curve. Unstable points are flagged,
// not fatal. Parallelized over grid points; serial variant kept as the
// reference implementation.
std::vector<SweepPoint> detuning_sweep(const ExperimentConfig& cfg,
                                       const std::vector<double>& delta_grid,
                                       double pressure_low, double pressure_high);
std::vector<SweepPoint> detuning_sweep_serial(const ExperimentConfig& cfg,
                                              const std::vector<double>& delta_grid,
                                              double pressure_low, double pressure_high);

// CSV: delta_hz, n_low, n_high, n_ultimate, stable_flag
void write_sweep_csv(const std::vector<SweepPoint>& sweep, const std::string& path);

} // namespace levicool

#endif
