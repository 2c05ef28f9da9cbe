#include "levicool/cooling.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "levicool/budget.hpp"
#include "levicool/errors.hpp"
#include "levicool/physpar.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace levicool {

ScatteringRates scattering_rates(double g, double kappa, double delta, double omega) {
    if (kappa <= 0 || omega <= 0)
        throw std::invalid_argument("scattering_rates: kappa and omega must be > 0");
    if (g < 0)
        throw std::invalid_argument("scattering_rates: g must be >= 0");
    double hw2 = kappa * kappa / 4.0;
    double g2k = g * g * kappa;
    return {g2k / (hw2 + (delta - omega) * (delta - omega)),
            g2k / (hw2 + (delta + omega) * (delta + omega))};
}

double backaction_limit(double kappa, double omega) {
    if (kappa <= 0 || omega <= 0)
        throw std::invalid_argument("backaction_limit: inputs must be > 0");
    double r = kappa / (4.0 * omega);
    return r * r;
}

double predict_occupation(double Gamma_heat, double g, double kappa,
                          double delta, double omega) {
    auto rates = scattering_rates(g, kappa, delta, omega);
    double gopt = rates.gamma_opt();
    if (gopt <= 0)
        throw InstabilityError("predict_occupation: optical damping <= 0 (anti-damping)");
    return (Gamma_heat + rates.A_plus) / gopt;
}

LinearModel make_linear_model(double omega, double gamma_gas, double n_th,
                              double kappa, double delta, double g,
                              double Gamma_extra) {
    if (omega <= 0 || kappa <= 0)
        throw std::invalid_argument("make_linear_model: omega and kappa must be > 0");
    LinearModel m;
    m.gamma_gas = gamma_gas;
    m.n_th = n_th;
    m.drift << 0, omega, 0, 0,
        -omega, -gamma_gas, -2.0 * g, 0,
        0, 0, -kappa / 2.0, delta,
        -2.0 * g, 0, -delta, -kappa / 2.0;
    m.diffusion.setZero();
    m.diffusion(1, 1) = 2.0 * gamma_gas * (n_th + 0.5) + 2.0 * Gamma_extra;
    m.diffusion(2, 2) = kappa / 2.0;
    m.diffusion(3, 3) = kappa / 2.0;
    return m;
}

LinearModel make_linear_model(const ExperimentConfig& cfg, double Gamma_extra) {
    auto gas = gas_heating(cfg.environment.pressure, cfg.environment.temperature,
                           cfg.environment.gas_molecule_mass, cfg.particle.radius,
                           cfg.particle.mass, cfg.trap.omega_x, cfg.constants);
    double n_th = cfg.constants.k_B * cfg.environment.temperature /
                  (cfg.constants.hbar * cfg.trap.omega_x);
    return make_linear_model(cfg.trap.omega_x, gas.gamma_gas, n_th, cfg.cavity.kappa,
                             cfg.drive.detuning, cfg.drive.coupling_x, Gamma_extra);
}

SteadyState steady_state_covariance(const LinearModel& model) {
    const Eigen::Matrix4d& A = model.drift;
    const Eigen::Matrix4d& D = model.diffusion;

    Eigen::EigenSolver<Eigen::Matrix4d> es(A);
    auto ev = es.eigenvalues();
    double max_re = ev.real().maxCoeff();
    if (max_re >= 0) {
        std::ostringstream ss;
        ss << "steady_state_covariance: drift not Hurwitz; eigenvalues:";
        for (int i = 0; i < 4; ++i)
            ss << " (" << ev[i].real() << (ev[i].imag() >= 0 ? "+" : "") << ev[i].imag() << "i)";
        throw InstabilityError(ss.str());
    }

    // vec(AV + VA^T) = (I (x) A + A (x) I) vec(V) = -vec(D)
    Eigen::Matrix<double, 16, 16> K = Eigen::Matrix<double, 16, 16>::Zero();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) {
                K(i + 4 * j, k + 4 * j) += A(i, k); // I (x) A
                K(i + 4 * j, i + 4 * k) += A(j, k); // A (x) I
            }
    Eigen::Matrix<double, 16, 1> d;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) d[i + 4 * j] = -D(i, j);
    Eigen::Matrix<double, 16, 1> v = K.partialPivLu().solve(d);

    SteadyState out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out.covariance(i, j) = v[i + 4 * j];
    out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
    out.residual = (A * out.covariance + out.covariance * A.transpose() + D).norm();
    // quadratures normalized so the ground state has variance 1/2 each
    out.n_x = 0.5 * (out.covariance(0, 0) + out.covariance(1, 1)) - 0.5;
    return out;
}

namespace {

SweepPoint sweep_point(const ExperimentConfig& cfg, double delta, double p_low,
                       double p_high, double Gamma_rec) {
    const auto& pc = cfg.constants;
    double n_th = pc.k_B * cfg.environment.temperature / (pc.hbar * cfg.trap.omega_x);
    SweepPoint pt{delta, 0, 0, 0, true};
    auto solve_at = [&](double pressure) {
        auto gas = gas_heating(pressure, cfg.environment.temperature,
                               cfg.environment.gas_molecule_mass, cfg.particle.radius,
                               cfg.particle.mass, cfg.trap.omega_x, pc);
        auto model = make_linear_model(cfg.trap.omega_x, gas.gamma_gas, n_th,
                                       cfg.cavity.kappa, delta, cfg.drive.coupling_x,
                                       Gamma_rec);
        return steady_state_covariance(model).n_x;
    };
    try {
        pt.n_low = solve_at(p_low);
        pt.n_high = solve_at(p_high);
        pt.n_ultimate = solve_at(1e-8 * 100.0); // 1e-8 mbar in Pa
    } catch (const InstabilityError&) {
        pt.stable = false;
        pt.n_low = pt.n_high = pt.n_ultimate = std::nan("");
    }
    return pt;
}

} // namespace

std::vector<SweepPoint> detuning_sweep_serial(const ExperimentConfig& cfg,
                                              const std::vector<double>& delta_grid,
                                              double pressure_low, double pressure_high) {
    if (delta_grid.empty())
        throw std::invalid_argument("detuning_sweep: grid must be non-empty");
    if (pressure_low > pressure_high)
        throw std::invalid_argument("detuning_sweep: pressure_low must be <= pressure_high");
    double Gamma_rec = recoil_heating(cfg.trap, cfg.particle, 'x', cfg.constants);
    std::vector<SweepPoint> out(delta_grid.size());
    for (std::size_t i = 0; i < delta_grid.size(); ++i)
        out[i] = sweep_point(cfg, delta_grid[i], pressure_low, pressure_high, Gamma_rec);
    return out;
}

std::vector<SweepPoint> detuning_sweep(const ExperimentConfig& cfg,
                                       const std::vector<double>& delta_grid,
                                       double pressure_low, double pressure_high) {
    if (delta_grid.empty())
        throw std::invalid_argument("detuning_sweep: grid must be non-empty");
    if (pressure_low > pressure_high)
        throw std::invalid_argument("detuning_sweep: pressure_low must be <= pressure_high");
    double Gamma_rec = recoil_heating(cfg.trap, cfg.particle, 'x', cfg.constants);
    std::vector<SweepPoint> out(delta_grid.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < long(delta_grid.size()); ++i)
        out[i] = sweep_point(cfg, delta_grid[i], pressure_low, pressure_high, Gamma_rec);
    return out;
}

void write_sweep_csv(const std::vector<SweepPoint>& sweep, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.precision(10);
    out << "delta_hz, n_low, n_high, n_ultimate, stable_flag\n";
    for (const auto& p : sweep)
        out << p.delta / two_pi << ", " << p.n_low << ", " << p.n_high << ", "
            << p.n_ultimate << ", " << (p.stable ? 1 : 0) << "\n";
}

} // namespace levicool
