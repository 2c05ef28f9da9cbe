// Timing comparison between the OpenMP kernels and their serial
// reference implementations (detuning sweep, Welch PSD).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "levicool/budget.hpp"
#include "levicool/config.hpp"
#include "levicool/cooling.hpp"
#include "levicool/specgen.hpp"

using namespace levicool;
using clock_t_ = std::chrono::steady_clock;

static double ms_since(clock_t_::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_t_::now() - t0).count();
}

int main() {
    auto cfg = paper_defaults();

    std::vector<double> grid(201);
    for (std::size_t i = 0; i < grid.size(); ++i)
        grid[i] = two_pi * (200e3 + 300e3 * double(i) / (grid.size() - 1));
    double p_lo = cfg.environment.pressure * 0.7;
    double p_hi = cfg.environment.pressure * 1.3;

    auto t0 = clock_t_::now();
    auto serial = detuning_sweep_serial(cfg, grid, p_lo, p_hi);
    double t_serial = ms_since(t0);
    t0 = clock_t_::now();
    auto parallel = detuning_sweep(cfg, grid, p_lo, p_hi);
    double t_par = ms_since(t0);

    double max_dev = 0;
    for (std::size_t i = 0; i < serial.size(); ++i)
        if (serial[i].stable)
            max_dev = std::max(max_dev, std::abs(serial[i].n_low - parallel[i].n_low));
    std::printf("detuning_sweep  %7.1f ms serial  %7.1f ms parallel  speedup %.2fx  max dev %.3g\n",
                t_serial, t_par, t_serial / t_par, max_dev);

    auto model = make_linear_model(cfg, recoil_heating(cfg.trap, cfg.particle, 'x'));
    double dt = 0.02 * two_pi / std::max(cfg.trap.omega_x, cfg.cavity.kappa);
    auto run = simulate_langevin(model, dt, 0.25, 42);

    t0 = clock_t_::now();
    auto psd_s = welch_psd_serial(run.heterodyne, 4096, WelchWindow::hann);
    double w_serial = ms_since(t0);
    t0 = clock_t_::now();
    auto psd_p = welch_psd(run.heterodyne, 4096, WelchWindow::hann);
    double w_par = ms_since(t0);

    max_dev = 0;
    for (std::size_t i = 0; i < psd_s.psd.size(); ++i)
        max_dev = std::max(max_dev, std::abs(psd_s.psd[i] - psd_p.psd[i]));
    std::printf("welch_psd       %7.1f ms serial  %7.1f ms parallel  speedup %.2fx  max dev %.3g\n",
                w_serial, w_par, w_serial / w_par, max_dev);
    return 0;
}
