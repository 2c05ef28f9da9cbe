// Acceptance suite: one line of output per criterion, exit 0 only if all
// pass. Tolerances are pinned here and nowhere else.
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "levicool/budget.hpp"
#include "levicool/cavity.hpp"
#include "levicool/config.hpp"
#include "levicool/cooling.hpp"
#include "levicool/decohere.hpp"
#include "levicool/errors.hpp"
#include "levicool/physpar.hpp"
#include "levicool/rng.hpp"
#include "levicool/specgen.hpp"
#include "levicool/thermo.hpp"

using namespace levicool;

namespace {

int failures = 0;

void report(int idx, const char* name, bool ok, const std::string& detail) {
    std::printf("%s %2d. %s: %s\n", ok ? "PASS" : "FAIL", idx, name, detail.c_str());
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

bool within(double x, double ref, double rel) {
    return std::abs(x - ref) <= rel * std::abs(ref);
}

std::vector<double> centered_grid(double span, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = -span + 2.0 * span * double(i) / double(n - 1);
    return g;
}

} // namespace

int main() {
    auto cfg = paper_defaults();
    const auto& pc = cfg.constants;
    const double kappa = two_pi * 193e3;
    const double delta = two_pi * 315e3;
    const double omega = two_pi * 305e3;
    const double g = two_pi * 71e3;
    const double m = cfg.particle.mass;

    // 1. backaction limit 0.025 +/- 0.0005
    {
        double n_min = backaction_limit(kappa, omega);
        report(1, "backaction limit", std::abs(n_min - 0.025) <= 0.0005,
               fmt("n_min = %.5f (0.025 +/- 0.0005)", n_min));
    }

    // 2. cooperativity 5.0 +/- 0.2 with the measured Gamma/2pi = 20.6 kHz
    {
        double C = 4.0 * g * g / (kappa * two_pi * 20.6e3);
        report(2, "cooperativity", std::abs(C - 5.0) <= 0.2,
               fmt("C = %.3f (5.0 +/- 0.2)", C));
    }

    // 3. thermometry conversion: T = 12.2 +/- 0.1 uK, P0 = 70 +/- 1 %
    {
        auto mt = occupation_temperature(0.43, omega, pc);
        bool ok = std::abs(mt.T_mode - 12.2e-6) <= 0.1e-6 &&
                  std::abs(mt.ground_prob - 0.70) <= 0.01;
        report(3, "thermometry conversion", ok,
               fmt("T = %.3f uK, P0 = %.1f %% (12.2 +/- 0.1 uK, 70 +/- 1 %%)",
                   mt.T_mode * 1e6, mt.ground_prob * 100));
    }

    // 4. ground-state scales: x_zpf 3.1 pm +/- 2%, lambda_th 19 pm +/- 3%,
    //    ratio 6.2 +/- 0.2
    double x_zpf = zero_point_fluctuation(m, omega, pc);
    double lam_th = thermal_de_broglie(cfg.environment.gas_molecule_mass,
                                       cfg.environment.temperature, pc);
    {
        double ratio = lam_th / x_zpf;
        bool ok = within(x_zpf, 3.1e-12, 0.02) && within(lam_th, 19e-12, 0.03) &&
                  std::abs(ratio - 6.2) <= 0.2;
        report(4, "ground-state scales", ok,
               fmt("x_zpf = %.3f pm, lambda_th = %.2f pm, ratio = %.2f",
                   x_zpf * 1e12, lam_th * 1e12, ratio));
    }

    // 5. short-distance expansion: t_max 1.42 us +/- 3%, xi_max 10.2 pm
    //    +/- 3% from the measured heating; blackbody t_max 0.55 ms +/- 10%,
    //    xi_max within factor 2.5 of 2 nm
    {
        double L = localization_parameter(two_pi * 20.6e3, x_zpf);
        auto [t_max, xi_max] = short_distance_expansion(L, m, omega, 0.43, pc);
        BlackbodyLambda bb;
        auto [t_bb, xi_bb] = short_distance_expansion(bb.total(), m, omega, 0.43, pc);
        bool ok = within(t_max, 1.42e-6, 0.03) && within(xi_max, 10.2e-12, 0.03) &&
                  within(t_bb, 0.55e-3, 0.10) && xi_bb > 2e-9 / 2.5 && xi_bb < 2e-9 * 2.5;
        report(5, "coherence expansion (Eq. S9)", ok,
               fmt("t_max = %.3f us, xi_max = %.2f pm, t_max_bb = %.3f ms",
                   t_max * 1e6, xi_max * 1e12, t_bb * 1e3));
    }

    // 6. saturation regime with the measured Gamma_gas/2pi = 15 kHz
    {
        double L_gas = localization_parameter(two_pi * 15e3, x_zpf);
        double G_sat = saturation_rate(L_gas, lam_th);
        double tau = (71.5e-9 / x_zpf - 1.0) / omega;
        double rate = 1.0 / tau;
        double p_mbar = 1e-6 * rate / G_sat;
        bool ok = within(G_sat, 3.6e6, 0.15) && within(tau, 12e-3, 0.10) &&
                  rate <= 84.0 * 1.05 && p_mbar <= 2e-11 * 1.5 && p_mbar >= 2e-11 / 1.5;
        report(6, "saturated decoherence plan", ok,
               fmt("Gamma_sat = %.2f MHz, tau = %.2f ms, p = %.2e mbar",
                   G_sat / 1e6, tau * 1e3, p_mbar));
    }

    // 7. closed-loop thermometry at n_avg = 500, fixed seeds
    {
        double gamma = two_pi * 8e3;
        auto grid = centered_grid(1.5 * omega, 12001);
        std::vector<double> n_true = {0.1, 0.43, 1.0, 5.0, 50.0};
        bool ok = true;
        double sigma43 = 0;
        std::string worst;
        for (std::size_t i = 0; i < n_true.size(); ++i) {
            SpectrumModelParams p;
            p.kappa = kappa;
            p.delta = delta;
            p.modes.push_back({omega, gamma, n_true[i], 16.0 * g * g / kappa});
            auto noisy = synthesize_spectrum(heterodyne_model(p, grid), 500, 1000 + i);
            auto occ = occupation_from_asymmetry(fit_sidebands(noisy), kappa, delta);
            if (std::abs(occ.n - n_true[i]) >= 3.0 * occ.sigma_n) {
                ok = false;
                worst = fmt(" n_true=%.2f -> %.3f +/- %.3f", n_true[i], occ.n, occ.sigma_n);
            }
            if (n_true[i] == 0.43) sigma43 = occ.sigma_n;
        }
        ok = ok && sigma43 <= 0.05;
        report(7, "closed-loop thermometry", ok,
               fmt("all n in {0.1..50} within 3 sigma; sigma_n(0.43) = %.3f", sigma43) +
                   worst);
    }

    // 8. method consistency on shared synthetic data with a y mode
    {
        double gm = two_pi * 4e3;
        auto grid = centered_grid(1.5 * omega, 24001);
        auto params = SpectrumModelParams::from_config(cfg, 0.43, gm, 6.0, gm);
        auto noisy = synthesize_spectrum(heterodyne_model(params, grid), 500, 91);

        auto joint = occupation_from_asymmetry(
            fit_sidebands(noisy, std::nullopt, {}, true), kappa, delta);
        double oy = cfg.trap.omega_y;
        std::vector<FreqInterval> mask = {{oy - 5 * gm, oy + 5 * gm},
                                          {-oy - 5 * gm, -oy + 5 * gm}};
        auto masked = occupation_from_asymmetry(
            fit_sidebands(noisy, std::nullopt, mask, false), kappa, delta);
        FreqInterval xband{omega - two_pi * 25e3, omega + two_pi * 25e3};
        auto band = band_power_occupation(noisy, xband, xband, kappa, delta);
        FreqInterval full{two_pi * 250e3, two_pi * 350e3};
        auto worst = band_power_occupation(noisy, full, full, kappa, delta,
                                           OccupationMethod::worst_case);

        auto agree = [](const OccupationResult& a, const OccupationResult& b) {
            return std::abs(a.n - b.n) < 2.0 * (a.sigma_n + b.sigma_n);
        };
        bool ok = agree(joint, masked) && agree(joint, band) &&
                  worst.n > joint.n && worst.n < 1.0;
        report(8, "method consistency", ok,
               fmt("joint %.3f, masked %.3f, band %.3f", joint.n, masked.n, band.n) +
                   fmt(", worst-case %.3f", worst.n));
    }

    // 9. oracle equivalence: Lyapunov vs rate equation, Welch vs analytic
    //    PSD, trace variance vs Lyapunov covariance
    {
        std::mt19937_64 eng(11);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        int checked = 0, within10 = 0;
        for (int i = 0; i < 100; ++i) {
            double om = two_pi * (150e3 + 400e3 * u(eng));
            double kap = two_pi * (100e3 + 200e3 * u(eng));
            double del = om * (0.8 + 0.4 * u(eng));
            double gg = kap / 10.0 * (0.3 + 0.7 * u(eng));
            double gamma_gas = 1e-3 * (1.0 + u(eng));
            double n_th = 1e6 * (1.0 + 10.0 * u(eng));
            auto model = make_linear_model(om, gamma_gas, n_th, kap, del, gg, 0.0);
            double n_lyap;
            try {
                n_lyap = steady_state_covariance(model).n_x;
            } catch (const InstabilityError&) {
                continue;
            }
            double n_rate = predict_occupation(gamma_gas * n_th, gg, kap, del, om);
            ++checked;
            if (std::abs(n_lyap - n_rate) / n_rate < 0.10) ++within10;
        }
        bool rate_ok = checked > 80 && within10 == checked;

        auto model = make_linear_model(cfg, recoil_heating(cfg.trap, cfg.particle, 'x'));
        double dt = 0.02 / 305e3;
        auto run = simulate_langevin(model, dt, 0.3, 1234);
        auto est = welch_psd(run.heterodyne, 2048, WelchWindow::hann);
        auto ref = linear_model_psd(model, est.freq);
        double num = 0, den = 0;
        for (std::size_t i = 0; i < est.freq.size(); ++i) {
            if (std::abs(est.freq[i]) > 1.5 * omega) continue;
            double e = est.psd[i] / ref.psd[i] - 1.0;
            num += e * e;
            den += 1.0;
        }
        double rms = std::sqrt(num / den);

        double n_th = 50.0, gamma = two_pi * 20e3;
        auto damped = make_linear_model(omega, gamma, n_th, kappa, delta, 0.0, 0.0);
        auto ss = steady_state_covariance(damped);
        auto run2 = simulate_langevin(damped, dt, 0.3, 22);
        double var = 0;
        for (double v : run2.x) var += v * v;
        var /= double(run2.x.size());
        double var_err = std::abs(var / ss.covariance(0, 0) - 1.0);

        bool ok = rate_ok && rms < 0.05 && var_err < 0.03;
        report(9, "oracle equivalence", ok,
               fmt("rate-eq agree %.0f/%.0f, PSD RMS = %.3f",
                   double(within10), double(checked), rms) +
                   fmt(", var err = %.3f", var_err));
    }

    // 10. detuning sweep band minimum and bracket
    {
        std::vector<double> grid;
        for (int i = 0; i <= 60; ++i) grid.push_back(two_pi * (200e3 + 5e3 * i));
        auto sweep = detuning_sweep(cfg, grid, cfg.environment.pressure * 0.7,
                                    cfg.environment.pressure * 1.3);
        std::size_t i_min = 0;
        bool bracket = false;
        double b_lo = 0, b_hi = 0;
        for (std::size_t i = 0; i < sweep.size(); ++i) {
            if (sweep[i].stable && sweep[i].n_low < sweep[i_min].n_low) i_min = i;
            if (std::abs(sweep[i].delta - delta) < two_pi * 1e3) {
                bracket = sweep[i].stable && sweep[i].n_low < 0.43 && sweep[i].n_high > 0.43;
                b_lo = sweep[i].n_low;
                b_hi = sweep[i].n_high;
            }
        }
        bool min_ok = std::abs(sweep[i_min].delta - omega) <= two_pi * 5.01e3;
        report(10, "detuning sweep", min_ok && bracket,
               fmt("minimum at %.1f kHz, band at 315 kHz = [%.3f, %.3f]",
                   sweep[i_min].delta / two_pi / 1e3, b_lo, b_hi));
    }

    // 11. noise budget components
    {
        auto b = total_budget(cfg, false);
        bool gas_ok = b.Gamma_gas < 2.0 * two_pi * 16.1e3 &&
                      b.Gamma_gas > 0.5 * two_pi * 16.1e3;
        bool rec_ok = b.Gamma_rec < 2.0 * two_pi * 6e3 && b.Gamma_rec > 0.5 * two_pi * 6e3;
        bool phase_ok = b.n_phase < 0.025;
        bool rin_ok = b.gamma_int_x / two_pi >= -10e-3 && b.gamma_int_x / two_pi <= -2e-3;
        report(11, "noise budget", gas_ok && rec_ok && phase_ok && rin_ok,
               fmt("Gamma_gas = %.1f kHz, Gamma_rec = %.1f kHz, n_phase = %.4f",
                   b.Gamma_gas / two_pi / 1e3, b.Gamma_rec / two_pi / 1e3, b.n_phase) +
                   fmt(", gamma_int = %.1f mHz", b.gamma_int_x / two_pi * 1e3));
    }

    // 12. calibration fits
    {
        std::vector<TransmissionScan> scans;
        for (int i = 0; i < 26; ++i) {
            TransmissionScan s;
            s.scan_id = "scan" + std::to_string(i);
            Rng rng(100 + i);
            for (int j = 0; j <= 400; ++j) {
                double d = two_pi * (-600e3 + 3e3 * j);
                double t = cavity_response(kappa, 0.0, d);
                s.detuning_grid.push_back(d);
                s.transmitted_power.push_back((0.05 + 0.95 * t) *
                                              (1.0 + 0.02 * rng.normal()));
            }
            scans.push_back(std::move(s));
        }
        auto lf = fit_linewidth(scans);
        bool kappa_ok = std::abs(lf.kappa - kappa) < two_pi * 4e3;

        PsdTrace psd;
        psd.n_avg = 2000;
        for (int i = 0; i <= 3000; ++i) {
            double f = two_pi * (-180e3 + 120.0 * i);
            psd.freq.push_back(f);
            psd.psd.push_back(1.0 + 30.0 * cavity_response(kappa, delta, f));
        }
        psd.resolution_bw = psd.freq[1] - psd.freq[0];
        auto est = estimate_detuning(psd, two_pi * 50e3, two_pi * 150e3, kappa);
        bool delta_ok = std::abs(est.delta - delta) < two_pi * 10e3;

        std::vector<std::pair<double, double>> pts;
        for (int i = 1; i <= 8; ++i) pts.emplace_back(50e-6 * i, 3.2e-3 * 50e-6 * i);
        bool lin_ok = shot_noise_check(pts).linear;
        auto quad = pts;
        for (auto& [x, y] : quad) y += 0.1 * y * (x / quad.back().first);
        bool quad_ok = !shot_noise_check(quad).linear;

        report(12, "calibration fits", kappa_ok && delta_ok && lin_ok && quad_ok,
               fmt("kappa = %.1f kHz, delta = %.1f kHz", lf.kappa / two_pi / 1e3,
                   est.delta / two_pi / 1e3) +
                   (lin_ok && quad_ok ? ", shot-noise verdicts ok"
                                      : ", shot-noise verdicts WRONG"));
    }

    // 13. z thermometry: n_z = 2e7 +/- 5% at T_z = 80 K
    {
        double geom = (cfg.trap.wavenumber - 1.0 / cfg.trap.rayleigh_length) / 2.0;
        double ratio = pc.k_B * 80.0 / (m * cfg.trap.omega_z * cfg.trap.omega_z) *
                       geom * geom;
        auto zt = z_temperature_from_harmonics(ratio, m, cfg.trap.omega_z,
                                               cfg.trap.wavenumber,
                                               cfg.trap.rayleigh_length, pc);
        bool ok = within(zt.n_z, 2e7, 0.05) && std::abs(zt.T_z - 80.0) < 1e-9;
        report(13, "z thermometry", ok,
               fmt("T_z = %.1f K -> n_z = %.3g (2e7 +/- 5%%)", zt.T_z, zt.n_z));
    }

    if (failures == 0) {
        std::printf("ALL 13 ACCEPTANCE CRITERIA PASS\n");
        return 0;
    }
    std::printf("%d criterion(s) FAILED\n", failures);
    return 1;
}
