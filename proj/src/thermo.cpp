#include "levicool/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "levicool/cavity.hpp"
#include "levicool/errors.hpp"
#include "levicool/levmar.hpp"

namespace levicool {

namespace {

double lorentz(double x, double gamma) {
    double hw = gamma / 2.0;
    return hw / (x * x + hw * hw);
}

std::string hash_psd(const PsdTrace& psd) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](const std::vector<double>& v) {
        const unsigned char* p = reinterpret_cast<const unsigned char*>(v.data());
        for (std::size_t i = 0; i < v.size() * sizeof(double); ++i) {
            h ^= p[i];
            h *= 1099511628211ull;
        }
    };
    mix(psd.freq);
    mix(psd.psd);
    std::ostringstream ss;
    ss << std::hex << h;
    return ss.str();
}

bool masked(double f, const std::vector<FreqInterval>& mask) {
    for (const auto& m : mask)
        if (f >= m.lo && f <= m.hi) return true;
    return false;
}

// local maximum above 5x floor closest to the strongest positive peak
struct PeakGuess {
    double omega, gamma, amp;
};

PeakGuess find_peak(const PsdTrace& psd, double f_lo, double f_hi) {
    std::size_t best = psd.freq.size();
    double best_v = 5.0; // 5x above the unit floor
    for (std::size_t i = 1; i + 1 < psd.freq.size(); ++i) {
        double f = psd.freq[i];
        if (f < f_lo || f > f_hi) continue;
        if (psd.psd[i] >= best_v && psd.psd[i] >= psd.psd[i - 1] &&
            psd.psd[i] >= psd.psd[i + 1]) {
            best = i;
            best_v = psd.psd[i];
        }
    }
    if (best == psd.freq.size())
        throw FitError("fit_sidebands: no peak above 5x shot floor in init band");
    double peak = psd.psd[best];
    double half = 1.0 + (peak - 1.0) / 2.0;
    std::size_t lo = best, hi = best;
    while (lo > 0 && psd.psd[lo] > half) --lo;
    while (hi + 1 < psd.freq.size() && psd.psd[hi] > half) ++hi;
    double fwhm = std::max(psd.freq[hi] - psd.freq[lo], psd.resolution_bw);
    return {psd.freq[best], fwhm, peak - 1.0};
}

} // namespace

SidebandFit fit_sidebands(const PsdTrace& psd, const std::optional<SidebandFit>& init,
                          const std::vector<FreqInterval>& mask, bool include_y) {
    psd.validate();
    double f_max = psd.freq.back();

    SidebandFit guess;
    if (init) {
        guess = *init;
    } else {
        auto pk = find_peak(psd, 0.1 * f_max, f_max);
        guess.omega_x = pk.omega;
        guess.gamma_x = pk.gamma;
        guess.a_AS = pk.amp * pk.gamma / 2.0 / (pk.gamma / 2.0); // peak amp * L(0)^-1
        guess.a_AS = pk.amp / lorentz(0.0, pk.gamma);
        // mirror for the Stokes side
        auto interp_at = [&](double f) {
            auto it = std::lower_bound(psd.freq.begin(), psd.freq.end(), f);
            std::size_t i = std::min<std::size_t>(it - psd.freq.begin(), psd.freq.size() - 1);
            return psd.psd[i];
        };
        guess.a_S = std::max(interp_at(-pk.omega) - 1.0, 0.01) / lorentz(0.0, pk.gamma);
        if (include_y) {
            // keep clear of the x peak's shoulder when hunting for y
            auto pky = find_peak(psd, 0.1 * f_max, pk.omega - 3.0 * pk.gamma);
            guess.has_y = true;
            guess.omega_y = pky.omega;
            guess.gamma_y = pky.gamma;
            guess.a_ASy = pky.amp / lorentz(0.0, pky.gamma);
            guess.a_Sy = std::max(interp_at(-pky.omega) - 1.0, 0.01) / lorentz(0.0, pky.gamma);
        }
    }
    if (include_y && !guess.has_y)
        throw std::invalid_argument("fit_sidebands: include_y set but init has no y guess");

    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < psd.freq.size(); ++i)
        if (!masked(psd.freq[i], mask)) idx.push_back(i);
    const std::size_t n = idx.size();
    const int np = include_y ? 8 : 4;
    if (n < std::size_t(np) + 4)
        throw std::invalid_argument("fit_sidebands: too few unmasked bins");

    Eigen::VectorXd data(n);
    for (std::size_t i = 0; i < n; ++i) data[i] = psd.psd[idx[i]];

    auto eval_model = [&](const Eigen::VectorXd& p, Eigen::VectorXd& out) {
        for (std::size_t i = 0; i < n; ++i) {
            double w = psd.freq[idx[i]];
            double s = 1.0 + p[0] * lorentz(w + p[2], std::abs(p[3])) +
                       p[1] * lorentz(w - p[2], std::abs(p[3]));
            if (np == 8)
                s += p[4] * lorentz(w + p[6], std::abs(p[7])) +
                     p[5] * lorentz(w - p[6], std::abs(p[7]));
            out[i] = s;
        }
    };

    Eigen::VectorXd params(np);
    params.head(4) << guess.a_S, guess.a_AS, guess.omega_x, guess.gamma_x;
    if (np == 8) params.tail(4) << guess.a_Sy, guess.a_ASy, guess.omega_y, guess.gamma_y;

    // Gamma-statistics weights sigma = S/sqrt(n_avg); two passes so the
    // weights come from the fitted model rather than the noisy data
    double rel = 1.0 / std::sqrt(double(psd.n_avg));
    Eigen::VectorXd sigma = data * rel;
    sigma = sigma.cwiseMax(1e-6);
    LevMarResult res;
    for (int pass = 0; pass < 2; ++pass) {
        res = levmar_fit(eval_model, data, sigma, params);
        params = res.params;
        Eigen::VectorXd m(n);
        eval_model(params, m);
        sigma = (m * rel).cwiseMax(1e-6);
    }
    if (!res.converged)
        throw FitError("fit_sidebands: no convergence; last chi2 = " +
                       std::to_string(res.chi2));

    // convention: x is the higher-frequency mode (freq_x > freq_y); the
    // auto-init may have latched onto the taller peak first
    if (np == 8 && std::abs(res.params[6]) > std::abs(res.params[2])) {
        Eigen::VectorXd p = res.params;
        res.params.head(4) = p.tail(4);
        res.params.tail(4) = p.head(4);
        Eigen::MatrixXd c = res.covariance;
        res.covariance.block(0, 0, 4, 4) = c.block(4, 4, 4, 4);
        res.covariance.block(4, 4, 4, 4) = c.block(0, 0, 4, 4);
        res.covariance.block(0, 4, 4, 4) = c.block(4, 0, 4, 4);
        res.covariance.block(4, 0, 4, 4) = c.block(0, 4, 4, 4);
    }

    SidebandFit out;
    out.a_S = res.params[0];
    out.a_AS = res.params[1];
    out.omega_x = res.params[2];
    out.gamma_x = std::abs(res.params[3]);
    if (np == 8) {
        out.has_y = true;
        out.a_Sy = res.params[4];
        out.a_ASy = res.params[5];
        out.omega_y = res.params[6];
        out.gamma_y = std::abs(res.params[7]);
    }
    out.covariance = res.covariance;
    out.reduced_chi2 = res.reduced_chi2;
    if (out.gamma_x <= 0)
        throw FitError("fit_sidebands: non-positive fitted linewidth");
    // peak SNR: fitted peak height over the per-bin noise scale
    double peak_amp = std::max(out.a_S, out.a_AS) * lorentz(0.0, out.gamma_x);
    out.low_confidence = peak_amp < 3.0 * rel;
    return out;
}

namespace {

double t_ratio(double kappa, double delta, double omega) {
    return cavity_response(kappa, delta, omega) / cavity_response(kappa, delta, -omega);
}

OccupationResult invert_ratio(double r, double var_r, double kappa, double delta,
                              double omega, double kappa_sigma, double delta_sigma,
                              OccupationMethod method) {
    double tr = t_ratio(kappa, delta, omega);
    double q = r / tr;
    if (q >= 1.0)
        throw FitError("occupation inversion: corrected ratio >= 1 (unphysical asymmetry; "
                       "check kappa/delta calibration)");
    double n = q / (1.0 - q);

    double dndq = 1.0 / ((1.0 - q) * (1.0 - q));
    double var_q = var_r / (tr * tr);
    // numeric sensitivities of q to the calibration inputs
    if (kappa_sigma > 0) {
        double h = 1e-6 * kappa;
        double dq = r / t_ratio(kappa + h, delta, omega) - q;
        var_q += (dq / h) * (dq / h) * kappa_sigma * kappa_sigma;
    }
    if (delta_sigma > 0) {
        double h = 1e-6 * std::max(std::abs(delta), kappa);
        double dq = r / t_ratio(kappa, delta + h, omega) - q;
        var_q += (dq / h) * (dq / h) * delta_sigma * delta_sigma;
    }
    OccupationResult out;
    out.n = n;
    out.sigma_n = dndq * std::sqrt(var_q);
    out.method = method;
    return out;
}

} // namespace

OccupationResult occupation_from_asymmetry(const SidebandFit& fit, double kappa,
                                           double delta, double kappa_sigma,
                                           double delta_sigma) {
    if (fit.a_S <= 0)
        throw std::invalid_argument("occupation_from_asymmetry: a_S must be > 0");
    if (fit.a_AS < 0)
        throw std::invalid_argument("occupation_from_asymmetry: a_AS must be >= 0");
    if (fit.a_AS == 0) {
        OccupationResult out;
        out.n = 0;
        out.sigma_n = 0;
        out.method = OccupationMethod::joint_fit;
        return out;
    }
    double r = fit.a_AS / fit.a_S;
    double var_r = 0;
    if (fit.covariance.rows() >= 2) {
        double vS = fit.covariance(0, 0), vAS = fit.covariance(1, 1);
        double cSA = fit.covariance(0, 1);
        var_r = r * r * (vAS / (fit.a_AS * fit.a_AS) + vS / (fit.a_S * fit.a_S) -
                         2.0 * cSA / (fit.a_AS * fit.a_S));
        var_r = std::max(var_r, 0.0);
    }
    auto out = invert_ratio(r, var_r, kappa, delta, fit.omega_x, kappa_sigma, delta_sigma,
                            OccupationMethod::joint_fit);
    out.low_confidence = fit.low_confidence;
    return out;
}

OccupationResult band_power_occupation(const PsdTrace& psd, FreqInterval stokes_band,
                                       FreqInterval antistokes_band, double kappa,
                                       double delta, OccupationMethod method,
                                       double kappa_sigma, double delta_sigma) {
    psd.validate();
    if (!(stokes_band.lo > 0 && stokes_band.hi > stokes_band.lo) ||
        !(antistokes_band.lo > 0 && antistokes_band.hi > antistokes_band.lo))
        throw std::invalid_argument("band_power_occupation: bands must be positive intervals");

    // trapezoidal integral of (psd - 1) plus its Gamma-statistics variance
    // and the power-weighted centroid for the cavity correction
    auto integrate = [&](double lo, double hi, bool negative_side) {
        double a = negative_side ? -hi : lo;
        double b = negative_side ? -lo : hi;
        double area = 0, var = 0, centroid = 0;
        for (std::size_t i = 1; i < psd.freq.size(); ++i) {
            double f0 = psd.freq[i - 1], f1 = psd.freq[i];
            if (f1 < a || f0 > b) continue;
            double dw = f1 - f0;
            double y0 = psd.psd[i - 1] - 1.0, y1 = psd.psd[i] - 1.0;
            area += 0.5 * (y0 + y1) * dw;
            centroid += 0.5 * (y0 * f0 + y1 * f1) * dw;
            double s0 = psd.psd[i - 1] / std::sqrt(double(psd.n_avg));
            double s1 = psd.psd[i] / std::sqrt(double(psd.n_avg));
            var += 0.25 * (s0 * s0 + s1 * s1) * dw * dw;
        }
        struct R { double area, var, centroid; } r{area, var, area != 0 ? centroid / area : 0};
        return r;
    };
    auto S = integrate(stokes_band.lo, stokes_band.hi, true);
    auto AS = integrate(antistokes_band.lo, antistokes_band.hi, false);

    // bands that do not rise significantly above the floor carry no
    // occupation information
    if (S.area <= 3.0 * std::sqrt(S.var) || AS.area < 0 ||
        (AS.area > 0 && AS.area <= 3.0 * std::sqrt(AS.var))) {
        OccupationResult out;
        out.method = method;
        out.low_confidence = true;
        out.inputs_hash = hash_psd(psd);
        return out;
    }
    double r = AS.area / S.area;
    double var_r = r * r * (AS.var / (AS.area * AS.area) + S.var / (S.area * S.area));
    double omega_eff = 0.5 * (std::abs(S.centroid) + AS.centroid);
    auto out = invert_ratio(r, var_r, kappa, delta, omega_eff, kappa_sigma, delta_sigma,
                            method);
    out.inputs_hash = hash_psd(psd);
    return out;
}

ShotNoiseVerdict shot_noise_check(const std::vector<std::pair<double, double>>& band_powers) {
    if (band_powers.size() < 3)
        throw std::invalid_argument("shot_noise_check: need at least 3 LO power levels");
    const auto n = band_powers.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (const auto& [x, y] : band_powers) {
        sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
    }
    double denom = n * sxx - sx * sx;
    ShotNoiseVerdict v;
    v.slope = (n * sxy - sx * sy) / denom;
    v.intercept = (sy * sxx - sx * sxy) / denom;
    double ss_res = 0, ss_tot = 0, ybar = sy / n;
    for (const auto& [x, y] : band_powers) {
        double e = y - (v.slope * x + v.intercept);
        ss_res += e * e;
        ss_tot += (y - ybar) * (y - ybar);
    }
    v.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    double s2 = n > 2 ? ss_res / (n - 2) : 0.0;
    v.intercept_sigma = std::sqrt(s2 * sxx / denom);
    // absolute floor keeps exact data from failing on rounding noise
    double y_scale = 0;
    for (const auto& [x, y] : band_powers) y_scale = std::max(y_scale, std::abs(y));
    v.linear = v.r_squared > 0.99 &&
               std::abs(v.intercept) <= 2.0 * v.intercept_sigma + 1e-12 * y_scale;
    return v;
}

ZTemperature z_temperature_from_harmonics(double area_ratio, double mass, double omega_z,
                                          double k, double z_R,
                                          const PhysicalConstants& pc) {
    if (area_ratio <= 0)
        throw std::invalid_argument("z_temperature_from_harmonics: ratio must be > 0");
    if (mass <= 0 || omega_z <= 0 || k <= 0 || z_R <= 0)
        throw std::invalid_argument("z_temperature_from_harmonics: inputs must be > 0");
    double geom = (k - 1.0 / z_R) / 2.0;
    double T_z = area_ratio * mass * omega_z * omega_z / (pc.k_B * geom * geom);
    return {T_z, pc.k_B * T_z / (pc.hbar * omega_z)};
}

OccupationResult crosscheck_occupation(double Gamma_gas, double Gamma_rec, double gamma_x,
                                       double sigma_gas, double sigma_rec,
                                       double sigma_gamma) {
    if (gamma_x <= 0)
        throw std::invalid_argument("crosscheck_occupation: gamma_x must be > 0");
    if (Gamma_gas < 0 || Gamma_rec < 0)
        throw std::invalid_argument("crosscheck_occupation: heating rates must be >= 0");
    OccupationResult out;
    out.method = OccupationMethod::rate_ratio;
    out.n = (Gamma_gas + Gamma_rec) / gamma_x;
    double var = (sigma_gas * sigma_gas + sigma_rec * sigma_rec) / (gamma_x * gamma_x) +
                 out.n * out.n * sigma_gamma * sigma_gamma / (gamma_x * gamma_x);
    out.sigma_n = std::sqrt(var);
    return out;
}

} // namespace levicool
