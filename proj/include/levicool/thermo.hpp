#ifndef LEVICOOL_THERMO_HPP
#define LEVICOOL_THERMO_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "levicool/constants.hpp"
#include "levicool/psd.hpp"

namespace levicool {

struct SidebandFit {
    double a_S = 0;     // Stokes amplitude, shot-noise units
    double a_AS = 0;    // anti-Stokes amplitude
    double omega_x = 0; // rad/s
    double gamma_x = 0; // rad/s
    bool has_y = false;
    double a_Sy = 0, a_ASy = 0, omega_y = 0, gamma_y = 0;
    Eigen::MatrixXd covariance; // in parameter order above (x then y block)
    double reduced_chi2 = 0;
    bool low_confidence = false; // peak SNR < 3
};

enum class OccupationMethod { joint_fit, masked_fit, band_power, worst_case, rate_ratio };

struct OccupationResult {
    double n = 0;
    double sigma_n = 0;
    OccupationMethod method = OccupationMethod::joint_fit;
    std::string inputs_hash;
    bool low_confidence = false;
};

struct FreqInterval {
    double lo; // rad/s
    double hi;
};

// Joint weighted fit of the Stokes/anti-Stokes Lorentzian pair (plus an
// optional y pair) on a shot-noise-normalized spectrum. `init` may be
// empty: peaks are then located automatically. `mask` intervals are
// excluded from the residual.
SidebandFit fit_sidebands(const PsdTrace& psd,
                          const std::optional<SidebandFit>& init = std::nullopt,
                          const std::vector<FreqInterval>& mask = {},
                          bool include_y = false);

// Inverts a_AS/a_S = [n/(n+1)] T(delta, +Omega)/T(delta, -Omega).
// kappa_sigma/delta_sigma enter the first-order error propagation; the
// defaults carry the calibration accuracies of the reference apparatus.
OccupationResult occupation_from_asymmetry(const SidebandFit& fit, double kappa,
                                           double delta,
                                           double kappa_sigma = two_pi * 4e3,
                                           double delta_sigma = two_pi * 10e3);

// Integrates (psd - 1) over mirrored bands and applies the same
// asymmetry inversion to the area ratio. Bands are given as positive
// frequency intervals; the Stokes band is mirrored to negative frequency.
OccupationResult band_power_occupation(const PsdTrace& psd, FreqInterval stokes_band,
                                       FreqInterval antistokes_band, double kappa,
                                       double delta,
                                       OccupationMethod method = OccupationMethod::band_power,
                                       double kappa_sigma = two_pi * 4e3,
                                       double delta_sigma = two_pi * 10e3);

struct ShotNoiseVerdict {
    bool linear = false;
    double slope = 0;
    double intercept = 0;
    double intercept_sigma = 0;
    double r_squared = 0;
};

// Linear regression of integrated band power vs LO power; linear when the
// intercept is consistent with zero (2 sigma) and R^2 > 0.99.
ShotNoiseVerdict shot_noise_check(const std::vector<std::pair<double, double>>& band_powers);

struct ZTemperature {
    double T_z; // K
    double n_z; // phonons
};

// Inverts area_ratio = [k_B T_z / (m Omega_z^2)] ((k - 1/z_R)/2)^2.
ZTemperature z_temperature_from_harmonics(double area_ratio, double mass, double omega_z,
                                          double k, double z_R,
                                          const PhysicalConstants& pc = {});

// n = (Gamma_gas + Gamma_rec) / gamma_x with first-order propagation.
OccupationResult crosscheck_occupation(double Gamma_gas, double Gamma_rec, double gamma_x,
                                       double sigma_gas = 0, double sigma_rec = 0,
                                       double sigma_gamma = 0);

} // namespace levicool

#endif
