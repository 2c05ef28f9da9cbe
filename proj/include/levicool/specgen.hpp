#ifndef LEVICOOL_SPECGEN_HPP
#define LEVICOOL_SPECGEN_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "levicool/cooling.hpp"
#include "levicool/psd.hpp"

namespace levicool {

// Sideband amplitude rule. Quantum: Stokes ~ (n+1), anti-Stokes ~ n.
// Symmetrized: both ~ (n+1/2), the classical-simulation limit.
enum class SidebandConvention { quantum, symmetrized };

struct SidebandMode {
    double omega;  // rad/s
    double gamma;  // rad/s, > 0
    double n_occ;  // phonons, >= 0
    double weight; // coupling scale, 16 g^2 / kappa for the x mode
};

struct SpectrumModelParams {
    std::vector<SidebandMode> modes;
    double kappa = 0; // rad/s
    double delta = 0; // rad/s
    SidebandConvention convention = SidebandConvention::quantum;
    // optional classical noise floor added on top of the unit shot floor
    std::function<double(double)> classical_floor;

    static SpectrumModelParams from_config(const ExperimentConfig& cfg,
                                           double n_x, double gamma_x,
                                           double n_y = 0, double gamma_y = 0);
};

// Demodulated heterodyne record; complex samples, shot-noise normalized.
// The anti-Stokes sideband appears at positive frequencies.
struct TimeTrace {
    double dt = 0; // s
    std::vector<std::complex<double>> samples;
    std::uint64_t seed = 0;
    std::string model_hash;
};

// Binary format: 80-byte JSON header (dt, seed, hash, ch) padded with
// spaces, then interleaved re/im little-endian float64.
void write_trace(const TimeTrace& trace, const std::string& path);
TimeTrace read_trace(const std::string& path);

// Noiseless analytic spectrum: unit shot floor + cavity-weighted
// Lorentzian sideband pairs (+ optional classical floor).
PsdTrace heterodyne_model(const SpectrumModelParams& params,
                          const std::vector<double>& grid);

// Exact linear-response PSD of the heterodyne record of a LinearModel:
// the same quantity welch_psd estimates from simulate_langevin output.
PsdTrace linear_model_psd(const LinearModel& model, const std::vector<double>& grid);

// Multiplies each bin by an independent mean-1 Gamma variate of shape
// n_avg (averaged-periodogram statistics). Deterministic under seed.
PsdTrace synthesize_spectrum(const PsdTrace& model, int n_avg, std::uint64_t seed);

struct LangevinResult {
    TimeTrace heterodyne;
    std::vector<double> x; // mechanical quadrature samples, same rate
};

// Exact one-step discretization (matrix-exponential propagator, exact
// discrete noise covariance). The heterodyne record is the bin-averaged
// cavity output quadrature pair.
LangevinResult simulate_langevin(const LinearModel& model, double dt,
                                 double duration, std::uint64_t seed,
                                 const Eigen::Vector4d& initial_state =
                                     Eigen::Vector4d::Zero());

enum class WelchWindow { rectangular, hann };

// Averaged-modified-periodogram estimate, two-sided in signed frequency.
// White input of per-sample variance s^2 gives a flat level s^2 * dt.
PsdTrace welch_psd(const TimeTrace& trace, std::size_t segment_len,
                   WelchWindow window);
PsdTrace welch_psd_serial(const TimeTrace& trace, std::size_t segment_len,
                          WelchWindow window);

std::string model_hash(const LinearModel& model);

} // namespace levicool

#endif
