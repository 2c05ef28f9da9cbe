#ifndef LEVICOOL_CAVITY_HPP
#define LEVICOOL_CAVITY_HPP

#include <string>
#include <vector>

#include "levicool/psd.hpp"

namespace levicool {

// One sweep of a drive laser over the cavity resonance.
struct TransmissionScan {
    std::vector<double> detuning_grid;     // rad/s, strictly monotonic
    std::vector<double> transmitted_power; // arbitrary units, >= 0
    std::string scan_id;
    double fsr = 0; // rad/s, from scan calibration metadata; 0 if absent

    void validate() const;
};

TransmissionScan read_scan_csv(const std::string& path);
void write_scan_csv(const TransmissionScan& scan, const std::string& path);

// Normalized particle-position record inferred from carrier peak heights.
struct PositionTrace {
    std::vector<double> time;                    // s
    std::vector<double> photon_number_normalized; // in [0,1], antinode = 1
    std::vector<double> offset_from_node;        // m, |x0 - lambda/4|
};

// T = (kappa/2)^2 / ((kappa/2)^2 + (delta - omega)^2)
double cavity_response(double kappa, double delta, double omega);

struct LinewidthFit {
    double kappa = 0;       // rad/s, mean over scans
    double kappa_sigma = 0; // rad/s, standard error over scans
    double fsr = 0;         // rad/s, from scan metadata when present
    std::vector<double> per_scan_kappa;
};

// Least-squares fit of each scan to amplitude*T(delta; kappa) + offset.
// Throws FitError naming the scan_id when a scan has no resolvable peak
// (peak SNR < 3).
LinewidthFit fit_linewidth(const std::vector<TransmissionScan>& scans);

struct DetuningEstimate {
    double delta = 0;  // rad/s
    double sigma = 0;  // rad/s
    bool good = false; // sigma <= 2*pi*10 kHz
    bool low_confidence = false; // ratio indistinguishable from 1
};

// Fits the classical-noise asymmetry ratio S(w)/S(-w) over a band that
// excludes the motional sideband peaks. band_lo/band_hi are positive
// angular frequencies; the mirrored negative band is used for the ratio.
DetuningEstimate estimate_detuning(const PsdTrace& psd, double band_lo,
                                   double band_hi, double kappa);

// n_phot = E_d^2 cos^2(k x0) / ((kappa/2)^2 + delta^2)
double intracavity_photons(double E_d, double kappa, double delta, double x0,
                           double k);

// Inverts n_phot ~ cos^2(k x0) on the branch nearest the node to recover
// |x0 - lambda/4|. Heights above the antinode reference raise
// CalibrationError.
PositionTrace calibrate_position(const std::vector<double>& time,
                                 const std::vector<double>& carrier_peak_heights,
                                 double antinode_reference, double k);

} // namespace levicool

#endif
