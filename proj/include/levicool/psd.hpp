#ifndef LEVICOOL_PSD_HPP
#define LEVICOOL_PSD_HPP

#include <string>
#include <vector>

namespace levicool {

// Frequency-resolved heterodyne spectrum in shot-noise units. Frequencies
// are angular and signed relative to the heterodyne carrier; the
// anti-Stokes sideband sits at +Omega.
struct PsdTrace {
    std::vector<double> freq; // rad/s, strictly increasing
    std::vector<double> psd;  // dimensionless, >= 0
    int n_avg = 1;            // averaged segments
    double resolution_bw = 0; // rad/s

    void validate() const; // throws std::invalid_argument on bad data
};

// CSV: `freq_hz, psd_sn_units` with `# n_avg=` / `# rbw_hz=` metadata lines.
PsdTrace read_psd_csv(const std::string& path);
void write_psd_csv(const PsdTrace& trace, const std::string& path);

} // namespace levicool

#endif
