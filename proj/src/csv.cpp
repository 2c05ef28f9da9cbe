#include "levicool/psd.hpp"
#include "levicool/cavity.hpp"
#include "levicool/constants.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace levicool {

void PsdTrace::validate() const {
    if (freq.size() != psd.size())
        throw std::invalid_argument("PsdTrace: freq and psd length mismatch");
    for (std::size_t i = 1; i < freq.size(); ++i)
        if (freq[i] <= freq[i - 1])
            throw std::invalid_argument("PsdTrace: freq grid must be strictly increasing");
    for (double v : psd)
        if (!(v >= 0))
            throw std::invalid_argument("PsdTrace: psd values must be >= 0");
    if (n_avg < 1)
        throw std::invalid_argument("PsdTrace: n_avg must be >= 1");
}

namespace {

// Parses "key=value" out of a '#' metadata line, tolerating spaces.
bool meta_value(const std::string& line, const std::string& key, double* out) {
    auto pos = line.find(key + "=");
    if (pos == std::string::npos) return false;
    *out = std::stod(line.substr(pos + key.size() + 1));
    return true;
}

} // namespace

PsdTrace read_psd_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    PsdTrace t;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            double v;
            if (meta_value(line, "n_avg", &v)) t.n_avg = static_cast<int>(v);
            if (meta_value(line, "rbw_hz", &v)) t.resolution_bw = two_pi * v;
            continue;
        }
        if (!header_seen) { header_seen = true; continue; } // freq_hz, psd_sn_units
        std::istringstream ss(line);
        double f, p;
        char comma;
        if (!(ss >> f >> comma >> p))
            throw std::runtime_error("bad CSV row in " + path + ": " + line);
        t.freq.push_back(two_pi * f);
        t.psd.push_back(p);
    }
    t.validate();
    return t;
}

void write_psd_csv(const PsdTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.precision(12);
    out << "# n_avg=" << trace.n_avg << "\n";
    out << "# rbw_hz=" << trace.resolution_bw / two_pi << "\n";
    out << "freq_hz, psd_sn_units\n";
    for (std::size_t i = 0; i < trace.freq.size(); ++i)
        out << trace.freq[i] / two_pi << ", " << trace.psd[i] << "\n";
}

TransmissionScan read_scan_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    TransmissionScan s;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto pos = line.find("scan_id=");
            if (pos != std::string::npos) s.scan_id = line.substr(pos + 8);
            continue;
        }
        if (!header_seen) { header_seen = true; continue; }
        std::istringstream ss(line);
        double f, p;
        char comma;
        if (!(ss >> f >> comma >> p))
            throw std::runtime_error("bad CSV row in " + path + ": " + line);
        s.detuning_grid.push_back(two_pi * f);
        s.transmitted_power.push_back(p);
    }
    s.validate();
    return s;
}

void write_scan_csv(const TransmissionScan& scan, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.precision(12);
    if (!scan.scan_id.empty()) out << "# scan_id=" << scan.scan_id << "\n";
    out << "freq_hz, value\n";
    for (std::size_t i = 0; i < scan.detuning_grid.size(); ++i)
        out << scan.detuning_grid[i] / two_pi << ", " << scan.transmitted_power[i] << "\n";
}

} // namespace levicool
