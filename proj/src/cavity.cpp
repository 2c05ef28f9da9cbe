#include "levicool/cavity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "levicool/constants.hpp"
#include "levicool/errors.hpp"
#include "levicool/levmar.hpp"

namespace levicool {

void TransmissionScan::validate() const {
    if (detuning_grid.size() != transmitted_power.size())
        throw std::invalid_argument("TransmissionScan: grid and power length mismatch");
    if (detuning_grid.size() < 5)
        throw std::invalid_argument("TransmissionScan: too few points");
    bool inc = detuning_grid[1] > detuning_grid[0];
    for (std::size_t i = 1; i < detuning_grid.size(); ++i) {
        bool step_inc = detuning_grid[i] > detuning_grid[i - 1];
        if (step_inc != inc || detuning_grid[i] == detuning_grid[i - 1])
            throw std::invalid_argument("TransmissionScan: grid must be strictly monotonic");
    }
    for (double p : transmitted_power)
        if (!(p >= 0))
            throw std::invalid_argument("TransmissionScan: powers must be >= 0");
}

double cavity_response(double kappa, double delta, double omega) {
    if (kappa <= 0)
        throw std::invalid_argument("cavity_response: kappa must be > 0");
    double hw = kappa / 2.0;
    double d = delta - omega;
    return hw * hw / (hw * hw + d * d);
}

namespace {

double median(std::vector<double> v) {
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    return v[v.size() / 2];
}

// robust spread via median absolute deviation
double mad_spread(const std::vector<double>& v, double med) {
    std::vector<double> dev(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) dev[i] = std::abs(v[i] - med);
    return 1.4826 * median(dev);
}

struct ScanFit {
    double kappa, center, amplitude, offset;
};

ScanFit fit_one_scan(const TransmissionScan& scan) {
    const auto& x = scan.detuning_grid;
    const auto& y = scan.transmitted_power;
    const auto n = x.size();

    double base = median(y);
    double spread = mad_spread(y, base);
    auto it_max = std::max_element(y.begin(), y.end());
    double peak = *it_max;
    double snr = spread > 0 ? (peak - base) / spread : (peak > base ? 1e12 : 0.0);
    if (snr < 3.0)
        throw FitError("fit_linewidth: no resolvable peak (SNR < 3) in scan '" +
                       scan.scan_id + "'");

    std::size_t i_max = std::size_t(it_max - y.begin());
    double half = base + 0.5 * (peak - base);
    // crude FWHM from half-max crossings around the peak
    std::size_t lo = i_max, hi = i_max;
    while (lo > 0 && y[lo] > half) --lo;
    while (hi + 1 < n && y[hi] > half) ++hi;
    double fwhm = std::abs(x[hi] - x[lo]);
    if (fwhm <= 0) fwhm = std::abs(x.back() - x.front()) / 10.0;

    Eigen::VectorXd data(n), sigma(n), init(4);
    for (std::size_t i = 0; i < n; ++i) data[i] = y[i];
    sigma.setConstant(std::max(spread, 1e-6 * std::max(peak, 1.0)));
    init << fwhm, x[i_max], peak - base, base;

    auto model = [&](const Eigen::VectorXd& p, Eigen::VectorXd& out) {
        double hw = std::abs(p[0]) / 2.0;
        for (std::size_t i = 0; i < n; ++i) {
            double d = x[i] - p[1];
            out[i] = p[2] * hw * hw / (hw * hw + d * d) + p[3];
        }
    };
    auto res = levmar_fit(model, data, sigma, init);
    if (!res.converged)
        throw FitError("fit_linewidth: fit did not converge for scan '" + scan.scan_id + "'");
    return {std::abs(res.params[0]), res.params[1], res.params[2], res.params[3]};
}

} // namespace

LinewidthFit fit_linewidth(const std::vector<TransmissionScan>& scans) {
    if (scans.empty())
        throw std::invalid_argument("fit_linewidth: need at least one scan");
    LinewidthFit out;
    std::vector<double> fsrs;
    for (const auto& s : scans) {
        s.validate();
        out.per_scan_kappa.push_back(fit_one_scan(s).kappa);
        if (s.fsr > 0) fsrs.push_back(s.fsr);
    }
    const auto n = out.per_scan_kappa.size();
    double mean = std::accumulate(out.per_scan_kappa.begin(), out.per_scan_kappa.end(), 0.0) / n;
    out.kappa = mean;
    if (n > 1) {
        double ss = 0;
        for (double k : out.per_scan_kappa) ss += (k - mean) * (k - mean);
        out.kappa_sigma = std::sqrt(ss / (n - 1) / n); // standard error of the mean
    }
    if (!fsrs.empty())
        out.fsr = std::accumulate(fsrs.begin(), fsrs.end(), 0.0) / fsrs.size();
    return out;
}

DetuningEstimate estimate_detuning(const PsdTrace& psd, double band_lo,
                                   double band_hi, double kappa) {
    psd.validate();
    if (kappa <= 0)
        throw std::invalid_argument("estimate_detuning: kappa must be > 0");
    if (!(band_lo > 0 && band_hi > band_lo))
        throw std::invalid_argument("estimate_detuning: need 0 < band_lo < band_hi");
    if (psd.freq.front() > -band_hi || psd.freq.back() < band_hi)
        throw std::invalid_argument("estimate_detuning: psd must cover +-band around the carrier");

    auto interp = [&](double f) {
        auto it = std::lower_bound(psd.freq.begin(), psd.freq.end(), f);
        if (it == psd.freq.begin()) return psd.psd.front();
        if (it == psd.freq.end()) return psd.psd.back();
        std::size_t i = std::size_t(it - psd.freq.begin());
        double t = (f - psd.freq[i - 1]) / (psd.freq[i] - psd.freq[i - 1]);
        return psd.psd[i - 1] + t * (psd.psd[i] - psd.psd[i - 1]);
    };

    // the asymmetry lives in the classical noise; subtract the unit shot
    // floor so it does not dilute the ratio
    std::vector<double> w, r;
    for (std::size_t i = 0; i < psd.freq.size(); ++i) {
        double f = psd.freq[i];
        if (f < band_lo || f > band_hi) continue;
        double s_pos = psd.psd[i] - 1.0;
        double s_neg = interp(-f) - 1.0;
        if (s_neg <= 0 || s_pos <= 0) continue;
        w.push_back(f);
        r.push_back(s_pos / s_neg);
    }
    if (w.size() < 8)
        throw std::invalid_argument("estimate_detuning: too few bins in band");

    const auto n = w.size();
    // ratio of two independent averaged periodograms: var(r)/r^2 ~= 2/n_avg
    double rel_sigma = std::sqrt(2.0 / psd.n_avg);
    Eigen::VectorXd data(n), sigma(n), init(1);
    for (std::size_t i = 0; i < n; ++i) {
        data[i] = r[i];
        sigma[i] = std::max(r[i] * rel_sigma, 1e-9);
    }
    double hw2 = kappa * kappa / 4.0;
    auto model = [&](const Eigen::VectorXd& p, Eigen::VectorXd& out) {
        double d = p[0];
        for (std::size_t i = 0; i < n; ++i) {
            double num = hw2 + (w[i] + d) * (w[i] + d);
            double den = hw2 + (w[i] - d) * (w[i] - d);
            out[i] = num / den;
        }
    };
    // the ratio is non-monotonic in delta (mirror branch below
    // sqrt((kappa/2)^2 + omega^2)); coarse-scan first, then refine
    double best_chi2 = -1.0, best_delta = 0.0;
    Eigen::VectorXd m(n);
    for (int s = -400; s <= 400; ++s) {
        Eigen::VectorXd p(1);
        p << 0.02 * s * band_hi;
        model(p, m);
        double chi2 = ((data - m).cwiseQuotient(sigma)).squaredNorm();
        if (best_chi2 < 0 || chi2 < best_chi2) {
            best_chi2 = chi2;
            best_delta = p[0];
        }
    }
    init << best_delta;
    auto res = levmar_fit(model, data, sigma, init);
    // the model in delta has a mirror solution; keep the sign from the data
    DetuningEstimate est;
    est.delta = res.params[0];
    est.sigma = std::sqrt(std::max(res.covariance(0, 0), 0.0));
    est.good = est.sigma <= two_pi * 10e3;
    est.low_confidence = std::abs(est.delta) < 2.0 * est.sigma;
    // flat ratio check: chi2 against r == 1
    double chi2_flat = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double z = (data[i] - 1.0) / sigma[i];
        chi2_flat += z * z;
    }
    if (chi2_flat < n + 3.0 * std::sqrt(2.0 * n)) est.low_confidence = true;
    return est;
}

double intracavity_photons(double E_d, double kappa, double delta, double x0, double k) {
    if (kappa <= 0)
        throw std::invalid_argument("intracavity_photons: kappa must be > 0");
    double c = std::cos(k * x0);
    double hw = kappa / 2.0;
    return E_d * E_d * c * c / (hw * hw + delta * delta);
}

PositionTrace calibrate_position(const std::vector<double>& time,
                                 const std::vector<double>& carrier_peak_heights,
                                 double antinode_reference, double k) {
    if (antinode_reference <= 0)
        throw std::invalid_argument("calibrate_position: antinode_reference must be > 0");
    if (time.size() != carrier_peak_heights.size())
        throw std::invalid_argument("calibrate_position: time and heights length mismatch");
    PositionTrace out;
    out.time = time;
    for (double h : carrier_peak_heights) {
        if (h < 0)
            throw std::invalid_argument("calibrate_position: heights must be >= 0");
        if (h > antinode_reference * (1.0 + 1e-12))
            throw CalibrationError(
                "calibrate_position: height exceeds antinode reference (reference not maximal)");
        double n = std::min(h / antinode_reference, 1.0);
        out.photon_number_normalized.push_back(n);
        // near the node x0 = lambda/4 + d: n_phot = sin^2(k d)
        out.offset_from_node.push_back(std::asin(std::sqrt(n)) / k);
    }
    return out;
}

} // namespace levicool
