#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "levicool/cavity.hpp"
#include "levicool/constants.hpp"
#include "levicool/errors.hpp"
#include "levicool/rng.hpp"

using namespace levicool;

namespace {

const double kappa = two_pi * 193e3;
const double delta = two_pi * 315e3;

TransmissionScan make_scan(double kappa_true, double noise, std::uint64_t seed,
                           const std::string& id) {
    TransmissionScan s;
    s.scan_id = id;
    Rng rng(seed);
    for (int i = 0; i <= 400; ++i) {
        double d = two_pi * (-600e3 + 3e3 * i);
        double t = cavity_response(kappa_true, 0.0, d);
        s.detuning_grid.push_back(d);
        s.transmitted_power.push_back((0.05 + 0.95 * t) * (1.0 + noise * rng.normal()));
    }
    return s;
}

} // namespace

TEST_CASE("cavity response basics") {
    CHECK(cavity_response(kappa, delta, delta) == 1.0);
    CHECK(cavity_response(kappa, delta, delta + kappa / 2) == doctest::Approx(0.5));
    CHECK(cavity_response(kappa, delta, delta - kappa / 2) == doctest::Approx(0.5));
    // Stokes-side suppression at the reference operating point
    CHECK(cavity_response(kappa, delta, -two_pi * 305e3) ==
          doctest::Approx(0.02365).epsilon(1e-3));
    CHECK_THROWS_AS(cavity_response(0.0, delta, 0.0), std::invalid_argument);
}

TEST_CASE("cavity response symmetry and normalization") {
    std::mt19937_64 eng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        double k = two_pi * 100e3 * (1.0 + std::abs(u(eng)));
        double d = two_pi * 400e3 * u(eng);
        double w = two_pi * 400e3 * u(eng);
        CHECK(cavity_response(k, d, w) == doctest::Approx(cavity_response(k, w, d)));
        // Eq. S5 ratio equals the response ratio identically
        double lhs = (k * k / 4 + (w + d) * (w + d)) / (k * k / 4 + (w - d) * (w - d));
        CHECK(cavity_response(k, d, w) / cavity_response(k, d, -w) ==
              doctest::Approx(lhs).epsilon(1e-10));
    }
    // integral of T over omega is pi*(kappa/2); the +-50 kappa window
    // misses ~0.6% in the Lorentzian tails
    double sum = 0, dw = kappa / 400;
    for (double w = delta - 50 * kappa; w < delta + 50 * kappa; w += dw)
        sum += cavity_response(kappa, delta, w) * dw;
    CHECK(sum == doctest::Approx(3.14159265358979 * kappa / 2).epsilon(0.01));
}

TEST_CASE("linewidth fit recovers kappa from noisy scans") {
    std::vector<TransmissionScan> scans;
    for (int i = 0; i < 26; ++i)
        scans.push_back(make_scan(kappa, 0.02, 100 + i, "scan" + std::to_string(i)));
    auto fit = fit_linewidth(scans);
    CHECK(std::abs(fit.kappa - kappa) < two_pi * 4e3);
    CHECK(fit.per_scan_kappa.size() == 26);
    CHECK(fit.kappa_sigma > 0);
    // recovered within 3 standard errors of truth
    CHECK(std::abs(fit.kappa - kappa) < 3.0 * std::max(fit.kappa_sigma, two_pi * 1e3));
}

TEST_CASE("noiseless scan fits exactly") {
    auto fit = fit_linewidth({make_scan(kappa, 0.0, 1, "clean")});
    CHECK(fit.kappa == doctest::Approx(kappa).epsilon(1e-6));
}

TEST_CASE("flat-noise scan raises FitError naming the scan") {
    TransmissionScan s;
    s.scan_id = "flatline";
    Rng rng(9);
    for (int i = 0; i <= 200; ++i) {
        s.detuning_grid.push_back(two_pi * 3e3 * i);
        s.transmitted_power.push_back(1.0 + 0.01 * rng.normal());
    }
    try {
        fit_linewidth({s});
        FAIL("expected FitError");
    } catch (const FitError& e) {
        CHECK(std::string(e.what()).find("flatline") != std::string::npos);
    }
}

TEST_CASE("fsr metadata is averaged through") {
    auto s1 = make_scan(kappa, 0.0, 2, "a");
    auto s2 = make_scan(kappa, 0.0, 3, "b");
    s1.fsr = two_pi * 14.0e9;
    s2.fsr = two_pi * 14.2e9;
    auto fit = fit_linewidth({s1, s2});
    CHECK(fit.fsr == doctest::Approx(two_pi * 14.1e9));
}

TEST_CASE("detuning from classical-noise asymmetry") {
    // classical floor shaped by the cavity response on both sides of the
    // carrier; band chosen away from the (absent) mechanical peaks
    PsdTrace psd;
    psd.n_avg = 2000;
    for (int i = 0; i <= 3000; ++i) {
        double f = two_pi * (-180e3 + 120.0 * i);
        psd.freq.push_back(f);
        psd.psd.push_back(1.0 + 30.0 * cavity_response(kappa, delta, f));
    }
    psd.resolution_bw = psd.freq[1] - psd.freq[0];

    SUBCASE("recovers the reference detuning") {
        // the unit shot floor biases the pure-T ratio slightly; the fit
        // still has to land within the paper's stated +-10 kHz accuracy
        auto est = estimate_detuning(psd, two_pi * 50e3, two_pi * 150e3, kappa);
        CHECK(std::abs(est.delta - delta) < two_pi * 10e3);
        CHECK(est.good);
        CHECK_FALSE(est.low_confidence);
    }
    SUBCASE("zero detuning gives a flat ratio and a low-confidence flag") {
        PsdTrace flat = psd;
        for (std::size_t i = 0; i < flat.freq.size(); ++i)
            flat.psd[i] = 1.0 + 30.0 * cavity_response(kappa, 0.0, flat.freq[i]);
        auto est = estimate_detuning(flat, two_pi * 50e3, two_pi * 150e3, kappa);
        CHECK(est.low_confidence);
    }
}

TEST_CASE("intracavity photon number") {
    double E_d = two_pi * 4e9;
    double k = two_pi / 1.064e-6;
    double node = 1.064e-6 / 4.0;
    CHECK(intracavity_photons(E_d, kappa, delta, node, k) ==
          doctest::Approx(0.0).epsilon(1e-20));
    CHECK(intracavity_photons(E_d, kappa, delta, node + 3e-9, k) ==
          doctest::Approx(4.6e4).epsilon(0.05));
    CHECK(intracavity_photons(E_d, kappa, delta, 0.0, k) ==
          doctest::Approx(1.5e8).epsilon(0.05));
    CHECK_THROWS_AS(intracavity_photons(E_d, -1.0, delta, 0.0, k), std::invalid_argument);
}

TEST_CASE("position calibration inverts the cos^2 map") {
    double k = two_pi / 1.064e-6;
    std::vector<double> t, h;
    std::vector<double> offsets = {0.0, 1e-9, 4e-9, 10e-9, 20e-9};
    for (std::size_t i = 0; i < offsets.size(); ++i) {
        t.push_back(double(i));
        double s = std::sin(k * offsets[i]);
        h.push_back(s * s); // reference = 1 at the antinode
    }
    auto trace = calibrate_position(t, h, 1.0, k);
    for (std::size_t i = 0; i < offsets.size(); ++i)
        CHECK(std::abs(trace.offset_from_node[i] - offsets[i]) < 1e-9);
    // the quoted ~4 nm worst-case drift corresponds to n_phot ~ 5.6e-4
    double s4 = std::sin(k * 4e-9);
    CHECK(s4 * s4 == doctest::Approx(5.6e-4).epsilon(0.02));

    SUBCASE("height above reference is a calibration error") {
        CHECK_THROWS_AS(calibrate_position({0.0}, {1.5}, 1.0, k), CalibrationError);
    }
    SUBCASE("endpoints") {
        auto tr = calibrate_position({0.0, 1.0}, {1.0, 0.0}, 1.0, k);
        CHECK(tr.offset_from_node[0] == doctest::Approx(1.064e-6 / 4).epsilon(1e-6));
        CHECK(tr.offset_from_node[1] == 0.0);
    }
}
