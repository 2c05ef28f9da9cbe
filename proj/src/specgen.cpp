#include "levicool/specgen.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fftw3.h>

#include "levicool/cavity.hpp"
#include "levicool/constants.hpp"
#include "levicool/errors.hpp"
#include "levicool/rng.hpp"

namespace levicool {

namespace {

// Lorentzian with unit peak-normalization convention of the joint fit:
// L(x) = (gamma/2) / (x^2 + (gamma/2)^2), area pi.
double lorentz(double x, double gamma) {
    double hw = gamma / 2.0;
    return hw / (x * x + hw * hw);
}

} // namespace

SpectrumModelParams SpectrumModelParams::from_config(const ExperimentConfig& cfg,
                                                     double n_x, double gamma_x,
                                                     double n_y, double gamma_y) {
    SpectrumModelParams p;
    p.kappa = cfg.cavity.kappa;
    p.delta = cfg.drive.detuning;
    double g = cfg.drive.coupling_x;
    p.modes.push_back({cfg.trap.omega_x, gamma_x, n_x, 16.0 * g * g / p.kappa});
    if (gamma_y > 0) {
        double gy = cfg.drive.coupling_y_frac * g;
        p.modes.push_back({cfg.trap.omega_y, gamma_y, n_y, 16.0 * gy * gy / p.kappa});
    }
    return p;
}

PsdTrace heterodyne_model(const SpectrumModelParams& params,
                          const std::vector<double>& grid) {
    if (params.kappa <= 0)
        throw std::invalid_argument("heterodyne_model: kappa must be > 0");
    for (const auto& m : params.modes) {
        if (m.gamma <= 0)
            throw std::invalid_argument("heterodyne_model: mode gamma must be > 0");
        if (m.n_occ < 0)
            throw std::invalid_argument("heterodyne_model: mode n_occ must be >= 0");
    }
    PsdTrace out;
    out.freq = grid;
    out.psd.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double w = grid[i];
        double s = 1.0;
        if (params.classical_floor) s += params.classical_floor(w);
        for (const auto& m : params.modes) {
            double occ_S, occ_AS;
            if (params.convention == SidebandConvention::quantum) {
                occ_S = m.n_occ + 1.0;
                occ_AS = m.n_occ;
            } else {
                occ_S = occ_AS = m.n_occ + 0.5;
            }
            double a_S = m.weight * occ_S * cavity_response(params.kappa, params.delta, -m.omega);
            double a_AS = m.weight * occ_AS * cavity_response(params.kappa, params.delta, m.omega);
            s += a_S * lorentz(w + m.omega, m.gamma) + a_AS * lorentz(w - m.omega, m.gamma);
        }
        out.psd[i] = s;
    }
    if (grid.size() > 1) out.resolution_bw = grid[1] - grid[0];
    return out;
}

PsdTrace linear_model_psd(const LinearModel& model, const std::vector<double>& grid) {
    using Mat4c = Eigen::Matrix4cd;
    using Vec4c = Eigen::Vector4cd;
    const std::complex<double> I(0, 1);

    double kappa = -2.0 * model.drift(2, 2);
    double sk = std::sqrt(kappa);
    // noise channels: thermal force on p, cavity X_in, cavity Y_in
    Eigen::Matrix<double, 4, 3> B = Eigen::Matrix<double, 4, 3>::Zero();
    B(1, 0) = std::sqrt(model.diffusion(1, 1));
    B(2, 1) = std::sqrt(model.diffusion(2, 2));
    B(3, 2) = std::sqrt(model.diffusion(3, 3));

    PsdTrace out;
    out.freq = grid;
    out.psd.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        // record is conjugated so the anti-Stokes peak lands at +Omega;
        // equivalent to evaluating the direct record at -omega
        double w = -grid[i];
        Mat4c M = (I * w * Eigen::Matrix4d::Identity().cast<std::complex<double>>() -
                   model.drift.cast<std::complex<double>>());
        Eigen::Matrix<std::complex<double>, 4, 3> G = M.lu().solve(B.cast<std::complex<double>>());
        // z = sqrt(kappa) (X + iY) - a_in contribution; input spectral 1/2/quad
        Eigen::Matrix<std::complex<double>, 1, 3> H =
            sk * (G.row(2) + I * G.row(3));
        H(0, 1) -= std::sqrt(0.5);
        H(0, 2) -= std::sqrt(0.5) * I;
        out.psd[i] = H.squaredNorm();
    }
    if (grid.size() > 1) out.resolution_bw = grid[1] - grid[0];
    return out;
}

PsdTrace synthesize_spectrum(const PsdTrace& model, int n_avg, std::uint64_t seed) {
    if (n_avg < 1)
        throw std::invalid_argument("synthesize_spectrum: n_avg must be >= 1");
    model.validate();
    PsdTrace out = model;
    out.n_avg = n_avg;
    Rng rng(seed);
    for (auto& v : out.psd) v *= rng.gamma(double(n_avg)) / double(n_avg);
    return out;
}

std::string model_hash(const LinearModel& model) {
    std::uint64_t h = 1469598103934665603ull; // FNV-1a
    auto mix = [&](const Eigen::Matrix4d& m) {
        const unsigned char* p = reinterpret_cast<const unsigned char*>(m.data());
        for (std::size_t i = 0; i < sizeof(double) * 16; ++i) {
            h ^= p[i];
            h *= 1099511628211ull;
        }
    };
    mix(model.drift);
    mix(model.diffusion);
    std::ostringstream ss;
    ss << std::hex << h;
    return ss.str();
}

LangevinResult simulate_langevin(const LinearModel& model, double dt,
                                 double duration, std::uint64_t seed,
                                 const Eigen::Vector4d& initial_state) {
    if (dt <= 0 || duration <= 0)
        throw std::invalid_argument("simulate_langevin: dt and duration must be > 0");
    double omega = model.drift(0, 1);
    double kappa = -2.0 * model.drift(2, 2);
    double dt_max = 0.05 * std::min(two_pi / omega, two_pi / kappa);
    if (dt > dt_max)
        throw std::invalid_argument("simulate_langevin: dt too large for model timescales");

    Eigen::EigenSolver<Eigen::Matrix4d> es(model.drift);
    double max_re = es.eigenvalues().real().maxCoeff();
    if (max_re >= 0)
        throw InstabilityError("simulate_langevin: drift not Hurwitz");
    bool noisy = model.diffusion.norm() > 0;
    if (noisy) {
        double slowest = 2.0 * std::abs(es.eigenvalues().real().maxCoeff());
        if (duration < 100.0 / slowest)
            throw std::invalid_argument(
                "simulate_langevin: duration too short for converged statistics");
    }

    // augmented state: s(4), J = int of (X, Y), Wiener (W2, W3)
    constexpr int N = 8;
    Eigen::Matrix<double, N, N> Aa = Eigen::Matrix<double, N, N>::Zero();
    Aa.topLeftCorner<4, 4>() = model.drift;
    Aa(4, 2) = 1.0;
    Aa(5, 3) = 1.0;
    Eigen::Matrix<double, N, 3> Ba = Eigen::Matrix<double, N, 3>::Zero();
    Ba(1, 0) = std::sqrt(model.diffusion(1, 1));
    Ba(2, 1) = std::sqrt(model.diffusion(2, 2));
    Ba(3, 2) = std::sqrt(model.diffusion(3, 3));
    Ba(6, 1) = 1.0;
    Ba(7, 2) = 1.0;

    // Van Loan: exact propagator and one-step noise covariance
    Eigen::Matrix<double, 2 * N, 2 * N> M = Eigen::Matrix<double, 2 * N, 2 * N>::Zero();
    M.topLeftCorner<N, N>() = Aa;
    M.topRightCorner<N, N>() = Ba * Ba.transpose();
    M.bottomRightCorner<N, N>() = -Aa.transpose();
    Eigen::Matrix<double, 2 * N, 2 * N> E = (M * dt).exp();
    Eigen::Matrix<double, N, N> Phi = E.topLeftCorner<N, N>();
    Eigen::Matrix<double, N, N> Q = E.topRightCorner<N, N>() * Phi.transpose();
    Q = 0.5 * (Q + Q.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, N, N>> qe(Q);
    Eigen::Matrix<double, N, N> L =
        qe.eigenvectors() * qe.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();

    std::size_t nsteps = std::size_t(std::llround(duration / dt));
    LangevinResult res;
    res.heterodyne.dt = dt;
    res.heterodyne.seed = seed;
    res.heterodyne.model_hash = model_hash(model);
    res.heterodyne.samples.reserve(nsteps);
    res.x.reserve(nsteps);

    Rng rng(seed);
    Eigen::Matrix<double, N, 1> s = Eigen::Matrix<double, N, 1>::Zero();
    s.head<4>() = initial_state;
    Eigen::Matrix<double, N, 1> xi;
    double sk = std::sqrt(kappa), s2 = std::sqrt(0.5);
    for (std::size_t k = 0; k < nsteps; ++k) {
        for (int i = 0; i < N; ++i) xi[i] = noisy ? rng.normal() : 0.0;
        s = (Phi * s + L * xi).eval();
        double JX = s[4], JY = s[5], dW2 = s[6], dW3 = s[7];
        // conjugated record: anti-Stokes sideband at positive frequency
        std::complex<double> z{(sk * JX - s2 * dW2) / dt, -(sk * JY - s2 * dW3) / dt};
        res.heterodyne.samples.push_back(z);
        res.x.push_back(s[0]);
        s[4] = s[5] = s[6] = s[7] = 0.0; // integrators reset per bin
    }
    return res;
}

namespace {

void accumulate_periodogram(const TimeTrace& trace, std::size_t seg,
                            const std::vector<double>& win, double wnorm,
                            std::size_t i,
                            fftw_plan plan, fftw_complex* in, fftw_complex* out,
                            std::vector<double>& acc) {
    const auto* src = trace.samples.data() + i * seg;
    for (std::size_t k = 0; k < seg; ++k) {
        in[k][0] = src[k].real() * win[k];
        in[k][1] = src[k].imag() * win[k];
    }
    fftw_execute_dft(plan, in, out);
    for (std::size_t k = 0; k < seg; ++k)
        acc[k] += (out[k][0] * out[k][0] + out[k][1] * out[k][1]) * trace.dt / wnorm;
}

PsdTrace assemble_psd(const TimeTrace& trace, std::size_t seg, std::size_t nseg,
                      const std::vector<double>& acc) {
    PsdTrace psd;
    psd.n_avg = int(nseg);
    psd.resolution_bw = two_pi / (seg * trace.dt);
    psd.freq.resize(seg);
    psd.psd.resize(seg);
    // fftshift to a signed, increasing frequency axis
    for (std::size_t k = 0; k < seg; ++k) {
        std::size_t src = (k + (seg + 1) / 2) % seg;
        double fbin = double(src) / seg;
        if (fbin >= 0.5) fbin -= 1.0;
        psd.freq[k] = two_pi * fbin / trace.dt;
        psd.psd[k] = acc[src] / double(nseg);
    }
    return psd;
}

std::vector<double> make_window(WelchWindow window, std::size_t seg) {
    std::vector<double> win(seg, 1.0);
    if (window == WelchWindow::hann)
        for (std::size_t k = 0; k < seg; ++k)
            win[k] = 0.5 * (1.0 - std::cos(two_pi * double(k) / double(seg - 1)));
    return win;
}

} // namespace

PsdTrace welch_psd_serial(const TimeTrace& trace, std::size_t segment_len,
                          WelchWindow window) {
    if (segment_len == 0 || segment_len > trace.samples.size())
        throw std::invalid_argument("welch_psd: segment longer than trace");
    std::size_t nseg = trace.samples.size() / segment_len;
    auto win = make_window(window, segment_len);
    double wnorm = 0;
    for (double w : win) wnorm += w * w;

    std::vector<double> acc(segment_len, 0.0);
    fftw_complex* in = fftw_alloc_complex(segment_len);
    fftw_complex* out = fftw_alloc_complex(segment_len);
    fftw_plan plan = fftw_plan_dft_1d(int(segment_len), in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    for (std::size_t i = 0; i < nseg; ++i)
        accumulate_periodogram(trace, segment_len, win, wnorm, i, plan, in, out, acc);
    fftw_destroy_plan(plan);
    fftw_free(in);
    fftw_free(out);
    return assemble_psd(trace, segment_len, nseg, acc);
}

PsdTrace welch_psd(const TimeTrace& trace, std::size_t segment_len, WelchWindow window) {
    if (segment_len == 0 || segment_len > trace.samples.size())
        throw std::invalid_argument("welch_psd: segment longer than trace");
    std::size_t nseg = trace.samples.size() / segment_len;
    auto win = make_window(window, segment_len);
    double wnorm = 0;
    for (double w : win) wnorm += w * w;

    // per-segment periodograms land in their own slots; the reduction is
    // a fixed-order sum so parallel and serial results are identical
    std::vector<std::vector<double>> per(nseg);
#pragma omp parallel
    {
        fftw_complex* in;
        fftw_complex* out;
        fftw_plan plan;
#pragma omp critical(levicool_fftw_plan)
        {
            in = fftw_alloc_complex(segment_len);
            out = fftw_alloc_complex(segment_len);
            plan = fftw_plan_dft_1d(int(segment_len), in, out, FFTW_FORWARD, FFTW_ESTIMATE);
        }
#pragma omp for schedule(static)
        for (long i = 0; i < long(nseg); ++i) {
            per[i].assign(segment_len, 0.0);
            accumulate_periodogram(trace, segment_len, win, wnorm, std::size_t(i), plan, in,
                                   out, per[i]);
        }
#pragma omp critical(levicool_fftw_plan)
        {
            fftw_destroy_plan(plan);
            fftw_free(in);
            fftw_free(out);
        }
    }
    std::vector<double> acc(segment_len, 0.0);
    for (std::size_t i = 0; i < nseg; ++i)
        for (std::size_t k = 0; k < segment_len; ++k) acc[k] += per[i][k];
    return assemble_psd(trace, segment_len, nseg, acc);
}

void write_trace(const TimeTrace& trace, const std::string& path) {
    std::ostringstream hs;
    hs.precision(17); // dt must survive the text round trip bit-exactly
    hs << "{\"dt\":" << trace.dt << ",\"seed\":" << trace.seed << ",\"hash\":\""
       << trace.model_hash << "\",\"ch\":2}";
    std::string header = hs.str();
    if (header.size() > 80)
        throw std::runtime_error("write_trace: header exceeds 80 bytes");
    header.resize(80, ' ');

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.write(header.data(), 80);
    for (const auto& z : trace.samples) {
        double re = z.real(), im = z.imag();
        out.write(reinterpret_cast<const char*>(&re), 8);
        out.write(reinterpret_cast<const char*>(&im), 8);
    }
}

TimeTrace read_trace(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    char header[81] = {};
    in.read(header, 80);
    if (in.gcount() != 80)
        throw std::runtime_error("read_trace: truncated header in " + path);
    TimeTrace t;
    std::string h(header);
    auto grab = [&](const std::string& key) -> std::string {
        auto pos = h.find("\"" + key + "\":");
        if (pos == std::string::npos)
            throw std::runtime_error("read_trace: header missing " + key);
        pos += key.size() + 3;
        auto end = h.find_first_of(",}", pos);
        return h.substr(pos, end - pos);
    };
    t.dt = std::stod(grab("dt"));
    t.seed = std::stoull(grab("seed"));
    std::string hash = grab("hash");
    t.model_hash = hash.substr(1, hash.size() - 2); // strip quotes
    double buf[2];
    while (in.read(reinterpret_cast<char*>(buf), 16))
        t.samples.emplace_back(buf[0], buf[1]);
    return t;
}

} // namespace levicool
