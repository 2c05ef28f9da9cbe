#include "levicool/levmar.hpp"

#include <cmath>
#include <stdexcept>

namespace levicool {

LevMarResult levmar_fit(
    const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& model,
    const Eigen::VectorXd& data, const Eigen::VectorXd& sigma,
    Eigen::VectorXd init, const LevMarOptions& opts) {
    const auto n = data.size();
    const auto np = init.size();
    if (sigma.size() != n)
        throw std::invalid_argument("levmar_fit: sigma size mismatch");
    if ((sigma.array() <= 0).any())
        throw std::invalid_argument("levmar_fit: sigma entries must be > 0");

    Eigen::VectorXd w = sigma.cwiseInverse();
    Eigen::VectorXd y(n), resid(n), y_try(n);

    auto chi2_of = [&](const Eigen::VectorXd& p) {
        model(p, y_try);
        return ((data - y_try).cwiseProduct(w)).squaredNorm();
    };

    model(init, y);
    resid = (data - y).cwiseProduct(w);
    double chi2 = resid.squaredNorm();
    double lambda = opts.lambda0;

    Eigen::MatrixXd J(n, np);
    LevMarResult res;
    res.params = init;
    bool hit_ftol = false;

    int it = 0;
    for (; it < opts.max_iter; ++it) {
        // forward-difference Jacobian of the weighted model
        for (Eigen::Index k = 0; k < np; ++k) {
            double h = 1e-7 * std::max(std::abs(res.params[k]), 1e-12);
            Eigen::VectorXd p2 = res.params;
            p2[k] += h;
            model(p2, y_try);
            J.col(k) = ((y_try - y).cwiseProduct(w)) / h;
        }
        Eigen::MatrixXd JtJ = J.transpose() * J;
        Eigen::VectorXd Jtr = J.transpose() * resid;

        bool stepped = false;
        for (int sub = 0; sub < 12; ++sub) {
            Eigen::MatrixXd M = JtJ;
            M.diagonal() += lambda * JtJ.diagonal().cwiseMax(1e-30);
            Eigen::VectorXd step = M.ldlt().solve(Jtr);
            Eigen::VectorXd p_new = res.params + step;
            double chi2_new = chi2_of(p_new);
            if (std::isfinite(chi2_new) && chi2_new < chi2) {
                double rel = (chi2 - chi2_new) / std::max(chi2, 1e-300);
                res.params = p_new;
                model(res.params, y);
                resid = (data - y).cwiseProduct(w);
                chi2 = chi2_new;
                lambda = std::max(lambda * 0.3, 1e-12);
                stepped = true;
                if (rel < opts.ftol) { hit_ftol = true; it = opts.max_iter; }
                break;
            }
            lambda *= 10.0;
        }
        if (!stepped) break; // no downhill step found
    }

    // covariance at the solution
    for (Eigen::Index k = 0; k < np; ++k) {
        double h = 1e-7 * std::max(std::abs(res.params[k]), 1e-12);
        Eigen::VectorXd p2 = res.params;
        p2[k] += h;
        model(p2, y_try);
        J.col(k) = ((y_try - y).cwiseProduct(w)) / h;
    }
    Eigen::MatrixXd JtJ = J.transpose() * J;
    res.covariance = JtJ.ldlt().solve(Eigen::MatrixXd::Identity(np, np));
    res.chi2 = chi2;
    res.reduced_chi2 = (n > np) ? chi2 / double(n - np) : chi2;
    res.iterations = it;
    // a stall with escalated damping means a (local) minimum was reached
    res.converged = hit_ftol || it < opts.max_iter || chi2 < 1e-20;
    return res;
}

} // namespace levicool
