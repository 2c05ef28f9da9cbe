#ifndef LEVICOOL_LEVMAR_HPP
#define LEVICOOL_LEVMAR_HPP

#include <Eigen/Dense>
#include <functional>

namespace levicool {

struct LevMarOptions {
    int max_iter = 300;
    double ftol = 1e-14;   // relative chi2 improvement
    double lambda0 = 1e-3; // initial damping
};

struct LevMarResult {
    Eigen::VectorXd params;
    Eigen::MatrixXd covariance; // (J^T W J)^-1 at the solution
    double chi2 = 0;
    double reduced_chi2 = 0;
    int iterations = 0;
    bool converged = false;
};

// Weighted Levenberg-Marquardt with forward-difference Jacobian.
// model(p, out): fills the model prediction on the data grid.
// sigma: per-point standard deviations (all > 0).
LevMarResult levmar_fit(
    const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& model,
    const Eigen::VectorXd& data, const Eigen::VectorXd& sigma,
    Eigen::VectorXd init, const LevMarOptions& opts = {});

} // namespace levicool

#endif
