#pragma once

#include <Eigen/Dense>
#include <string>

namespace contagion {

enum class Link { logit, log };

struct GlmOptions {
    double tol = 1e-8;          // relative deviance change
    int max_iter = 100;
    int max_step_halvings = 30;
};

struct GlmFit {
    Link link = Link::logit;
    Eigen::VectorXd coefficients;
    bool converged = false;
    int iterations = 0;
    double deviance = 0.0;
    Eigen::MatrixXd coefficient_covariance;  // model-based, (X'WX)^-1
    std::string note;                        // why convergence failed, if it did
};

// Bernoulli maximum likelihood with mean g^-1(X beta) via IRLS with
// step-halving. The first column of X is expected to be the intercept.
// Log-link iterates are kept strictly inside mu < 1 by halving. Returns
// converged=false with partial results when max_iter is hit, halving is
// exhausted, or fitted means collapse onto the boundary (separation, empty
// strata). Throws SingularInformation on a rank-deficient weighted design.
GlmFit fit_glm(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, Link link,
               const GlmOptions& options = {});

double predict_mean(const GlmFit& fit, const Eigen::VectorXd& x);

// Response residuals y_i - predict_mean(fit, X_i).
Eigen::VectorXd residuals(const GlmFit& fit, const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

double expit(double t);

}  // namespace contagion
