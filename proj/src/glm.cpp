#include "contagion/glm.hpp"

#include <cmath>
#include <limits>

#include "contagion/errors.hpp"

namespace contagion {

double expit(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

namespace {

constexpr double kMuClip = 1e-12;    // clip fitted means away from {0,1} in the arithmetic
constexpr double kBoundary = 1e-10;  // means this close to {0,1} mark a degenerate fit

double mean_from_eta(Link link, double eta) {
    double mu = link == Link::logit ? expit(eta) : std::exp(eta);
    if (mu < kMuClip) mu = kMuClip;
    if (mu > 1.0 - kMuClip) mu = 1.0 - kMuClip;
    return mu;
}

double deviance_from_eta(Link link, const Eigen::VectorXd& eta, const Eigen::VectorXd& y) {
    double dev = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double mu = mean_from_eta(link, eta(i));
        dev += y(i) > 0.5 ? -2.0 * std::log(mu) : -2.0 * std::log1p(-mu);
    }
    return dev;
}

bool feasible(Link link, const Eigen::VectorXd& eta) {
    if (link != Link::log) return true;
    return eta.maxCoeff() < 0.0;  // log link needs mu = exp(eta) < 1
}

Eigen::VectorXd initial_beta(Link link, const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(X.cols());
    const double ybar =
        std::min(std::max(y.mean(), 1.0 / (2.0 * static_cast<double>(y.size()))),
                 1.0 - 1.0 / (2.0 * static_cast<double>(y.size())));
    beta(0) = link == Link::logit ? std::log(ybar / (1.0 - ybar)) : std::log(ybar);
    return beta;
}

}  // namespace

GlmFit fit_glm(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, Link link,
               const GlmOptions& options) {
    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols();
    if (y.size() != n) throw ValidationError("fit_glm: X and y sizes disagree");
    if (n < p) throw SingularInformation("fit_glm: fewer rows than parameters");
    if (!X.allFinite() || !y.allFinite()) throw ValidationError("fit_glm: non-finite input");
    for (Eigen::Index i = 0; i < n; ++i)
        if (y(i) != 0.0 && y(i) != 1.0) throw ValidationError("fit_glm: y must be 0/1");

    GlmFit fit;
    fit.link = link;
    fit.coefficients = initial_beta(link, X, y);

    Eigen::VectorXd eta = X * fit.coefficients;
    double dev = deviance_from_eta(link, eta, y);

    Eigen::VectorXd mu(n), sw(n), z(n);
    // One IRLS step with step-halving; returns false when no acceptable step
    // exists from the current iterate.
    auto irls_step = [&](double& rel_change) -> bool {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double m = mean_from_eta(link, eta(i));
            mu(i) = m;
            if (link == Link::logit) {
                const double w = m * (1.0 - m);
                sw(i) = std::sqrt(w);
                z(i) = eta(i) + (y(i) - m) / w;
            } else {
                const double w = m / (1.0 - m);  // (dmu/deta)^2 / var
                sw(i) = std::sqrt(w);
                z(i) = eta(i) + (y(i) - m) / m;
            }
        }
        const Eigen::MatrixXd Xw = sw.asDiagonal() * X;
        const Eigen::VectorXd zw = sw.cwiseProduct(z);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xw);
        if (qr.rank() < p)
            throw SingularInformation("fit_glm: weighted design is rank deficient (rank " +
                                      std::to_string(qr.rank()) + " of " + std::to_string(p) +
                                      ")");
        Eigen::VectorXd beta_new = qr.solve(zw);
        Eigen::VectorXd eta_new = X * beta_new;
        const double accept_slack = 1e-11 * (std::abs(dev) + 1.0);
        double dev_new = feasible(link, eta_new) ? deviance_from_eta(link, eta_new, y)
                                                 : std::numeric_limits<double>::infinity();
        int halvings = 0;
        while ((!std::isfinite(dev_new) || dev_new > dev + accept_slack) &&
               halvings < options.max_step_halvings) {
            beta_new = 0.5 * (beta_new + fit.coefficients);
            eta_new = X * beta_new;
            dev_new = feasible(link, eta_new) ? deviance_from_eta(link, eta_new, y)
                                              : std::numeric_limits<double>::infinity();
            ++halvings;
        }
        if (!std::isfinite(dev_new) || dev_new > dev + accept_slack) return false;
        rel_change = std::abs(dev - dev_new) / (std::abs(dev_new) + 0.1);
        fit.coefficients = beta_new;
        eta = eta_new;
        dev = dev_new;
        return true;
    };

    bool deviance_settled = false;
    for (int iter = 1; iter <= options.max_iter; ++iter) {
        fit.iterations = iter;
        double rel_change = 0.0;
        if (!irls_step(rel_change)) {
            fit.note = "step-halving exhausted";
            break;
        }
        if (rel_change < options.tol) {
            deviance_settled = true;
            // One polishing step; quadratic convergence near an interior
            // optimum makes the final iterate essentially exact.
            if (fit.iterations < options.max_iter) {
                ++fit.iterations;
                double polish_change = 0.0;
                irls_step(polish_change);
            }
            break;
        }
    }
    fit.deviance = dev;
    if (!deviance_settled && fit.note.empty()) fit.note = "max iterations reached";

    // A fit whose means are ALL pinned at one clip carries no information
    // (all-zero or all-one outcomes); the likelihood has no interior maximum.
    double mu_min = 1.0, mu_max = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double m = mean_from_eta(link, eta(i));
        mu_min = std::min(mu_min, m);
        mu_max = std::max(mu_max, m);
    }
    const bool vacuous = mu_max <= kBoundary || mu_min >= 1.0 - kBoundary;

    // A coefficient this size means some cell's likelihood had no finite
    // optimum and the iterate ran off toward a boundary (for instance an all-zero
    // treatment arm under the log link).
    const bool escaped = fit.coefficients.cwiseAbs().maxCoeff() > 30.0;

    fit.converged = deviance_settled && !vacuous && !escaped;
    if (!fit.converged && fit.note.empty()) {
        fit.note = escaped ? "coefficient escaped toward a boundary"
                           : "fitted means pinned at the boundary";
    }

    // Model-based covariance (X'WX)^-1 at the final iterate.
    Eigen::MatrixXd xtwx = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double m = mean_from_eta(link, eta(i));
        const double w = link == Link::logit ? m * (1.0 - m) : m / (1.0 - m);
        xtwx.noalias() += w * X.row(i).transpose() * X.row(i);
    }
    fit.coefficient_covariance = xtwx.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
    return fit;
}

double predict_mean(const GlmFit& fit, const Eigen::VectorXd& x) {
    if (x.size() != fit.coefficients.size())
        throw ValidationError("predict_mean: covariate vector has wrong length");
    const double eta = fit.coefficients.dot(x);
    return fit.link == Link::logit ? expit(eta) : std::exp(eta);
}

Eigen::VectorXd residuals(const GlmFit& fit, const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    if (!fit.converged) throw NonConvergence("residuals: fit did not converge: " + fit.note);
    Eigen::VectorXd res(y.size());
    const Eigen::VectorXd eta = X * fit.coefficients;
    for (Eigen::Index i = 0; i < y.size(); ++i)
        res(i) = y(i) - (fit.link == Link::logit ? expit(eta(i)) : std::exp(eta(i)));
    return res;
}

}  // namespace contagion
