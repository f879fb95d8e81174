#pragma once

#include "krongcrf/spectral.hpp"

#include <utility>

namespace krongcrf {

/// Learning problem projected once into the basis: everything the optimizer
/// touches afterwards is O(N) per evaluation.
struct GcrfProblem {
    BasisPtr basis;
    Vector c; // U^T y
    Vector r; // U^T R

    const Vector& mu_hat() const { return basis->eigenvalues(); }
    Index size() const { return c.size(); }
};

struct FitOptions {
    double tol = 1e-6;      // stop on |delta log-likelihood| below this
    int max_iter = 500;
    double init_step = 0.1; // backtracking restart step per iteration
    double init_alpha = 1.0;
    double init_beta = 1.0;
    int max_backtrack = 60;
};

struct FitResult {
    double alpha = 1.0;
    double beta = 1.0;
    int iterations = 0;
    double final_loglik = 0.0;
    bool converged = false;
};

/// Projects outputs and the unstructured prediction into the basis (the one
/// preprocessing pass; both columns go through a single projection).
GcrfProblem build_problem(BasisPtr basis, const Vector& y, const Vector& r_unstructured);

/// Conditional Gaussian log-density at the mean parameters implied by
/// (alpha, beta), constants included:
///   -sum lambda_i (c_i - m_i)^2 + 0.5 sum log lambda_i - N/2 log(pi)
/// with lambda_i = alpha + beta*mu_i and m_i = alpha r_i / lambda_i.
double log_likelihood(const GcrfProblem& p, double alpha, double beta);

/// Analytic (d/dalpha, d/dbeta) of log_likelihood, evaluated in O(N).
std::pair<double, double> gradients(const GcrfProblem& p, double alpha, double beta);

/// Gradient ascent on (log alpha, log beta) with backtracking step halving;
/// only likelihood-increasing steps are accepted.
FitResult fit(const GcrfProblem& p, const FitOptions& opts = {});

/// Posterior mean U diag(alpha/(alpha+beta*mu_i)) U^T R. beta = 0 returns R.
Vector predict(const SpectralBasis& basis, double alpha, double beta,
               const Vector& r_unstructured);

double mse(const Vector& yhat, const Vector& y);

} // namespace krongcrf
