#include "krongcrf/gcrf.hpp"

#include <cmath>

namespace krongcrf {

namespace {

void check_params(double alpha, double beta, bool allow_zero_beta) {
    if (!(alpha > 0.0)) {
        throw NonPositiveParam("alpha must be positive");
    }
    if (allow_zero_beta ? !(beta >= 0.0) : !(beta > 0.0)) {
        throw NonPositiveParam("beta must be positive");
    }
}

} // namespace

GcrfProblem build_problem(BasisPtr basis, const Vector& y, const Vector& r_unstructured) {
    if (!basis) {
        throw DimensionMismatch("build_problem: null basis");
    }
    if (y.size() != basis->size() || r_unstructured.size() != basis->size()) {
        throw DimensionMismatch("build_problem: vector lengths do not match basis order");
    }
    Matrix both(y.size(), 2);
    both.col(0) = y;
    both.col(1) = r_unstructured;
    Matrix projected = basis->project(both);
    GcrfProblem p;
    p.basis = std::move(basis);
    p.c = projected.col(0);
    p.r = projected.col(1);
    return p;
}

double log_likelihood(const GcrfProblem& p, double alpha, double beta) {
    check_params(alpha, beta, /*allow_zero_beta=*/true);
    const auto& mu = p.mu_hat().array();
    const auto lambda = alpha + beta * mu;
    const auto m = alpha * p.r.array() / lambda;
    const double quad = (lambda * (p.c.array() - m).square()).sum();
    const double logdet = lambda.log().sum();
    const auto n = static_cast<double>(p.size());
    return -quad + 0.5 * logdet - 0.5 * n * std::log(M_PI);
}

std::pair<double, double> gradients(const GcrfProblem& p, double alpha, double beta) {
    check_params(alpha, beta, /*allow_zero_beta=*/true);
    const auto& mu = p.mu_hat().array();
    const auto c = p.c.array();
    const auto r = p.r.array();
    const auto lambda = alpha + beta * mu;
    const auto m = alpha * r / lambda;

    const double yty = c.square().sum();
    const double rt_mu_minus_y = (r * (m - c)).sum();
    const double mtm = m.square().sum();
    const double tr_qinv = lambda.inverse().sum();
    const double da = -yty - 2.0 * rt_mu_minus_y + mtm + 0.5 * tr_qinv;

    const double ytly = (mu * c.square()).sum();
    const double mtlm = (mu * m.square()).sum();
    const double tr_qinv_l = (mu / lambda).sum();
    const double db = -ytly + mtlm + 0.5 * tr_qinv_l;

    return {da, db};
}

FitResult fit(const GcrfProblem& p, const FitOptions& opts) {
    double u = std::log(opts.init_alpha);
    double v = std::log(opts.init_beta);
    double alpha = opts.init_alpha;
    double beta = opts.init_beta;
    double ll = log_likelihood(p, alpha, beta);

    FitResult result;
    for (int iter = 0; iter < opts.max_iter; ++iter) {
        const auto [da, db] = gradients(p, alpha, beta);
        const double gu = alpha * da; // chain rule through the exponential map
        const double gv = beta * db;

        double step = opts.init_step;
        bool accepted = false;
        double ll_next = ll;
        for (int k = 0; k < opts.max_backtrack; ++k) {
            const double u_next = u + step * gu;
            const double v_next = v + step * gv;
            const double a_next = std::exp(u_next);
            const double b_next = std::exp(v_next);
            if (std::isfinite(a_next) && std::isfinite(b_next) && a_next > 0.0 && b_next > 0.0) {
                const double cand = log_likelihood(p, a_next, b_next);
                if (std::isfinite(cand) && cand > ll) {
                    u = u_next;
                    v = v_next;
                    alpha = a_next;
                    beta = b_next;
                    ll_next = cand;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!accepted) {
            // No ascent step left at any scale: treat as converged in place.
            result.converged = true;
            break;
        }
        result.iterations = iter + 1;
        const double delta = ll_next - ll;
        ll = ll_next;
        if (std::abs(delta) < opts.tol) {
            result.converged = true;
            break;
        }
    }
    result.alpha = alpha;
    result.beta = beta;
    result.final_loglik = ll;
    return result;
}

Vector predict(const SpectralBasis& basis, double alpha, double beta,
               const Vector& r_unstructured) {
    check_params(alpha, beta, /*allow_zero_beta=*/true);
    if (r_unstructured.size() != basis.size()) {
        throw DimensionMismatch("predict: vector length does not match basis order");
    }
    Vector z = basis.project_vec(r_unstructured);
    z.array() *= alpha / (alpha + beta * basis.eigenvalues().array());
    return basis.back_project_vec(z);
}

double mse(const Vector& yhat, const Vector& y) {
    if (yhat.size() != y.size()) {
        throw DimensionMismatch("mse: length mismatch");
    }
    return (yhat - y).squaredNorm() / static_cast<double>(y.size());
}

} // namespace krongcrf
