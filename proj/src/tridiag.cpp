#include "krongcrf/tridiag.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace krongcrf::tridiag {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Reflector H = I - tau [1; v][1; v]^T with H y = beta e1. On return y[0] = 1
// (the explicit head the panel algebra wants) and y[1:] holds v.
double make_householder(Eigen::Ref<Vector> y, double& beta) {
    const Index m = y.size();
    const double alpha = y[0];
    const double sigma = m > 1 ? y.tail(m - 1).squaredNorm() : 0.0;
    if (sigma == 0.0) {
        beta = alpha;
        y[0] = 1.0;
        return 0.0;
    }
    const double mu = std::sqrt(alpha * alpha + sigma);
    double v0;
    if (alpha <= 0.0) {
        beta = mu;
        v0 = alpha - mu;
    } else {
        beta = -mu;
        v0 = alpha + mu;
    }
    const double tau = 2.0 * v0 * v0 / (sigma + v0 * v0);
    y.tail(m - 1) /= v0;
    y[0] = 1.0;
    return tau;
}

} // namespace

Factorization factorize(Matrix&& a, Index panel) {
    const Index n = a.rows();
    if (n != a.cols() || n < 1) {
        throw InvalidMatrix("tridiagonalization expects a square matrix");
    }
    Factorization f;
    f.reflectors = std::move(a);
    f.tau = Vector::Zero(std::max<Index>(0, n - 1));
    f.diag.resize(n);
    f.offdiag = Vector::Zero(std::max<Index>(0, n - 1));
    Matrix& m = f.reflectors;

    Index k = 0;
    while (k + 2 < n) {
        const Index b = std::min(panel, n - k - 2);
        const Index rows = n - k - 1; // local row r maps to global row k+1+r
        Matrix w = Matrix::Zero(rows, b);

        for (Index j = 0; j < b; ++j) {
            const Index c = k + j;
            const Index below = n - c; // rows c..n-1

            // Fold the pending panel updates into column c:
            //   A(c:, c) -= V(c:, 0:j) W(c, 0:j)^T + W(c:, 0:j) V(c, 0:j)^T
            if (j > 0) {
                const auto vblock = m.block(c, k, below, j);
                const auto wblock = w.block(c - k - 1, 0, below, j);
                const Vector wrow = w.row(c - k - 1).head(j);
                const Vector vrow = m.row(c).segment(k, j);
                m.col(c).tail(below).noalias() -= vblock * wrow;
                m.col(c).tail(below).noalias() -= wblock * vrow;
            }
            f.diag[c] = m(c, c);

            const Index len = n - c - 1;
            double beta = 0.0;
            f.tau[c] = make_householder(m.col(c).tail(len), beta);
            f.offdiag[c] = beta;

            // w_j = tau (A v - V (W^T v) - W (V^T v)) - (tau/2) (w^T v) v over
            // rows c+1..n-1, with A the not-yet-updated trailing block.
            const auto v = m.col(c).tail(len);
            Vector wj(len);
            wj.noalias() = m.block(c + 1, c + 1, len, len).selfadjointView<Eigen::Lower>() * v;
            if (j > 0) {
                const auto vpanel = m.block(c + 1, k, len, j);
                const auto wpanel = w.block(c - k, 0, len, j);
                wj.noalias() -= vpanel * (wpanel.transpose() * v);
                wj.noalias() -= wpanel * (vpanel.transpose() * v);
            }
            wj *= f.tau[c];
            wj += (-0.5 * f.tau[c] * wj.dot(v)) * v;
            w.col(j).setZero();
            w.col(j).tail(len) = wj;
        }

        // Rank-2b update of the untouched trailing block A(k+b:, k+b:).
        const Index rest = n - k - b;
        if (rest > 0) {
            const auto v2 = m.block(k + b, k, rest, b);
            const auto w2 = w.bottomRows(rest);
            m.block(k + b, k + b, rest, rest).noalias() -= v2 * w2.transpose();
            m.block(k + b, k + b, rest, rest).noalias() -= w2 * v2.transpose();
        }
        k += b;
    }

    // 2x2 (or smaller) tail needs no reflector.
    if (n >= 2) {
        f.diag[n - 2] = m(n - 2, n - 2);
        f.offdiag[n - 2] = m(n - 1, n - 2);
    }
    f.diag[n - 1] = m(n - 1, n - 1);
    return f;
}

void Factorization::apply_q(Matrix& x, bool transpose) const {
    const Index n = size();
    if (x.rows() != n) {
        throw DimensionMismatch("apply_q: row count mismatch");
    }
    Eigen::RowVectorXd vtx(x.cols());
    auto apply_one = [&](Index i) {
        if (tau[i] == 0.0) return;
        const Index len = n - i - 1;
        const auto v_tail = reflectors.col(i).tail(len - 1); // below the explicit 1
        auto rows = x.middleRows(i + 1, len);
        vtx.noalias() = rows.row(0);
        vtx.noalias() += v_tail.transpose() * rows.bottomRows(len - 1);
        rows.row(0) -= tau[i] * vtx;
        rows.bottomRows(len - 1).noalias() -= (tau[i] * v_tail) * vtx;
    };
    // A = Q T Q^T with Q = H_0 H_1 ... ; Q^T x applies H_0 first.
    if (transpose) {
        for (Index i = 0; i + 2 < n; ++i) apply_one(i);
    } else {
        for (Index i = n - 3; i >= 0; --i) apply_one(i);
    }
}

Vector eigenvalues(const Vector& diag, const Vector& offdiag) {
    const Index n = diag.size();
    if (n == 1) {
        return diag;
    }
    using Array = Eigen::ArrayXd;
    const Array d = diag.array();
    Array e2(n);
    e2[0] = 0.0;
    e2.tail(n - 1) = offdiag.array().square();

    double lo = diag[0], hi = diag[0];
    for (Index i = 0; i < n; ++i) {
        const double r = (i > 0 ? std::abs(offdiag[i - 1]) : 0.0) +
                         (i + 1 < n ? std::abs(offdiag[i]) : 0.0);
        lo = std::min(lo, diag[i] - r);
        hi = std::max(hi, diag[i] + r);
    }
    const double span = std::max(hi - lo, 1e-300);
    const double pivmin = std::max(kEps * kEps * span, 1e-300);

    Array lower = Array::Constant(n, lo - kEps * span);
    Array upper = Array::Constant(n, hi + kEps * span);
    Array mid(n), q(n);
    Eigen::Array<Index, Eigen::Dynamic, 1> counts(n);

    for (int sweep = 0; sweep < 60; ++sweep) {
        mid = 0.5 * (lower + upper);
        // Sturm counts for all n shifts in a single pass over the tridiagonal.
        q = d[0] - mid;
        counts = (q < 0.0).cast<Index>();
        for (Index i = 1; i < n; ++i) {
            q = (q.abs() < pivmin).select(-pivmin, q);
            q = d[i] - mid - e2[i] / q;
            counts += (q < 0.0).cast<Index>();
        }
        for (Index idx = 0; idx < n; ++idx) {
            // counts[idx] = #eigenvalues below mid[idx].
            if (counts[idx] <= idx) {
                lower[idx] = mid[idx];
            } else {
                upper[idx] = mid[idx];
            }
        }
    }
    return (0.5 * (lower + upper)).matrix();
}

namespace {

// (T - lambda I) x = b by LU with partial pivoting; b becomes the solution.
void shifted_solve(const Vector& diag, const Vector& offdiag, double lambda, Vector& b,
                   double pivmin) {
    const Index n = diag.size();
    Vector dl = offdiag;
    Vector dd = diag.array() - lambda;
    Vector du = offdiag;
    Vector du2 = Vector::Zero(std::max<Index>(0, n - 2));

    for (Index i = 0; i + 1 < n; ++i) {
        if (std::abs(dd[i]) >= std::abs(dl[i])) {
            if (std::abs(dd[i]) < pivmin) dd[i] = std::copysign(pivmin, dd[i]);
            const double m = dl[i] / dd[i];
            dd[i + 1] -= m * du[i];
            b[i + 1] -= m * b[i];
        } else {
            const double m = dd[i] / dl[i];
            dd[i] = dl[i];
            const double next_dd = dd[i + 1];
            dd[i + 1] = du[i] - m * next_dd;
            if (i + 2 < n) {
                du2[i] = du[i + 1];
                du[i + 1] = -m * du2[i];
            }
            du[i] = next_dd;
            std::swap(b[i], b[i + 1]);
            b[i + 1] -= m * b[i];
        }
    }
    if (std::abs(dd[n - 1]) < pivmin) dd[n - 1] = std::copysign(pivmin, dd[n - 1]);
    b[n - 1] /= dd[n - 1];
    if (n >= 2) {
        if (std::abs(dd[n - 2]) < pivmin) dd[n - 2] = std::copysign(pivmin, dd[n - 2]);
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / dd[n - 2];
    }
    for (Index i = n - 3; i >= 0; --i) {
        if (std::abs(dd[i]) < pivmin) dd[i] = std::copysign(pivmin, dd[i]);
        b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / dd[i];
    }
}

} // namespace

Matrix eigenvectors(const Vector& diag, const Vector& offdiag, const Vector& values,
                    Index first, Index count) {
    const Index n = diag.size();
    if (first < 0 || count < 0 || first + count > n) {
        throw DimensionMismatch("eigenvectors: index range out of bounds");
    }
    const double onenorm =
        std::max(1e-300, diag.cwiseAbs().maxCoeff() +
                             (n > 1 ? 2.0 * offdiag.cwiseAbs().maxCoeff() : 0.0));
    const double ortol = 1e-3 * onenorm;
    const double pivmin = std::max(1e-300, kEps * kEps * onenorm);

    // Pull the batch start back to the head of its cluster so straddling
    // clusters stay orthogonal across batch boundaries.
    Index lead = first;
    while (lead > 0 && values[lead] - values[lead - 1] <= ortol) --lead;

    const Index total = first + count - lead;
    Matrix z(n, total);
    std::mt19937_64 rng(0x5eedULL + static_cast<std::uint64_t>(lead));
    std::normal_distribution<double> nd;

    Index cluster_start = 0;
    double prev_lambda = 0.0;
    for (Index j = 0; j < total; ++j) {
        const Index idx = lead + j;
        double lambda = values[idx];
        if (j > 0 && values[idx] - values[idx - 1] > ortol) {
            cluster_start = j;
        }
        if (j > cluster_start && lambda - prev_lambda < 10.0 * kEps * onenorm) {
            lambda = prev_lambda + 10.0 * kEps * onenorm;
        }
        prev_lambda = lambda;

        Vector x(n);
        for (Index i = 0; i < n; ++i) x[i] = nd(rng);
        x.normalize();
        for (int iter = 0; iter < 4; ++iter) {
            shifted_solve(diag, offdiag, lambda, x, pivmin);
            for (Index p = cluster_start; p < j; ++p) {
                x.noalias() -= z.col(p).dot(x) * z.col(p);
            }
            const double norm = x.norm();
            if (norm == 0.0) {
                for (Index i = 0; i < n; ++i) x[i] = nd(rng);
                x.normalize();
                continue;
            }
            x /= norm;
        }
        Index imax = 0;
        x.cwiseAbs().maxCoeff(&imax);
        if (x[imax] < 0.0) x = -x;
        z.col(j) = x;
    }
    return z.rightCols(count);
}

} // namespace krongcrf::tridiag
