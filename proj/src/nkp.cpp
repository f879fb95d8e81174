#include "krongcrf/nkp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace krongcrf {

Vector vec_op(const Matrix& m) {
    return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, Index rows, Index cols) {
    if (v.size() != rows * cols) {
        throw DimensionMismatch("unvec: length does not match shape");
    }
    return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

Matrix rearrange(const Matrix& a, Index m1, Index n1, Index m2, Index n2) {
    if (a.rows() != m1 * m2 || a.cols() != n1 * n2) {
        throw BadFactorization("rearrange: matrix is not (m1*m2) x (n1*n2)");
    }
    Matrix r(m1 * n1, m2 * n2);
    for (Index j = 0; j < n1; ++j) {
        for (Index i = 0; i < m1; ++i) {
            const Matrix block = a.block(i * m2, j * n2, m2, n2);
            r.row(j * m1 + i) = vec_op(block).transpose();
        }
    }
    return r;
}

SingularTriple dominant_singular_triple(const Matrix& m, RngStream& rng, double tol,
                                        int max_iter) {
    if (m.norm() == 0.0) {
        throw InvalidMatrix("dominant_singular_triple: zero matrix");
    }
    Vector v(m.cols());
    for (Index i = 0; i < v.size(); ++i) {
        v[i] = rng.normal();
    }
    v.normalize();

    for (int iter = 0; iter < max_iter; ++iter) {
        Vector mv = m * v;
        const double sigma = mv.norm();
        if (sigma == 0.0) {
            // Start vector landed in the null space; restart.
            for (Index i = 0; i < v.size(); ++i) {
                v[i] = rng.normal();
            }
            v.normalize();
            continue;
        }
        const Vector u = mv / sigma;
        const Vector w = m.transpose() * u;
        if ((w - sigma * v).norm() <= tol * sigma) {
            return {sigma, u, v};
        }
        v = w / w.norm();
    }
    throw NoConvergence("power iteration did not converge; leading singular pair may be degenerate");
}

double kron_residual_fro(const Matrix& a, const Matrix& b, const Matrix& c) {
    const Index n1 = b.rows();
    const Index n2 = c.rows();
    if (a.rows() != n1 * n2 || a.cols() != b.cols() * c.cols()) {
        throw DimensionMismatch("kron_residual_fro: shapes do not match");
    }
    double sq = 0.0;
    for (Index i = 0; i < n1; ++i) {
        for (Index j = 0; j < b.cols(); ++j) {
            sq += (a.block(i * n2, j * c.cols(), n2, c.cols()) - b(i, j) * c).squaredNorm();
        }
    }
    return std::sqrt(sq);
}

KronFactors nearest_kron(const Matrix& a, Index n1, Index n2, RngStream& rng, double tol,
                         int max_iter) {
    if (a.rows() != a.cols() || a.rows() != n1 * n2) {
        throw BadFactorization("nearest_kron: expected a square (n1*n2) x (n1*n2) matrix");
    }
    const Matrix r = rearrange(a, n1, n1, n2, n2);
    SingularTriple t = dominant_singular_triple(r, rng, tol, max_iter);

    // Recovered similarity factors must be nonnegative; flip the pair jointly.
    double usum = t.u.sum();
    if (usum == 0.0) {
        Index imax = 0;
        t.u.cwiseAbs().maxCoeff(&imax);
        usum = t.u[imax];
    }
    if (usum < 0.0) {
        t.u = -t.u;
        t.v = -t.v;
    }

    KronFactors f;
    f.sigma1 = t.sigma;
    f.b = unvec(t.sigma * t.u, n1, n1);
    f.c = unvec(t.v, n2, n2);
    f.residual_fro = kron_residual_fro(a, f.b, f.c);
    return f;
}

namespace {

// Keep the round(rho * pairs) largest positive off-diagonal entries
// (symmetric pairs), zero everything else including the diagonal.
Matrix threshold_factor(const Matrix& m, double rho) {
    const Index n = m.rows();
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < i; ++j) {
            if (std::abs(m(i, j) - m(j, i)) > 1e-8 * scale) {
                throw AsymmetricFactor("recovered factor is not symmetric");
            }
        }
    }
    if (m.minCoeff() < -1e-10 * scale) {
        throw InvalidMatrix("recovered factor has significantly negative entries");
    }

    struct Entry {
        double value;
        Index i, j;
    };
    std::vector<Entry> entries;
    entries.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < i; ++j) {
            entries.push_back({0.5 * (m(i, j) + m(j, i)), i, j});
        }
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.value != b.value) return a.value > b.value;
        return std::tie(a.i, a.j) < std::tie(b.i, b.j);
    });
    const auto keep = static_cast<std::size_t>(
        std::llround(rho * static_cast<double>(n * (n - 1) / 2)));

    Matrix out = Matrix::Zero(n, n);
    for (std::size_t k = 0; k < keep && k < entries.size(); ++k) {
        if (entries[k].value <= 1e-12) break; // below this it is numerical dust, not an edge
        out(entries[k].i, entries[k].j) = entries[k].value;
        out(entries[k].j, entries[k].i) = entries[k].value;
    }
    return out;
}

} // namespace

std::pair<SimilarityMatrix, SimilarityMatrix> sparsify_factors(const KronFactors& f, double rho1,
                                                               double rho2) {
    if (f.b.rows() != f.b.cols() || f.c.rows() != f.c.cols()) {
        throw BadFactorization("sparsify_factors: factors must be square");
    }
    return {SimilarityMatrix(threshold_factor(f.b, rho1)),
            SimilarityMatrix(threshold_factor(f.c, rho2))};
}

} // namespace krongcrf
