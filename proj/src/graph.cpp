#include "krongcrf/graph.hpp"

#include <cmath>

namespace krongcrf {

SimilarityMatrix::SimilarityMatrix(Matrix entries) : entries_(std::move(entries)) {
    const Index n = entries_.rows();
    if (entries_.cols() != n) {
        throw InvalidMatrix("similarity matrix must be square");
    }
    const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
    for (Index i = 0; i < n; ++i) {
        if (entries_(i, i) != 0.0) {
            throw InvalidMatrix("similarity matrix must have a zero diagonal");
        }
        for (Index j = 0; j < i; ++j) {
            if (std::abs(entries_(i, j) - entries_(j, i)) > 1e-12 * scale) {
                throw InvalidMatrix("similarity matrix must be symmetric");
            }
            if (entries_(i, j) < 0.0 || entries_(j, i) < 0.0) {
                throw InvalidMatrix("similarity matrix entries must be nonnegative");
            }
        }
    }
}

Matrix laplacian(const SimilarityMatrix& s) {
    Matrix l = -s.entries();
    l.diagonal() = s.degrees();
    return l;
}

Matrix normalized_laplacian(const SimilarityMatrix& s) {
    const Vector d = s.degrees();
    const Index n = s.size();
    for (Index i = 0; i < n; ++i) {
        if (d[i] <= 0.0) {
            throw IsolatedVertex("vertex " + std::to_string(i) +
                                 " has zero degree; normalized Laplacian undefined");
        }
    }
    const Vector dinv_sqrt = d.cwiseSqrt().cwiseInverse();
    Matrix l = -(dinv_sqrt.asDiagonal() * s.entries() * dinv_sqrt.asDiagonal());
    l.diagonal().array() += 1.0;
    return l;
}

Matrix kronecker(const Matrix& a, const Matrix& b, Index dense_cap) {
    if (a.rows() != a.cols() || b.rows() != b.cols()) {
        throw DimensionMismatch("kronecker expects square factors");
    }
    const Index n1 = a.rows();
    const Index n2 = b.rows();
    if (n1 * n2 > dense_cap) {
        throw SizeOverflow("kronecker product order " + std::to_string(n1 * n2) +
                           " exceeds dense cap " + std::to_string(dense_cap));
    }
    Matrix out(n1 * n2, n1 * n2);
    for (Index i = 0; i < n1; ++i) {
        for (Index j = 0; j < n1; ++j) {
            out.block(i * n2, j * n2, n2, n2) = a(i, j) * b;
        }
    }
    return out;
}

SimilarityMatrix kronecker(const SimilarityMatrix& a, const SimilarityMatrix& b,
                           Index dense_cap) {
    return SimilarityMatrix(kronecker(a.entries(), b.entries(), dense_cap));
}

double edge_density(const SimilarityMatrix& s, double zero_tol) {
    const Index n = s.size();
    if (n < 2) {
        throw InvalidMatrix("edge density needs at least two vertices");
    }
    Index present = 0;
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < i; ++j) {
            if (s(i, j) > zero_tol) {
                ++present;
            }
        }
    }
    return static_cast<double>(present) / (static_cast<double>(n) * (n - 1) / 2.0);
}

} // namespace krongcrf
