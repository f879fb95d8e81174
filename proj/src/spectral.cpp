#include "krongcrf/spectral.hpp"

#include "krongcrf/tridiag.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace krongcrf {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void fix_signs(Matrix& vectors) {
    for (Index c = 0; c < vectors.cols(); ++c) {
        Index imax = 0;
        vectors.col(c).cwiseAbs().maxCoeff(&imax);
        if (vectors(imax, c) < 0.0) {
            vectors.col(c) = -vectors.col(c);
        }
    }
}

void check_symmetric(const Matrix& m) {
    if (m.rows() != m.cols()) {
        throw InvalidMatrix("sym_eig expects a square matrix");
    }
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < i; ++j) {
            if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale) {
                throw InvalidMatrix("sym_eig expects a symmetric matrix");
            }
        }
    }
}

Vector sorted_ascending(Vector v) {
    std::sort(v.begin(), v.end());
    return v;
}

Vector paired_degrees(const SimilarityMatrix& s, PairingMode pairing) {
    Vector d = s.degrees();
    return pairing == PairingMode::Sorted ? sorted_ascending(std::move(d)) : d;
}

} // namespace

EigenSystem sym_eig(const Matrix& m) {
    check_symmetric(m);
    EigenSystem sys;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success) {
        throw NoConvergence("eigensolver failed to converge");
    }
    sys.values = solver.eigenvalues();
    sys.vectors = solver.eigenvectors();
    fix_signs(sys.vectors);
    return sys;
}

Vector SpectralBasis::project_vec(const Vector& x) const {
    return project(Eigen::Ref<const Matrix>(x)).col(0);
}

Vector SpectralBasis::back_project_vec(const Vector& z) const {
    return back_project(Eigen::Ref<const Matrix>(z)).col(0);
}

DenseBasis::DenseBasis(Vector values, Matrix vectors)
    : SpectralBasis(BasisKind::ExactDense, std::move(values)), vectors_(std::move(vectors)) {}

Matrix DenseBasis::project(const Eigen::Ref<const Matrix>& x) const {
    if (x.rows() != vectors_.rows()) {
        throw DimensionMismatch("project: vector length does not match basis order");
    }
    return vectors_.transpose() * x;
}

Matrix DenseBasis::back_project(const Eigen::Ref<const Matrix>& z) const {
    if (z.rows() != vectors_.rows()) {
        throw DimensionMismatch("back_project: vector length does not match basis order");
    }
    return vectors_ * z;
}

KronBasis::KronBasis(BasisKind kind, Vector values, Matrix factor1, Matrix factor2)
    : SpectralBasis(kind, std::move(values)),
      factor1_(std::move(factor1)),
      factor2_(std::move(factor2)) {}

Matrix KronBasis::project(const Eigen::Ref<const Matrix>& x) const {
    const Index n1 = factor1_.rows();
    const Index n2 = factor2_.rows();
    if (x.rows() != n1 * n2) {
        throw DimensionMismatch("project: vector length does not match basis order");
    }
    Matrix out(x.rows(), x.cols());
    for (Index c = 0; c < x.cols(); ++c) {
        const Vector col = x.col(c);
        Eigen::Map<const RowMat> grid(col.data(), n1, n2);
        const RowMat coeff = factor1_.transpose() * grid * factor2_;
        out.col(c) = Eigen::Map<const Vector>(coeff.data(), coeff.size());
    }
    return out;
}

Matrix KronBasis::back_project(const Eigen::Ref<const Matrix>& z) const {
    const Index n1 = factor1_.rows();
    const Index n2 = factor2_.rows();
    if (z.rows() != n1 * n2) {
        throw DimensionMismatch("back_project: vector length does not match basis order");
    }
    Matrix out(z.rows(), z.cols());
    for (Index c = 0; c < z.cols(); ++c) {
        const Vector col = z.col(c);
        Eigen::Map<const RowMat> grid(col.data(), n1, n2);
        const RowMat result = factor1_ * grid * factor2_.transpose();
        out.col(c) = Eigen::Map<const Vector>(result.data(), result.size());
    }
    return out;
}

Matrix kron_laplacian(const SimilarityMatrix& s1, const SimilarityMatrix& s2, Index dense_cap) {
    const Index n1 = s1.size();
    const Index n2 = s2.size();
    const Index n = n1 * n2;
    if (n > dense_cap) {
        throw SizeOverflow("product order " + std::to_string(n) + " exceeds dense cap " +
                           std::to_string(dense_cap));
    }
    const Vector d1 = s1.degrees();
    const Vector d2 = s2.degrees();
    Matrix l(n, n);
    for (Index i = 0; i < n1; ++i) {
        for (Index j = 0; j < n1; ++j) {
            l.block(i * n2, j * n2, n2, n2) = -s1(i, j) * s2.entries();
        }
    }
    for (Index i = 0; i < n1; ++i) {
        for (Index k = 0; k < n2; ++k) {
            l(i * n2 + k, i * n2 + k) = d1[i] * d2[k];
        }
    }
    return l;
}

/// Exact basis for orders where a second N^2 buffer does not fit: the matrix
/// is tridiagonalized in place and eigenvector applications stream through
/// inverse-iteration batches, so U is never materialized.
class TridiagBasis final : public SpectralBasis {
  public:
    explicit TridiagBasis(Matrix&& m)
        : SpectralBasis(BasisKind::ExactDense, Vector()),
          fact_(tridiag::factorize(std::move(m))) {
        eigenvalues_ = tridiag::eigenvalues(fact_.diag, fact_.offdiag).cwiseMax(0.0);
    }

    Matrix project(const Eigen::Ref<const Matrix>& x) const override {
        const Index n = fact_.size();
        if (x.rows() != n) {
            throw DimensionMismatch("project: vector length does not match basis order");
        }
        Matrix work = x;
        fact_.apply_q(work, /*transpose=*/true);
        Matrix out(n, x.cols());
        for (Index first = 0; first < n; first += kBatch) {
            const Index count = std::min(kBatch, n - first);
            const Matrix z =
                tridiag::eigenvectors(fact_.diag, fact_.offdiag, eigenvalues_, first, count);
            out.middleRows(first, count).noalias() = z.transpose() * work;
        }
        return out;
    }

    Matrix back_project(const Eigen::Ref<const Matrix>& z) const override {
        const Index n = fact_.size();
        if (z.rows() != n) {
            throw DimensionMismatch("back_project: vector length does not match basis order");
        }
        Matrix acc = Matrix::Zero(n, z.cols());
        for (Index first = 0; first < n; first += kBatch) {
            const Index count = std::min(kBatch, n - first);
            const Matrix vb =
                tridiag::eigenvectors(fact_.diag, fact_.offdiag, eigenvalues_, first, count);
            acc.noalias() += vb * z.middleRows(first, count);
        }
        fact_.apply_q(acc, /*transpose=*/false);
        return acc;
    }

  private:
    static constexpr Index kBatch = 512;
    tridiag::Factorization fact_;
};

namespace {

BasisPtr exact_basis_from_laplacian(Matrix&& l, const ExactBasisOptions& opts) {
    const Index n = l.rows();
    if (n > opts.dense_cap) {
        throw SizeOverflow("exact basis order " + std::to_string(n) + " exceeds dense cap " +
                           std::to_string(opts.dense_cap));
    }
    if (n <= opts.streaming_threshold) {
        EigenSystem sys = sym_eig(l);
        return std::make_shared<DenseBasis>(sys.values.cwiseMax(0.0), std::move(sys.vectors));
    }
    return std::make_shared<TridiagBasis>(std::move(l));
}

} // namespace

BasisPtr exact_kron_basis(const SimilarityMatrix& s1, const SimilarityMatrix& s2,
                          const ExactBasisOptions& opts) {
    Matrix l = kron_laplacian(s1, s2, opts.dense_cap);
    return exact_basis_from_laplacian(std::move(l), opts);
}

BasisPtr exact_basis_from_similarity(const SimilarityMatrix& s, const ExactBasisOptions& opts) {
    Matrix l = laplacian(s);
    return exact_basis_from_laplacian(std::move(l), opts);
}

BasisPtr approx_laplace_vec(const SimilarityMatrix& s1, const SimilarityMatrix& s2,
                            PairingMode pairing) {
    EigenSystem e1 = sym_eig(laplacian(s1));
    EigenSystem e2 = sym_eig(laplacian(s2));
    const Vector d1 = paired_degrees(s1, pairing);
    const Vector d2 = paired_degrees(s2, pairing);
    const Index n1 = s1.size();
    const Index n2 = s2.size();
    Vector values(n1 * n2);
    for (Index i = 0; i < n1; ++i) {
        for (Index j = 0; j < n2; ++j) {
            const double mu1 = e1.values[i];
            const double mu2 = e2.values[j];
            values[i * n2 + j] = mu1 * d2[j] + d1[i] * mu2 - mu1 * mu2;
        }
    }
    return std::make_shared<KronBasis>(BasisKind::LaplaceVec, values.cwiseMax(0.0),
                                       std::move(e1.vectors), std::move(e2.vectors));
}

namespace {

// Eigen-system of I - normalized_laplacian with eigenvalues descending.
EigenSystem descending_adjacency_eig(const SimilarityMatrix& s) {
    Matrix a = -normalized_laplacian(s);
    a.diagonal().array() += 1.0;
    EigenSystem sys = sym_eig(a);
    sys.values.reverseInPlace();
    sys.vectors = sys.vectors.rowwise().reverse().eval();
    return sys;
}

} // namespace

BasisPtr approx_norm_laplace_vec(const SimilarityMatrix& s1, const SimilarityMatrix& s2,
                                 PairingMode pairing) {
    EigenSystem e1 = descending_adjacency_eig(s1);
    EigenSystem e2 = descending_adjacency_eig(s2);
    const Vector d1 = paired_degrees(s1, pairing);
    const Vector d2 = paired_degrees(s2, pairing);
    const Index n1 = s1.size();
    const Index n2 = s2.size();
    Vector values(n1 * n2);
    for (Index i = 0; i < n1; ++i) {
        for (Index j = 0; j < n2; ++j) {
            values[i * n2 + j] = (1.0 - e1.values[i] * e2.values[j]) * d1[i] * d2[j];
        }
    }
    return std::make_shared<KronBasis>(BasisKind::NormLaplaceVec, values.cwiseMax(0.0),
                                       std::move(e1.vectors), std::move(e2.vectors));
}

BasisPtr approx_msn(const SimilarityMatrix& s1, const SimilarityMatrix& s2) {
    EigenSystem e1 = descending_adjacency_eig(s1);
    EigenSystem e2 = descending_adjacency_eig(s2);
    const Index n1 = s1.size();
    const Index n2 = s2.size();
    Vector values(n1 * n2);
    for (Index i = 0; i < n1; ++i) {
        for (Index j = 0; j < n2; ++j) {
            values[i * n2 + j] = 1.0 - e1.values[i] * e2.values[j];
        }
    }
    return std::make_shared<KronBasis>(BasisKind::Msn, values.cwiseMax(0.0),
                                       std::move(e1.vectors), std::move(e2.vectors));
}

Vector project(const SpectralBasis& basis, const Vector& x) { return basis.project_vec(x); }

Vector back_project(const SpectralBasis& basis, const Vector& z) {
    return basis.back_project_vec(z);
}

} // namespace krongcrf
