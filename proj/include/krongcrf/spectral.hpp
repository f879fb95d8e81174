#pragma once

#include "krongcrf/graph.hpp"

#include <memory>

namespace krongcrf {

/// Full symmetric eigendecomposition: ascending values, orthonormal columns,
/// deterministic sign (largest-magnitude component of each vector positive).
struct EigenSystem {
    Vector values;
    Matrix vectors;
};

/// Throws InvalidMatrix for non-symmetric input, NoConvergence if the kernel
/// fails.
EigenSystem sym_eig(const Matrix& m);

enum class BasisKind { ExactDense, LaplaceVec, NormLaplaceVec, Msn };

/// How estimated eigenvalues are paired with factor degrees: rank-paired
/// against the ascending degree sequence (the paper's sorted heuristic) or
/// against degrees in natural vertex order (comparison mode).
enum class PairingMode { Sorted, VertexOrder };

/// An orthonormal basis paired index-for-index with (approximate) Laplacian
/// eigenvalues. Factored kinds hold per-factor matrices and apply U through
/// reshaped products without ever materializing the n1*n2 basis.
class SpectralBasis {
  public:
    virtual ~SpectralBasis() = default;

    BasisKind kind() const { return kind_; }
    Index size() const { return eigenvalues_.size(); }
    const Vector& eigenvalues() const { return eigenvalues_; }

    /// U^T applied to each column of x.
    virtual Matrix project(const Eigen::Ref<const Matrix>& x) const = 0;
    /// U applied to each column of z.
    virtual Matrix back_project(const Eigen::Ref<const Matrix>& z) const = 0;

    Vector project_vec(const Vector& x) const;
    Vector back_project_vec(const Vector& z) const;

  protected:
    SpectralBasis(BasisKind kind, Vector eigenvalues)
        : kind_(kind), eigenvalues_(std::move(eigenvalues)) {}

    BasisKind kind_;
    Vector eigenvalues_;
};

using BasisPtr = std::shared_ptr<const SpectralBasis>;

/// Exact basis stored as a dense eigenvector matrix.
class DenseBasis final : public SpectralBasis {
  public:
    DenseBasis(Vector values, Matrix vectors);
    Matrix project(const Eigen::Ref<const Matrix>& x) const override;
    Matrix back_project(const Eigen::Ref<const Matrix>& z) const override;
    const Matrix& vectors() const { return vectors_; }

  private:
    Matrix vectors_;
};

/// Factored basis U = F1 (x) F2 under the row-major index convention
/// I = n2*(i-1)+k; projections cost O(n1 n2 (n1+n2)).
class KronBasis final : public SpectralBasis {
  public:
    KronBasis(BasisKind kind, Vector values, Matrix factor1, Matrix factor2);
    Matrix project(const Eigen::Ref<const Matrix>& x) const override;
    Matrix back_project(const Eigen::Ref<const Matrix>& z) const override;
    const Matrix& factor1() const { return factor1_; }
    const Matrix& factor2() const { return factor2_; }

  private:
    Matrix factor1_;
    Matrix factor2_;
};

struct ExactBasisOptions {
    Index dense_cap = kDefaultDenseCap;
    /// Above this order the exact basis switches to a tridiagonalization that
    /// keeps a single N^2 buffer and streams eigenvectors in batches.
    Index streaming_threshold = 8192;
};

/// Numerically exact eigendecomposition of L(S1 (x) S2); the oracle all
/// factored approximations are judged against.
BasisPtr exact_kron_basis(const SimilarityMatrix& s1, const SimilarityMatrix& s2,
                          const ExactBasisOptions& opts = {});

/// Exact basis for the Laplacian of an arbitrary similarity matrix (used when
/// the product structure is violated).
BasisPtr exact_basis_from_similarity(const SimilarityMatrix& s,
                                     const ExactBasisOptions& opts = {});

/// Laplacian-eigenvector estimate: vectors W1 (x) W2 from the factor
/// Laplacians, values mu_i*d_j + d_i*mu_j - mu_i*mu_j from rank-paired sorted
/// spectra and degrees, clamped at zero.
BasisPtr approx_laplace_vec(const SimilarityMatrix& s1, const SimilarityMatrix& s2,
                            PairingMode pairing = PairingMode::Sorted);

/// Normalized-Laplacian eigenvector estimate: vectors V1 (x) V2 from
/// I - normalized_laplacian per factor (eigenvalues taken descending), values
/// (1 - lambda_i*lambda_j)*d_i*d_j, clamped at zero.
BasisPtr approx_norm_laplace_vec(const SimilarityMatrix& s1, const SimilarityMatrix& s2,
                                 PairingMode pairing = PairingMode::Sorted);

/// Same vectors as approx_norm_laplace_vec but values 1 - lambda_i*lambda_j:
/// an exact eigendecomposition of the product's normalized Laplacian standing
/// in for the Laplacian's.
BasisPtr approx_msn(const SimilarityMatrix& s1, const SimilarityMatrix& s2);

/// Free-function forms of the basis application.
Vector project(const SpectralBasis& basis, const Vector& x);
Vector back_project(const SpectralBasis& basis, const Vector& z);

/// L(S1 (x) S2) materialized directly (no intermediate product copy).
Matrix kron_laplacian(const SimilarityMatrix& s1, const SimilarityMatrix& s2,
                      Index dense_cap = kDefaultDenseCap);

} // namespace krongcrf
