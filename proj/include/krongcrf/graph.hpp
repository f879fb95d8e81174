#pragma once

#include "krongcrf/types.hpp"

namespace krongcrf {

/// Largest product order the dense paths will materialize. 24000^2 doubles is
/// ~4.6 GB; anything bigger must go through the factored code paths.
inline constexpr Index kDefaultDenseCap = 24000;

/// Symmetric nonnegative weighted adjacency matrix with zero diagonal.
/// Invariants are checked once at construction; all downstream spectral code
/// relies on them and never re-validates.
class SimilarityMatrix {
  public:
    /// Validates symmetry (1e-12 relative), nonnegativity and zero diagonal.
    explicit SimilarityMatrix(Matrix entries);

    Index size() const { return entries_.rows(); }
    const Matrix& entries() const { return entries_; }
    double operator()(Index i, Index j) const { return entries_(i, j); }

    /// Weighted degree vector (row sums).
    Vector degrees() const { return entries_.rowwise().sum(); }

    static SimilarityMatrix zero(Index n) { return SimilarityMatrix(Matrix::Zero(n, n)); }

  private:
    Matrix entries_;
};

/// L = D - S. Positive semidefinite with zero row sums.
Matrix laplacian(const SimilarityMatrix& s);

/// Normalized Laplacian I - D^{-1/2} S D^{-1/2}. Throws IsolatedVertex if any
/// degree is zero.
Matrix normalized_laplacian(const SimilarityMatrix& s);

/// Dense Kronecker product with the (n2(i-1)+k, n2(j-1)+l) index convention.
/// Throws SizeOverflow when the product order exceeds `dense_cap`.
Matrix kronecker(const Matrix& a, const Matrix& b, Index dense_cap = kDefaultDenseCap);

SimilarityMatrix kronecker(const SimilarityMatrix& a, const SimilarityMatrix& b,
                           Index dense_cap = kDefaultDenseCap);

/// Fraction of unordered vertex pairs carrying positive weight. Entries below
/// `zero_tol` count as absent.
double edge_density(const SimilarityMatrix& s, double zero_tol = 1e-12);

} // namespace krongcrf
