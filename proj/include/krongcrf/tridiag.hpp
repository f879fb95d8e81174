#pragma once

#include "krongcrf/types.hpp"

namespace krongcrf::tridiag {

/// Householder tridiagonalization A = Q T Q^T computed in place: the input
/// buffer keeps the reflectors below the first subdiagonal, tau holds the
/// reflector scales, (diag, offdiag) is the tridiagonal T. Blocked dlatrd-style
/// panels so the bulk of the work runs as rank-2b matrix updates.
struct Factorization {
    Matrix reflectors;
    Vector tau;
    Vector diag;
    Vector offdiag; // length n-1

    Index size() const { return reflectors.rows(); }

    /// Multiplies each column of x by Q (transpose=false) or Q^T (true).
    void apply_q(Matrix& x, bool transpose) const;
};

Factorization factorize(Matrix&& a, Index panel = 48);

/// All eigenvalues of the tridiagonal (diag, offdiag), ascending, by bisection
/// with vectorized Sturm counts.
Vector eigenvalues(const Vector& diag, const Vector& offdiag);

/// Eigenvectors for the ascending eigenvalue indices [first, first+count) by
/// inverse iteration, reorthogonalized within clusters of close eigenvalues.
/// `values` must hold all n eigenvalues in ascending order.
Matrix eigenvectors(const Vector& diag, const Vector& offdiag, const Vector& values,
                    Index first, Index count);

} // namespace krongcrf::tridiag
