#pragma once

#include "krongcrf/graph.hpp"
#include "krongcrf/rng.hpp"

#include <utility>

namespace krongcrf {

/// Nearest-Kronecker-product factors: B (x) C is the best rank-one
/// approximation of the rearranged input, sigma1 the leading singular value
/// of R(A), residual_fro = ||A - B (x) C||_F.
struct KronFactors {
    Matrix b;
    Matrix c;
    double sigma1 = 0.0;
    double residual_fro = 0.0;
};

/// Column-stacking vec operator.
Vector vec_op(const Matrix& m);

/// Inverse of vec_op for a known shape.
Matrix unvec(const Vector& v, Index rows, Index cols);

/// Van Loan rearrangement: row (j*m1 + i) of the result is vec(A_ij)^T for
/// the m2 x n2 block (i, j) of A. Satisfies
/// ||A - B (x) C||_F = ||R(A) - vec(B) vec(C)^T||_F.
/// Throws BadFactorization if the dimensions do not factor.
Matrix rearrange(const Matrix& a, Index m1, Index n1, Index m2, Index n2);

struct SingularTriple {
    double sigma = 0.0;
    Vector u;
    Vector v;
};

/// Leading singular triple by power iteration on M^T M with a random unit
/// start. On return ||M v - sigma u|| = 0 by construction and
/// ||M^T u - sigma v|| <= tol * sigma. Throws NoConvergence after max_iter.
SingularTriple dominant_singular_triple(const Matrix& m, RngStream& rng, double tol = 1e-10,
                                        int max_iter = 5000);

/// Nearest Kronecker product of a square (n1*n2) x (n1*n2) matrix with square
/// factor orders n1 and n2. Signs are flipped jointly so that sum(B) > 0.
KronFactors nearest_kron(const Matrix& a, Index n1, Index n2, RngStream& rng,
                         double tol = 1e-10, int max_iter = 5000);

/// ||A - B (x) C||_F computed blockwise (B (x) C never materialized).
double kron_residual_fro(const Matrix& a, const Matrix& b, const Matrix& c);

/// Keep the strongest off-diagonal entries of each recovered factor so the
/// retained edge fraction equals rho1 (resp. rho2), zero the diagonal, and
/// return valid similarity matrices. Throws AsymmetricFactor when a factor is
/// not symmetric within 1e-8.
std::pair<SimilarityMatrix, SimilarityMatrix> sparsify_factors(const KronFactors& f,
                                                               double rho1, double rho2);

} // namespace krongcrf
