#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace krongcrf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Error taxonomy. Every failure mode the library reports deliberately maps to
// one of these, so callers can distinguish "bad input" from "numerics gave up".
struct KronGcrfError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : KronGcrfError {
    using KronGcrfError::KronGcrfError;
};
struct IsolatedVertex : KronGcrfError {
    using KronGcrfError::KronGcrfError;
};
struct SizeOverflow : KronGcrfError {
    using KronGcrfError::KronGcrfError;
};
struct DegreeOutOfRange : KronGcrfError {
    using KronGcrfError::KronGcrfError;
};
struct NoConvergence : KronGcrfError {
    using KronGcrfError::KronGcrfError;
};
struct NonPositiveParam : KronGcrfError {
    using KronGcrfError::KronGcrfError;
};
struct BadFactorization : KronGcrfError {
    using KronGcrfError::KronGcrfError;
};
struct AsymmetricFactor : KronGcrfError {
    using KronGcrfError::KronGcrfError;
};
struct InsufficientZeros : KronGcrfError {
    using KronGcrfError::KronGcrfError;
};
struct TooFewRecords : KronGcrfError {
    using KronGcrfError::KronGcrfError;
};
struct InvalidMatrix : KronGcrfError {
    using KronGcrfError::KronGcrfError;
};

} // namespace krongcrf
