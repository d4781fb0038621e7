#ifndef OPNORM_LINALG_HPP
#define OPNORM_LINALG_HPP

#include <Eigen/Dense>
#include <cstdint>

#include "opnorm/exponent.hpp"

namespace opnorm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Default cap on materialized entries (Kronecker products, tensor powers).
inline constexpr std::size_t kDefaultEntryCap = std::size_t(1) << 24;

/// l_p norm of x. Counting: (sum |x_i|^p)^{1/p}; expectation: the mean is
/// taken instead of the sum. p = inf is max|x_i| for both kinds.
double vector_norm(const Vector& x, Exponent p, NormKind kind = NormKind::counting);

/// Conversion factor between norm kinds: counting = expectation * n^{1/p}.
double norm_kind_convert(double value, Index n, Exponent p, NormKind from, NormKind to);

/// Kronecker product. Index pairing is lexicographic:
///   row (i, j) -> i * rows(B) + j,  col (k, l) -> k * cols(B) + l,
/// so entry ((i,j),(k,l)) = A(i,k) * B(j,l).
Matrix kron(const Matrix& A, const Matrix& B, std::size_t entry_cap = kDefaultEntryCap);

/// Kronecker product of vectors under the same pairing.
Vector kron_vec(const Vector& x, const Vector& y);

}  // namespace opnorm

#endif
