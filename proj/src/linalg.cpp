#include "opnorm/linalg.hpp"

#include <cmath>
#include <stdexcept>

#include "opnorm/errors.hpp"

namespace opnorm {

double vector_norm(const Vector& x, Exponent p, NormKind kind) {
    const Index n = x.size();
    if (n == 0) return 0.0;
    if (p.is_inf()) return x.cwiseAbs().maxCoeff();

    const double pv = p.value();
    const double scale = x.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;

    // scale out the max to keep |x_i|^p in range for large p
    double sum = 0.0;
    for (Index i = 0; i < n; ++i) sum += std::pow(std::abs(x[i]) / scale, pv);
    if (kind == NormKind::expectation) sum /= static_cast<double>(n);
    return scale * std::pow(sum, 1.0 / pv);
}

double norm_kind_convert(double value, Index n, Exponent p, NormKind from, NormKind to) {
    if (n < 1) throw std::domain_error("norm_kind_convert: n must be >= 1");
    if (from == to || p.is_inf()) return value;
    const double factor = std::pow(static_cast<double>(n), p.reciprocal());
    return (to == NormKind::counting) ? value * factor : value / factor;
}

Matrix kron(const Matrix& A, const Matrix& B, std::size_t entry_cap) {
    const std::size_t entries = std::size_t(A.size()) * std::size_t(B.size());
    if (entries > entry_cap)
        throw resource_error("kron: result would hold " + std::to_string(entries) +
                             " entries, cap is " + std::to_string(entry_cap));
    Matrix K(A.rows() * B.rows(), A.cols() * B.cols());
    for (Index i = 0; i < A.rows(); ++i)
        for (Index k = 0; k < A.cols(); ++k)
            K.block(i * B.rows(), k * B.cols(), B.rows(), B.cols()) = A(i, k) * B;
    return K;
}

Vector kron_vec(const Vector& x, const Vector& y) {
    Vector z(x.size() * y.size());
    for (Index i = 0; i < x.size(); ++i)
        z.segment(i * y.size(), y.size()) = x[i] * y;
    return z;
}

}  // namespace opnorm
