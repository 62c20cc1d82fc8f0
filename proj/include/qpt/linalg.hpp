// linalg.hpp — dense complex matrix aliases and small shared helpers
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cmath>

#include "qpt/errors.hpp"

namespace qpt {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline double frobenius(const ComplexMatrix& m) { return m.norm(); }

inline bool all_finite(const ComplexMatrix& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag())) return false;
    return true;
}

inline void require_finite(const ComplexMatrix& m, const char* what) {
    if (m.rows() < 1 || m.cols() < 1)
        throw Error(ErrorKind::wrong_dimension, std::string(what) + " is empty");
    if (!all_finite(m))
        throw Error(ErrorKind::parse_error, std::string(what) + " has non-finite entries");
}

inline void require_square(const ComplexMatrix& m, const char* what) {
    if (m.rows() != m.cols())
        throw Error(ErrorKind::not_square, std::string(what) + " is not square");
}

// Kronecker product, row-major index convention: (A ⊗ B)[(i1,i2),(j1,j2)] = A[i1,j1] B[i2,j2].
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Column-stacking vectorization: vec(X)[i + rows*j] = X(i, j).
inline ComplexVector vec(const ComplexMatrix& m) {
    return ComplexVector(Eigen::Map<const ComplexVector>(m.data(), m.size()));
}

inline ComplexMatrix unvec(const ComplexVector& v, Eigen::Index rows, Eigen::Index cols) {
    return ComplexMatrix(Eigen::Map<const ComplexMatrix>(v.data(), rows, cols));
}

inline ComplexMatrix hermitize(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

inline Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a * b).trace();
}

} // namespace qpt
