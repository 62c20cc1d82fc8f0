#include "qpt/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

namespace qpt {

HermitianEigenDecomposition herm_eig(const ComplexMatrix& m, double hermiticity_tol) {
    require_finite(m, "herm_eig input");
    require_square(m, "herm_eig input");

    const double scale = frobenius(m);
    const double defect = frobenius(ComplexMatrix(m - m.adjoint()));
    if (defect > hermiticity_tol * std::max(scale, 1e-300) && defect > 1e-14)
        throw Error(ErrorKind::not_hermitian, "hermiticity defect " + std::to_string(defect));

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitize(m));
    if (solver.info() != Eigen::Success)
        throw Error(ErrorKind::convergence_failure, "Hermitian eigensolver did not converge");

    return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix pseudo_inverse(const ComplexMatrix& m, double rank_tol) {
    require_finite(m, "pseudo_inverse input");

    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector& sigma = svd.singularValues();
    if (sigma.size() == 0)
        throw Error(ErrorKind::convergence_failure, "SVD produced no singular values");

    const double cutoff = rank_tol * sigma(0);
    RealVector inv = RealVector::Zero(sigma.size());
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        if (sigma(i) > cutoff && sigma(i) > 0.0) inv(i) = 1.0 / sigma(i);

    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

ComplexMatrix matrix_exp(const ComplexMatrix& m) {
    require_finite(m, "matrix_exp input");
    require_square(m, "matrix_exp input");
    return m.exp();
}

ComplexMatrix matrix_log(const ComplexMatrix& m) {
    require_finite(m, "matrix_log input");
    require_square(m, "matrix_log input");

    Eigen::ComplexEigenSolver<ComplexMatrix> solver(m);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorKind::convergence_failure, "eigensolver did not converge");

    const ComplexVector& lambda = solver.eigenvalues();
    double max_abs = 0.0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) max_abs = std::max(max_abs, std::abs(lambda(i)));
    if (max_abs == 0.0) throw Error(ErrorKind::singular, "zero matrix has no logarithm");

    ComplexVector log_lambda(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        const Complex ev = lambda(i);
        if (std::abs(ev) < 1e-14 * max_abs)
            throw Error(ErrorKind::singular, "eigenvalue at zero");
        if (ev.real() < 0.0 && std::abs(ev.imag()) <= 1e-9 * std::abs(ev))
            throw Error(ErrorKind::branch_cut_eigenvalue,
                        "eigenvalue on the negative real axis; principal branch undefined");
        log_lambda(i) = std::log(ev);
    }

    const ComplexMatrix& v = solver.eigenvectors();
    Eigen::PartialPivLU<ComplexMatrix> lu(v);
    ComplexMatrix result = v * log_lambda.asDiagonal() * lu.solve(ComplexMatrix::Identity(v.rows(), v.cols()));

    // defective or nearly defective inputs: the eigenvector route cannot be trusted
    const double residual = frobenius(ComplexMatrix(matrix_exp(result) - m));
    if (residual > 1e-8 * (1.0 + frobenius(m)))
        throw Error(ErrorKind::convergence_failure,
                    "log residual " + std::to_string(residual) + "; input too close to defective");
    return result;
}

RealPolarFactors polar_decompose_real(const Eigen::Matrix3d& m) {
    if (!m.allFinite())
        throw Error(ErrorKind::convergence_failure, "polar input has non-finite entries");

    Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d u = svd.matrixU();
    Eigen::Matrix3d v = svd.matrixV();
    Eigen::Vector3d sigma = svd.singularValues();

    // O = U V^T has det ±1; flip the weakest singular direction to force +1.
    Eigen::Vector3d flip = Eigen::Vector3d::Ones();
    if ((u * v.transpose()).determinant() < 0.0) flip(2) = -1.0;

    RealPolarFactors out;
    out.orthogonal = u * flip.asDiagonal() * v.transpose();
    out.symmetric = v * flip.asDiagonal() * sigma.asDiagonal() * v.transpose();
    out.symmetric = 0.5 * (out.symmetric + out.symmetric.transpose().eval());
    return out;
}

double von_neumann_entropy(const ComplexMatrix& rho) {
    require_finite(rho, "entropy input");
    require_square(rho, "entropy input");

    const double herm_defect = frobenius(ComplexMatrix(rho - rho.adjoint()));
    const double trace_defect = std::abs(rho.trace() - Complex(1.0, 0.0));
    if (herm_defect > 1e-8 || trace_defect > 1e-8)
        throw Error(ErrorKind::invalid_density_matrix,
                    "hermiticity defect " + std::to_string(herm_defect) + ", trace defect " +
                        std::to_string(trace_defect));

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitize(rho));
    if (solver.info() != Eigen::Success)
        throw Error(ErrorKind::convergence_failure, "eigensolver did not converge");

    double entropy = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const double p = solver.eigenvalues()(i);
        if (p < -1e-8)
            throw Error(ErrorKind::invalid_density_matrix, "negative eigenvalue " + std::to_string(p));
        if (p > 0.0) entropy -= p * std::log2(p);
    }
    return std::max(entropy, 0.0);
}

} // namespace qpt
