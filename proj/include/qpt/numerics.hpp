// numerics.hpp — dense complex linear-algebra kernel: Hermitian eigensolver,
// Moore–Penrose pseudoinverse, principal matrix logarithm, real 3x3 polar
// decomposition, and von Neumann entropy.
//
// All tolerances are relative (scaled by the matrix norm) with absolute
// fallbacks for zero-norm inputs. All functions are pure.
#pragma once

#include "qpt/linalg.hpp"

namespace qpt {

struct HermitianEigenDecomposition {
    RealVector eigenvalues;     // ascending
    ComplexMatrix eigenvectors; // unitary, columns
};

struct RealPolarFactors {
    Eigen::Matrix3d orthogonal; // det +1 always
    Eigen::Matrix3d symmetric;  // may be indefinite when det(input) < 0
};

// Eigendecomposition of a Hermitian matrix; rejects inputs further than
// hermiticity_tol * ||m||_F from their own adjoint.
HermitianEigenDecomposition herm_eig(const ComplexMatrix& m, double hermiticity_tol = 1e-8);

// Moore–Penrose pseudoinverse via SVD. Singular values below
// rank_tol * sigma_max are treated as zero.
ComplexMatrix pseudo_inverse(const ComplexMatrix& m, double rank_tol = 1e-10);

// Matrix exponential (scaling-and-squaring).
ComplexMatrix matrix_exp(const ComplexMatrix& m);

// Principal matrix logarithm via eigendecomposition. Throws Singular for
// (numerically) singular inputs, BranchCutEigenvalue when an eigenvalue lies
// on the closed negative real axis, and ConvergenceFailure when the input is
// too far from diagonalizable for the eigenvector solve to reproduce it.
ComplexMatrix matrix_log(const ComplexMatrix& m);

// Polar decomposition m = O * S of a real 3x3 matrix with O a proper rotation
// (det +1). A reflection, when present, is absorbed into S.
RealPolarFactors polar_decompose_real(const Eigen::Matrix3d& m);

// Von Neumann entropy in bits of a density matrix (Hermitian, unit trace,
// positive semidefinite within tolerance). 0*log(0) == 0.
double von_neumann_entropy(const ComplexMatrix& rho);

} // namespace qpt
