// channel.hpp — quantum operations in interchangeable representations:
// operator-sum (Kraus) form, chi matrix relative to a fixed operator basis,
// and the superoperator acting on column-stacked density matrices.
#pragma once

#include <optional>
#include <vector>

#include "qpt/linalg.hpp"

namespace qpt {

enum class Validation { strict, lenient };

// N x N Hermitian, unit-trace, positive-semidefinite state. Lenient mode
// (used for tomographic estimates) relaxes hermiticity/trace tenfold and does
// not reject indefiniteness, since linear-inversion estimates from finite
// shot counts routinely carry negative eigenvalues.
class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix m, Validation mode = Validation::strict);

    static DensityMatrix pure(const ComplexVector& ket);
    static DensityMatrix maximally_mixed(int dim);

    int dim() const { return static_cast<int>(mat_.rows()); }
    const ComplexMatrix& matrix() const { return mat_; }

private:
    ComplexMatrix mat_;
};

// Ordered Kraus operators {A_i}. trace_preserving is detected on
// construction: sum A_i^† A_i == I within 1e-9 (Frobenius). Otherwise the set
// must satisfy sum A_i^† A_i <= I (selective operation).
class KrausSet {
public:
    explicit KrausSet(std::vector<ComplexMatrix> operators);

    int dim() const { return static_cast<int>(operators_.front().rows()); }
    int size() const { return static_cast<int>(operators_.size()); }
    const std::vector<ComplexMatrix>& operators() const { return operators_; }
    const ComplexMatrix& operator[](int i) const { return operators_[static_cast<std::size_t>(i)]; }
    bool trace_preserving() const { return trace_preserving_; }

private:
    std::vector<ComplexMatrix> operators_;
    bool trace_preserving_;
};

// Fixed set of N^2 operators spanning the N x N matrices.
class OperatorBasis {
public:
    explicit OperatorBasis(std::vector<ComplexMatrix> operators);

    int dim() const { return dim_; }
    int size() const { return static_cast<int>(operators_.size()); }
    const std::vector<ComplexMatrix>& operators() const { return operators_; }
    const ComplexMatrix& operator[](int m) const { return operators_[static_cast<std::size_t>(m)]; }

    // N^2 x N^2 matrix whose columns are vec(A~_m); used for expansions.
    const ComplexMatrix& vectorized() const { return vectorized_; }

private:
    int dim_;
    std::vector<ComplexMatrix> operators_;
    ComplexMatrix vectorized_;
};

// Error-correlation matrix chi relative to an operator basis:
// E(rho) = sum_mn chi_mn A~_m rho A~_n^†.
class ChiMatrix {
public:
    ChiMatrix(OperatorBasis basis, ComplexMatrix chi, bool trace_preserving,
              Validation mode = Validation::strict);

    int dim() const { return basis_.dim(); }
    const OperatorBasis& basis() const { return basis_; }
    const ComplexMatrix& matrix() const { return chi_; }
    bool trace_preserving() const { return trace_preserving_; }

    double min_eigenvalue() const;
    // Frobenius distance of sum_mn chi_mn A~_n^† A~_m from the identity.
    double trace_preservation_defect() const;

private:
    OperatorBasis basis_;
    ComplexMatrix chi_;
    bool trace_preserving_;
};

// N^2 x N^2 matrix L with vec(E(rho)) = L vec(rho), column-stacking.
class Superoperator {
public:
    Superoperator(int dim, ComplexMatrix matrix);

    int dim() const { return dim_; }
    const ComplexMatrix& matrix() const { return mat_; }

    ComplexMatrix apply(const ComplexMatrix& rho) const;
    // Checks L(X)^† == L(X^†) on a deterministic probe set.
    bool preserves_hermiticity(double tol = 1e-9) const;

private:
    int dim_;
    ComplexMatrix mat_;
};

struct ApplyResult {
    DensityMatrix state;
    double weight; // tr E(rho); the outcome probability for selective sets
};

// E(rho) = sum_i A_i rho A_i^†, renormalized; weight is the trace before
// renormalization. Throws ZeroWeight when the trace is below 1e-14.
ApplyResult apply(const KrausSet& op, const DensityMatrix& rho);

// Expands each Kraus operator in the basis and forms chi_mn = sum_i a_im a*_in.
ChiMatrix kraus_to_chi(const KrausSet& op, const OperatorBasis& basis);

// Diagonalizes chi and returns A_i = sqrt(d_i) sum_m U_mi A~_m for every
// eigenvalue above rank_cutoff. Eigenvalues in [-eig_tolerance, 0) are clamped
// to zero; anything below -eig_tolerance raises NotPositive.
KrausSet chi_to_kraus(const ChiMatrix& chi, double eig_tolerance = 1e-8,
                      double rank_cutoff = 1e-10);

Superoperator to_superoperator(const KrausSet& op);
Superoperator to_superoperator(const ChiMatrix& chi);

// Re-tags the trace_preserving flag from the measured defect (<= 1e-8).
ChiMatrix with_detected_tp_flag(ChiMatrix chi);

// chi of the channel described by an explicit superoperator (expands the
// action on matrix units in the basis). Internal plumbing for logarithm
// validity checks and representation tests.
ChiMatrix superoperator_to_chi(const Superoperator& op, const OperatorBasis& basis);

// Frobenius norm of the superoperator difference; zero iff the channels act
// identically on every state.
double channel_distance(const Superoperator& a, const Superoperator& b);

// The fixed one-qubit basis I, sigma_x, -i sigma_y, sigma_z and its k-fold
// tensor powers in lexicographic index order.
OperatorBasis standard_basis(int n_qubits);

ComplexMatrix pauli_i();
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

} // namespace qpt
