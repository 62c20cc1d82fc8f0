// tomography.hpp — the experimental prescription: input-state recipes,
// simulated state tomography, lambda extraction, the beta tensor, the
// generalized-inverse solution for chi, and the closed-form one- and
// two-qubit constructions.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qpt/channel.hpp"
#include "qpt/rng.hpp"

namespace qpt {

// Ordered basis rho_j for the N x N matrices; elements need not be states
// (the default choice is the matrix units |n><m|).
class StateBasis {
public:
    explicit StateBasis(std::vector<ComplexMatrix> elements);

    int dim() const { return dim_; }
    int size() const { return static_cast<int>(elements_.size()); }
    const std::vector<ComplexMatrix>& elements() const { return elements_; }
    const ComplexMatrix& operator[](int j) const { return elements_[static_cast<std::size_t>(j)]; }
    const ComplexMatrix& vectorized() const { return vectorized_; }

private:
    int dim_;
    std::vector<ComplexMatrix> elements_;
    ComplexMatrix vectorized_;
};

// Matrix units |n><m| in row-major (n, m) order.
StateBasis projector_state_basis(int dim);

// Physical preparations and assembly coefficients for the matrix-unit basis.
// Element (n,m) is assembled from the outputs of at most four prepared pure
// states: |n>, |m>, (|n>+|m>)/sqrt(2) and (|n>+i|m>)/sqrt(2). Each basis
// element owns one distinct preparation (diagonal elements the computational
// state, element (n,m) with n<m the "+" superposition, element (m,n) the "i"
// superposition), so preparations are indexed by basis element.
struct PreparationTerm {
    int element; // index of the basis element whose preparation is consumed
    Complex coeff;
};

class PreparationRecipe {
public:
    static PreparationRecipe standard(int dim);

    int dim() const { return dim_; }
    const ComplexVector& preparation(int element) const {
        return preparations_[static_cast<std::size_t>(element)];
    }
    const std::vector<PreparationTerm>& terms(int element) const {
        return terms_[static_cast<std::size_t>(element)];
    }

private:
    int dim_ = 0;
    std::vector<ComplexVector> preparations_;          // one pure state per basis element
    std::vector<std::vector<PreparationTerm>> terms_;  // assembly of E(rho_j)
};

// Measured (or exactly computed) E(rho_j) for every basis element. Records
// for off-diagonal elements are assembled combinations and are not density
// matrices themselves.
struct TomographyDataset {
    int dim = 0;
    std::optional<long> shots; // nullopt = exact expectation values
    std::uint64_t seed = 0;
    std::vector<ComplexMatrix> records; // index j, row-major matrix-unit order
};

// All non-identity Pauli tensor-product observables on n qubits.
std::vector<ComplexMatrix> pauli_observables(int n_qubits);

// State tomography of rho by Pauli inversion: rho = (I + sum <P> P) / N.
// Expectations are exact, or estimated from `shots` +/-1 samples each.
ComplexMatrix tomograph_state(const ComplexMatrix& rho, const std::vector<ComplexMatrix>& observables,
                              std::optional<long> shots, Rng& rng);

// Runs the four-input-state recipe for every basis element of a
// trace-preserving channel. Deterministic given (seed, shots); each record
// uses an independent derived sub-seed.
TomographyDataset simulate_dataset(const KrausSet& op, std::optional<long> shots, std::uint64_t seed);

// beta^{mn}_{jk}: coefficient of rho_k in A~_m rho_j A~_n^†, stored as an
// N^4 x N^4 matrix with row (j,k) and column (m,n), row-major pair order.
struct BetaTensor {
    int dim = 0;
    ComplexMatrix matrix;
};

BetaTensor compute_beta(const OperatorBasis& basis, const StateBasis& states);

// lambda_jk: expansion of each measured E(rho_j) over the state basis.
struct LambdaMatrix {
    int dim = 0;
    ComplexMatrix matrix; // N^2 x N^2, row j, column k
};

LambdaMatrix compute_lambda(const TomographyDataset& data, const StateBasis& states);
LambdaMatrix compute_lambda(const std::vector<ComplexMatrix>& outputs, const StateBasis& states);

struct ReconstructionReport {
    double residual = 0.0;     // ||beta chi_vec - lambda_vec||
    double min_eigenvalue = 0.0;
    double tp_defect = 0.0;
};

// chi = kappa lambda with kappa the Moore-Penrose inverse of beta. The result
// is Hermitized before validation; positivity violations beyond tolerance are
// surfaced by strict validation only, which linear inversion does not apply.
ChiMatrix reconstruct_chi(const BetaTensor& beta, const LambdaMatrix& lambda,
                          const OperatorBasis& basis, ReconstructionReport* report = nullptr);

// Precomputed beta/kappa pair for reconstructing many datasets against the
// same bases.
class ChiReconstructor {
public:
    ChiReconstructor(const OperatorBasis& basis, const StateBasis& states);

    const BetaTensor& beta() const { return beta_; }
    ChiMatrix reconstruct(const LambdaMatrix& lambda, ReconstructionReport* report = nullptr) const;

private:
    OperatorBasis basis_;
    BetaTensor beta_;
    ComplexMatrix kappa_;
};

// chi = Lambda rhobar Lambda for one qubit, with
// Lambda = [[I, sx], [sx, -I]] / 2 and rhobar the 2x2 block matrix of records.
ChiMatrix reconstruct_chi_closed_form_1q(const TomographyDataset& data);

// chi2 = Lambda2 rhobar Lambda2 for two qubits, Lambda2 = Lambda (x) Lambda.
// rhobar = P^T [rho'_{PQ} blocks] P with P the permutation exchanging the two
// middle base-2 digits of the block index (I (x) SWAP (x) I).
ChiMatrix reconstruct_chi_closed_form_2q(const TomographyDataset& data);

// Optional physicality projection: clamps negative chi eigenvalues to zero
// and rescales so that tr(sum chi_mn A~_n^† A~_m) = N again.
ChiMatrix project_physical(const ChiMatrix& chi);

} // namespace qpt
