#include "qpt/channel.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>

#include "qpt/numerics.hpp"

namespace qpt {

namespace {

constexpr double kDensityHermTol = 1e-10;
constexpr double kDensityTraceTol = 1e-10;
constexpr double kDensityPsdTol = 1e-10;
constexpr double kCompletenessTol = 1e-9;
constexpr double kChiHermTol = 1e-9;
constexpr double kChiPsdTol = 1e-8;
constexpr double kChiTpTol = 1e-8;
constexpr double kBasisRankTol = 1e-8;

double min_hermitian_eigenvalue(const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitize(m));
    return solver.eigenvalues()(0);
}

} // namespace

// ---------------------------------------------------------------- DensityMatrix

DensityMatrix::DensityMatrix(ComplexMatrix m, Validation mode) : mat_(std::move(m)) {
    require_finite(mat_, "density matrix");
    require_square(mat_, "density matrix");

    const double herm_tol = mode == Validation::strict ? kDensityHermTol : 10 * kDensityHermTol;
    const double trace_tol = mode == Validation::strict ? kDensityTraceTol : 10 * kDensityTraceTol;

    const double herm_defect = frobenius(ComplexMatrix(mat_ - mat_.adjoint()));
    if (herm_defect > herm_tol)
        throw Error(ErrorKind::invalid_density_matrix,
                    "hermiticity defect " + std::to_string(herm_defect));
    const double trace_defect = std::abs(mat_.trace() - Complex(1.0, 0.0));
    if (trace_defect > trace_tol)
        throw Error(ErrorKind::invalid_density_matrix, "trace defect " + std::to_string(trace_defect));
    if (mode == Validation::strict) {
        const double min_eig = min_hermitian_eigenvalue(mat_);
        if (min_eig < -kDensityPsdTol)
            throw Error(ErrorKind::invalid_density_matrix,
                        "negative eigenvalue " + std::to_string(min_eig));
    }
}

DensityMatrix DensityMatrix::pure(const ComplexVector& ket) {
    const double norm = ket.norm();
    if (norm < 1e-14) throw Error(ErrorKind::invalid_density_matrix, "zero ket");
    ComplexVector unit = ket / norm;
    return DensityMatrix(unit * unit.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
    return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

// -------------------------------------------------------------------- KrausSet

KrausSet::KrausSet(std::vector<ComplexMatrix> operators) : operators_(std::move(operators)) {
    if (operators_.empty()) throw Error(ErrorKind::wrong_dimension, "empty Kraus set");
    const Eigen::Index n = operators_.front().rows();
    for (const ComplexMatrix& a : operators_) {
        require_finite(a, "Kraus operator");
        require_square(a, "Kraus operator");
        if (a.rows() != n) throw Error(ErrorKind::dimension_mismatch, "mixed Kraus dimensions");
    }

    ComplexMatrix completeness = ComplexMatrix::Zero(n, n);
    for (const ComplexMatrix& a : operators_) completeness += a.adjoint() * a;

    const double defect = frobenius(ComplexMatrix(completeness - ComplexMatrix::Identity(n, n)));
    trace_preserving_ = defect <= kCompletenessTol;
    if (!trace_preserving_) {
        // selective case: I - sum A^†A must still be positive
        const double min_eig =
            min_hermitian_eigenvalue(ComplexMatrix(ComplexMatrix::Identity(n, n) - completeness));
        if (min_eig < -kCompletenessTol)
            throw Error(ErrorKind::not_trace_preserving,
                        "sum A^†A exceeds the identity by " + std::to_string(-min_eig));
    }
}

// ---------------------------------------------------------------- OperatorBasis

OperatorBasis::OperatorBasis(std::vector<ComplexMatrix> operators)
    : operators_(std::move(operators)) {
    if (operators_.empty()) throw Error(ErrorKind::degenerate_basis, "empty operator basis");
    dim_ = static_cast<int>(operators_.front().rows());
    if (static_cast<int>(operators_.size()) != dim_ * dim_)
        throw Error(ErrorKind::degenerate_basis,
                    "operator basis needs dim^2 elements, got " + std::to_string(operators_.size()));

    vectorized_.resize(dim_ * dim_, dim_ * dim_);
    for (std::size_t m = 0; m < operators_.size(); ++m) {
        require_finite(operators_[m], "basis operator");
        require_square(operators_[m], "basis operator");
        if (operators_[m].rows() != dim_)
            throw Error(ErrorKind::dimension_mismatch, "mixed basis dimensions");
        vectorized_.col(static_cast<Eigen::Index>(m)) = vec(operators_[m]);
    }

    Eigen::JacobiSVD<ComplexMatrix> svd(vectorized_);
    const RealVector& sigma = svd.singularValues();
    if (sigma(sigma.size() - 1) <= kBasisRankTol * sigma(0))
        throw Error(ErrorKind::degenerate_basis, "operator basis is rank deficient");
}

// -------------------------------------------------------------------- ChiMatrix

ChiMatrix::ChiMatrix(OperatorBasis basis, ComplexMatrix chi, bool trace_preserving, Validation mode)
    : basis_(std::move(basis)), chi_(std::move(chi)), trace_preserving_(trace_preserving) {
    require_finite(chi_, "chi matrix");
    require_square(chi_, "chi matrix");
    if (chi_.rows() != basis_.size())
        throw Error(ErrorKind::dimension_mismatch, "chi must be N^2 x N^2 for the basis");

    const double herm_tol = mode == Validation::strict ? kChiHermTol : 10 * kChiHermTol;
    const double herm_defect = frobenius(ComplexMatrix(chi_ - chi_.adjoint()));
    if (herm_defect > herm_tol)
        throw Error(ErrorKind::not_hermitian, "chi hermiticity defect " + std::to_string(herm_defect));

    if (mode == Validation::strict) {
        const double min_eig = min_eigenvalue();
        if (min_eig < -kChiPsdTol)
            throw Error(ErrorKind::not_positive, "chi eigenvalue " + std::to_string(min_eig));
        if (trace_preserving_) {
            const double defect = trace_preservation_defect();
            if (defect > kChiTpTol)
                throw Error(ErrorKind::not_trace_preserving,
                            "trace-preservation defect " + std::to_string(defect));
        }
    }
}

double ChiMatrix::min_eigenvalue() const { return min_hermitian_eigenvalue(chi_); }

double ChiMatrix::trace_preservation_defect() const {
    const int n = dim();
    ComplexMatrix sum = ComplexMatrix::Zero(n, n);
    for (int m = 0; m < basis_.size(); ++m)
        for (int k = 0; k < basis_.size(); ++k)
            sum += chi_(m, k) * (basis_[k].adjoint() * basis_[m]);
    return frobenius(ComplexMatrix(sum - ComplexMatrix::Identity(n, n)));
}

// ----------------------------------------------------------------- Superoperator

Superoperator::Superoperator(int dim, ComplexMatrix matrix) : dim_(dim), mat_(std::move(matrix)) {
    require_finite(mat_, "superoperator");
    if (mat_.rows() != dim_ * dim_ || mat_.cols() != dim_ * dim_)
        throw Error(ErrorKind::dimension_mismatch, "superoperator must be N^2 x N^2");
}

ComplexMatrix Superoperator::apply(const ComplexMatrix& rho) const {
    if (rho.rows() != dim_ || rho.cols() != dim_)
        throw Error(ErrorKind::dimension_mismatch, "state dimension mismatch");
    return unvec(ComplexVector(mat_ * vec(rho)), dim_, dim_);
}

bool Superoperator::preserves_hermiticity(double tol) const {
    // probes: E_jj, (E_jk + E_kj), i(E_jk - E_kj) span the Hermitian matrices
    for (int j = 0; j < dim_; ++j) {
        for (int k = j; k < dim_; ++k) {
            ComplexMatrix probe = ComplexMatrix::Zero(dim_, dim_);
            if (j == k) {
                probe(j, j) = 1.0;
            } else {
                probe(j, k) = 1.0;
                probe(k, j) = 1.0;
            }
            ComplexMatrix out = apply(probe);
            if (frobenius(ComplexMatrix(out - out.adjoint())) > tol) return false;
            if (j != k) {
                probe(j, k) = Complex(0.0, 1.0);
                probe(k, j) = Complex(0.0, -1.0);
                out = apply(probe);
                if (frobenius(ComplexMatrix(out - out.adjoint())) > tol) return false;
            }
        }
    }
    return true;
}

// ------------------------------------------------------------------- operations

ApplyResult apply(const KrausSet& op, const DensityMatrix& rho) {
    if (op.dim() != rho.dim())
        throw Error(ErrorKind::dimension_mismatch, "channel and state dimensions differ");

    ComplexMatrix out = ComplexMatrix::Zero(op.dim(), op.dim());
    for (const ComplexMatrix& a : op.operators()) out += a * rho.matrix() * a.adjoint();

    const double weight = out.trace().real();
    if (weight <= 1e-14)
        throw Error(ErrorKind::zero_weight, "operation annihilates the state");
    return {DensityMatrix(hermitize(out) / weight), weight};
}

ChiMatrix kraus_to_chi(const KrausSet& op, const OperatorBasis& basis) {
    if (op.dim() != basis.dim())
        throw Error(ErrorKind::dimension_mismatch, "Kraus set and basis dimensions differ");

    const int n2 = basis.size();
    Eigen::PartialPivLU<ComplexMatrix> lu(basis.vectorized());

    ComplexMatrix chi = ComplexMatrix::Zero(n2, n2);
    for (const ComplexMatrix& a : op.operators()) {
        ComplexVector coeffs = lu.solve(vec(a)); // A_i = sum_m coeffs_m A~_m
        chi += coeffs * coeffs.adjoint();
    }
    return ChiMatrix(basis, hermitize(chi), op.trace_preserving());
}

KrausSet chi_to_kraus(const ChiMatrix& chi, double eig_tolerance, double rank_cutoff) {
    HermitianEigenDecomposition eig = herm_eig(chi.matrix(), 1e-6);

    std::vector<ComplexMatrix> kraus;
    for (Eigen::Index i = eig.eigenvalues.size() - 1; i >= 0; --i) {
        double d = eig.eigenvalues(i);
        if (d < -eig_tolerance)
            throw Error(ErrorKind::not_positive,
                        "chi eigenvalue " + std::to_string(d) + " below -" + std::to_string(eig_tolerance));
        if (d < rank_cutoff) continue;

        ComplexMatrix a = ComplexMatrix::Zero(chi.dim(), chi.dim());
        for (int m = 0; m < chi.basis().size(); ++m) a += eig.eigenvectors(m, i) * chi.basis()[m];
        kraus.push_back(std::sqrt(d) * a);
    }
    if (kraus.empty())
        throw Error(ErrorKind::not_positive, "chi has no eigenvalue above the rank cutoff");
    return KrausSet(std::move(kraus));
}

Superoperator to_superoperator(const KrausSet& op) {
    const int n2 = op.dim() * op.dim();
    ComplexMatrix l = ComplexMatrix::Zero(n2, n2);
    for (const ComplexMatrix& a : op.operators()) l += kron(a.conjugate(), a);
    return Superoperator(op.dim(), std::move(l));
}

Superoperator to_superoperator(const ChiMatrix& chi) {
    const int n2 = chi.dim() * chi.dim();
    ComplexMatrix l = ComplexMatrix::Zero(n2, n2);
    for (int m = 0; m < chi.basis().size(); ++m)
        for (int n = 0; n < chi.basis().size(); ++n)
            l += chi.matrix()(m, n) * kron(chi.basis()[n].conjugate(), chi.basis()[m]);
    return Superoperator(chi.dim(), std::move(l));
}

ChiMatrix superoperator_to_chi(const Superoperator& op, const OperatorBasis& basis) {
    if (op.dim() != basis.dim())
        throw Error(ErrorKind::dimension_mismatch, "superoperator and basis dimensions differ");

    // Reshuffle L into the Choi matrix C = sum_i vec(A_i) vec(A_i)^†, then
    // invert the congruence C = B chi B^† with B the vectorized basis. This
    // is exact for any linear map, physical or not.
    const int n = op.dim();
    const int n2 = n * n;
    const ComplexMatrix& l = op.matrix();
    ComplexMatrix choi(n2, n2);
    for (int c1 = 0; c1 < n; ++c1)
        for (int r1 = 0; r1 < n; ++r1)
            for (int c2 = 0; c2 < n; ++c2)
                for (int s2 = 0; s2 < n; ++s2)
                    choi(c1 * n + r1, c2 * n + s2) = l(s2 * n + r1, c2 * n + c1);

    Eigen::PartialPivLU<ComplexMatrix> lu(basis.vectorized());
    ComplexMatrix left = lu.solve(choi);                      // B^-1 C
    ComplexMatrix chi = lu.solve(left.adjoint()).adjoint();   // (B^-1 C) B^-†
    return ChiMatrix(basis, hermitize(chi), false, Validation::lenient);
}

ChiMatrix with_detected_tp_flag(ChiMatrix chi) {
    const bool tp = chi.trace_preservation_defect() <= kChiTpTol;
    if (tp == chi.trace_preserving()) return chi;
    return ChiMatrix(chi.basis(), chi.matrix(), tp, Validation::lenient);
}

double channel_distance(const Superoperator& a, const Superoperator& b) {
    if (a.dim() != b.dim())
        throw Error(ErrorKind::dimension_mismatch, "superoperator dimensions differ");
    return frobenius(ComplexMatrix(a.matrix() - b.matrix()));
}

// ---------------------------------------------------------------- fixed bases

ComplexMatrix pauli_i() { return ComplexMatrix::Identity(2, 2); }

ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

ComplexMatrix pauli_y() {
    ComplexMatrix m(2, 2);
    m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    return m;
}

ComplexMatrix pauli_z() {
    ComplexMatrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

OperatorBasis standard_basis(int n_qubits) {
    if (n_qubits < 1) throw Error(ErrorKind::wrong_dimension, "need at least one qubit");

    // A~_2 is -i sigma_y = [[0,-1],[1,0]], exactly as fixed by the one-qubit
    // construction; this keeps every basis operator real.
    std::vector<ComplexMatrix> one_qubit = {pauli_i(), pauli_x(), Complex(0.0, -1.0) * pauli_y(),
                                            pauli_z()};

    std::vector<ComplexMatrix> ops = one_qubit;
    for (int q = 1; q < n_qubits; ++q) {
        std::vector<ComplexMatrix> next;
        next.reserve(ops.size() * 4);
        for (const ComplexMatrix& left : ops)
            for (const ComplexMatrix& right : one_qubit) next.push_back(kron(left, right));
        ops = std::move(next);
    }
    return OperatorBasis(std::move(ops));
}

} // namespace qpt
