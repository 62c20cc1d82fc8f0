#include "qpt/tomography.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>

#include "qpt/numerics.hpp"

namespace qpt {

namespace {

constexpr double kBasisRankTol = 1e-8;
constexpr double kResidualTol = 1e-8;

// middle-digit swap (j,k)=((p,q),(c,d)) -> ((p,c),(q,d)) used by the
// two-qubit block permutation
int swap_middle_digits(int x, int n) {
    const int d = x % n;
    const int c = (x / n) % n;
    const int q = (x / (n * n)) % n;
    const int p = x / (n * n * n);
    return ((p * n + c) * n + q) * n + d;
}

ComplexMatrix lambda_1q() {
    // [[I, sx], [sx, -I]] / 2
    ComplexMatrix l(4, 4);
    l << 1, 0, 0, 1,
         0, 1, 1, 0,
         0, 1, -1, 0,
         1, 0, 0, -1;
    return 0.5 * l;
}

void require_complete(const TomographyDataset& data) {
    const int n2 = data.dim * data.dim;
    if (static_cast<int>(data.records.size()) != n2)
        throw Error(ErrorKind::incomplete_dataset,
                    "expected " + std::to_string(n2) + " records, got " +
                        std::to_string(data.records.size()));
    for (const ComplexMatrix& r : data.records)
        if (r.rows() != data.dim || r.cols() != data.dim)
            throw Error(ErrorKind::dimension_mismatch, "record dimension mismatch");
}

} // namespace

// ------------------------------------------------------------------ StateBasis

StateBasis::StateBasis(std::vector<ComplexMatrix> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) throw Error(ErrorKind::degenerate_basis, "empty state basis");
    dim_ = static_cast<int>(elements_.front().rows());
    if (static_cast<int>(elements_.size()) != dim_ * dim_)
        throw Error(ErrorKind::degenerate_basis, "state basis needs dim^2 elements");

    vectorized_.resize(dim_ * dim_, dim_ * dim_);
    for (std::size_t k = 0; k < elements_.size(); ++k) {
        require_finite(elements_[k], "state basis element");
        require_square(elements_[k], "state basis element");
        if (elements_[k].rows() != dim_)
            throw Error(ErrorKind::dimension_mismatch, "mixed state basis dimensions");
        vectorized_.col(static_cast<Eigen::Index>(k)) = vec(elements_[k]);
    }

    Eigen::JacobiSVD<ComplexMatrix> svd(vectorized_);
    const RealVector& sigma = svd.singularValues();
    if (sigma(sigma.size() - 1) <= kBasisRankTol * sigma(0))
        throw Error(ErrorKind::degenerate_basis, "state basis is rank deficient");
}

StateBasis projector_state_basis(int dim) {
    if (dim < 2) throw Error(ErrorKind::wrong_dimension, "state basis needs dim >= 2");
    std::vector<ComplexMatrix> units;
    units.reserve(static_cast<std::size_t>(dim) * dim);
    for (int n = 0; n < dim; ++n)
        for (int m = 0; m < dim; ++m) {
            ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
            u(n, m) = 1.0;
            units.push_back(std::move(u));
        }
    return StateBasis(std::move(units));
}

// ----------------------------------------------------------- PreparationRecipe

PreparationRecipe PreparationRecipe::standard(int dim) {
    if (dim < 2) throw Error(ErrorKind::wrong_dimension, "recipe needs dim >= 2");

    PreparationRecipe recipe;
    recipe.dim_ = dim;
    recipe.preparations_.resize(static_cast<std::size_t>(dim) * dim);
    recipe.terms_.resize(static_cast<std::size_t>(dim) * dim);

    auto ket = [dim](int n) {
        ComplexVector v = ComplexVector::Zero(dim);
        v(n) = 1.0;
        return v;
    };
    auto index = [dim](int n, int m) { return n * dim + m; };

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const Complex i(0.0, 1.0);

    for (int n = 0; n < dim; ++n) {
        recipe.preparations_[static_cast<std::size_t>(index(n, n))] = ket(n);
        recipe.terms_[static_cast<std::size_t>(index(n, n))] = {{index(n, n), 1.0}};
    }
    for (int s = 0; s < dim; ++s) {
        for (int t = s + 1; t < dim; ++t) {
            const int plus = index(s, t); // owns (|s> + |t>)/sqrt(2)
            const int imag = index(t, s); // owns (|s> + i|t>)/sqrt(2)
            recipe.preparations_[static_cast<std::size_t>(plus)] = inv_sqrt2 * (ket(s) + ket(t));
            recipe.preparations_[static_cast<std::size_t>(imag)] = inv_sqrt2 * (ket(s) + i * ket(t));

            // |s><t| = P+ + i P- - (1+i)(Ps + Pt)/2 and its conjugate pattern
            recipe.terms_[static_cast<std::size_t>(plus)] = {{plus, 1.0},
                                                             {imag, i},
                                                             {index(s, s), -0.5 * (1.0 + i)},
                                                             {index(t, t), -0.5 * (1.0 + i)}};
            recipe.terms_[static_cast<std::size_t>(imag)] = {{plus, 1.0},
                                                             {imag, -i},
                                                             {index(s, s), -0.5 * (1.0 - i)},
                                                             {index(t, t), -0.5 * (1.0 - i)}};
        }
    }
    return recipe;
}

// ------------------------------------------------------------- state tomography

std::vector<ComplexMatrix> pauli_observables(int n_qubits) {
    if (n_qubits < 1) throw Error(ErrorKind::wrong_dimension, "need at least one qubit");
    const std::vector<ComplexMatrix> single = {pauli_i(), pauli_x(), pauli_y(), pauli_z()};

    std::vector<ComplexMatrix> all = {ComplexMatrix::Identity(1, 1)};
    for (int q = 0; q < n_qubits; ++q) {
        std::vector<ComplexMatrix> next;
        next.reserve(all.size() * 4);
        for (const ComplexMatrix& left : all)
            for (const ComplexMatrix& p : single) next.push_back(kron(left, p));
        all = std::move(next);
    }
    all.erase(all.begin()); // drop the identity
    return all;
}

ComplexMatrix tomograph_state(const ComplexMatrix& rho, const std::vector<ComplexMatrix>& observables,
                              std::optional<long> shots, Rng& rng) {
    const int dim = static_cast<int>(rho.rows());
    ComplexMatrix estimate = ComplexMatrix::Identity(dim, dim);
    for (const ComplexMatrix& p : observables) {
        double expectation = (rho * p).trace().real();
        if (shots) {
            expectation = std::clamp(expectation, -1.0, 1.0);
            expectation = rng.sample_pm1_mean(expectation, *shots);
        }
        estimate += expectation * p;
    }
    return estimate / static_cast<double>(dim);
}

TomographyDataset simulate_dataset(const KrausSet& op, std::optional<long> shots, std::uint64_t seed) {
    if (!op.trace_preserving())
        throw Error(ErrorKind::not_trace_preserving,
                    "selective operations are reconstructed per branch, not here");
    if (shots && *shots < 1) throw Error(ErrorKind::parse_error, "shots must be positive");

    const int dim = op.dim();
    int n_qubits = 0;
    for (int d = dim; d > 1; d /= 2) {
        if (d % 2 != 0) throw Error(ErrorKind::wrong_dimension, "dimension must be a power of two");
        ++n_qubits;
    }

    const PreparationRecipe recipe = PreparationRecipe::standard(dim);
    const std::vector<ComplexMatrix> observables = pauli_observables(n_qubits);

    TomographyDataset data;
    data.dim = dim;
    data.shots = shots;
    data.seed = seed;
    data.records.resize(static_cast<std::size_t>(dim) * dim);

    for (int j = 0; j < dim * dim; ++j) {
        Rng rng(sub_seed(seed, static_cast<std::uint64_t>(j)));
        ComplexMatrix assembled = ComplexMatrix::Zero(dim, dim);
        for (const PreparationTerm& term : recipe.terms(j)) {
            DensityMatrix input = DensityMatrix::pure(recipe.preparation(term.element));
            ComplexMatrix output = apply(op, input).state.matrix();
            assembled += term.coeff * tomograph_state(output, observables, shots, rng);
        }
        data.records[static_cast<std::size_t>(j)] = std::move(assembled);
    }
    return data;
}

// ------------------------------------------------------------------ beta/lambda

BetaTensor compute_beta(const OperatorBasis& basis, const StateBasis& states) {
    if (basis.dim() != states.dim())
        throw Error(ErrorKind::dimension_mismatch, "basis and state dimensions differ");

    const int n2 = basis.size();
    Eigen::PartialPivLU<ComplexMatrix> lu(states.vectorized());

    BetaTensor beta;
    beta.dim = basis.dim();
    beta.matrix.resize(n2 * n2, n2 * n2);
    for (int m = 0; m < n2; ++m) {
        for (int n = 0; n < n2; ++n) {
            const int col = m * n2 + n;
            for (int j = 0; j < n2; ++j) {
                // expansion of A~_m rho_j A~_n^† over the state basis
                ComplexVector coeffs =
                    lu.solve(vec(ComplexMatrix(basis[m] * states[j] * basis[n].adjoint())));
                for (int k = 0; k < n2; ++k) beta.matrix(j * n2 + k, col) = coeffs(k);
            }
        }
    }
    return beta;
}

LambdaMatrix compute_lambda(const std::vector<ComplexMatrix>& outputs, const StateBasis& states) {
    const int n2 = states.size();
    if (static_cast<int>(outputs.size()) != n2)
        throw Error(ErrorKind::incomplete_dataset,
                    "expected " + std::to_string(n2) + " outputs, got " + std::to_string(outputs.size()));

    Eigen::PartialPivLU<ComplexMatrix> lu(states.vectorized());
    LambdaMatrix lambda;
    lambda.dim = states.dim();
    lambda.matrix.resize(n2, n2);
    for (int j = 0; j < n2; ++j) {
        if (outputs[static_cast<std::size_t>(j)].rows() != states.dim())
            throw Error(ErrorKind::dimension_mismatch, "output dimension mismatch");
        lambda.matrix.row(j) = lu.solve(vec(outputs[static_cast<std::size_t>(j)])).transpose();
    }
    return lambda;
}

LambdaMatrix compute_lambda(const TomographyDataset& data, const StateBasis& states) {
    if (data.dim != states.dim())
        throw Error(ErrorKind::dimension_mismatch, "dataset and state basis dimensions differ");
    require_complete(data);
    return compute_lambda(data.records, states);
}

// --------------------------------------------------------------- reconstruction

namespace {

ChiMatrix chi_from_kappa(const ComplexMatrix& kappa, const BetaTensor& beta,
                         const LambdaMatrix& lambda, const OperatorBasis& basis,
                         ReconstructionReport* report) {
    const int n2 = basis.size();
    ComplexVector lambda_vec(n2 * n2);
    for (int j = 0; j < n2; ++j)
        for (int k = 0; k < n2; ++k) lambda_vec(j * n2 + k) = lambda.matrix(j, k);

    ComplexVector chi_vec = kappa * lambda_vec;
    const double residual = (beta.matrix * chi_vec - lambda_vec).norm();
    if (residual > kResidualTol * (1.0 + lambda_vec.norm()))
        throw Error(ErrorKind::inconsistent_data,
                    "linear-map residual " + std::to_string(residual) +
                        "; data was not produced by a quantum operation");

    ComplexMatrix chi(n2, n2);
    for (int m = 0; m < n2; ++m)
        for (int n = 0; n < n2; ++n) chi(m, n) = chi_vec(m * n2 + n);
    ChiMatrix result =
        with_detected_tp_flag(ChiMatrix(basis, hermitize(chi), false, Validation::lenient));

    if (report) {
        report->residual = residual;
        report->min_eigenvalue = result.min_eigenvalue();
        report->tp_defect = result.trace_preservation_defect();
    }
    return result;
}

} // namespace

ChiMatrix reconstruct_chi(const BetaTensor& beta, const LambdaMatrix& lambda,
                          const OperatorBasis& basis, ReconstructionReport* report) {
    if (beta.dim != basis.dim() || lambda.dim != basis.dim())
        throw Error(ErrorKind::dimension_mismatch, "beta/lambda/basis dimensions differ");
    return chi_from_kappa(pseudo_inverse(beta.matrix), beta, lambda, basis, report);
}

ChiReconstructor::ChiReconstructor(const OperatorBasis& basis, const StateBasis& states)
    : basis_(basis), beta_(compute_beta(basis, states)), kappa_(pseudo_inverse(beta_.matrix)) {}

ChiMatrix ChiReconstructor::reconstruct(const LambdaMatrix& lambda, ReconstructionReport* report) const {
    if (lambda.dim != basis_.dim())
        throw Error(ErrorKind::dimension_mismatch, "lambda dimension mismatch");
    return chi_from_kappa(kappa_, beta_, lambda, basis_, report);
}

// ------------------------------------------------------------------ closed forms

ChiMatrix reconstruct_chi_closed_form_1q(const TomographyDataset& data) {
    if (data.dim != 2) throw Error(ErrorKind::wrong_dimension, "closed form requires one qubit");
    require_complete(data);

    ComplexMatrix rhobar(4, 4);
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q)
            rhobar.block(2 * p, 2 * q, 2, 2) = data.records[static_cast<std::size_t>(2 * p + q)];

    const ComplexMatrix lambda = lambda_1q();
    return with_detected_tp_flag(
        ChiMatrix(standard_basis(1), hermitize(lambda * rhobar * lambda), false, Validation::lenient));
}

ChiMatrix reconstruct_chi_closed_form_2q(const TomographyDataset& data) {
    if (data.dim != 4) throw Error(ErrorKind::wrong_dimension, "closed form requires two qubits");
    require_complete(data);

    // block matrix of measured E(|P><Q|), then conjugate by the permutation
    // that regroups ((P),(C)) indices into per-qubit (p,c) pairs
    ComplexMatrix blocks(16, 16);
    for (int p = 0; p < 4; ++p)
        for (int q = 0; q < 4; ++q)
            blocks.block(4 * p, 4 * q, 4, 4) = data.records[static_cast<std::size_t>(4 * p + q)];

    ComplexMatrix rhobar(16, 16);
    for (int a = 0; a < 16; ++a)
        for (int b = 0; b < 16; ++b)
            rhobar(a, b) = blocks(swap_middle_digits(a, 2), swap_middle_digits(b, 2));

    const ComplexMatrix lambda2 = kron(lambda_1q(), lambda_1q());
    return with_detected_tp_flag(
        ChiMatrix(standard_basis(2), hermitize(lambda2 * rhobar * lambda2), false, Validation::lenient));
}

// ------------------------------------------------------------------- projection

ChiMatrix project_physical(const ChiMatrix& chi) {
    const bool was_tp = chi.trace_preservation_defect() <= 1e-8;

    HermitianEigenDecomposition eig = herm_eig(chi.matrix(), 1e-6);
    RealVector clamped = eig.eigenvalues.cwiseMax(0.0);
    ComplexMatrix projected =
        eig.eigenvectors * clamped.cast<Complex>().asDiagonal() * eig.eigenvectors.adjoint();

    // Clamping breaks trace preservation; when the input satisfied it,
    // restore it exactly by rescaling the channel with T^{-1/2},
    // T = sum chi_mn A~_n^† A~_m. In chi coordinates that is the congruence
    // chi -> G chi G^† with G the basis expansion of A~_m T^{-1/2}.
    const int n2 = chi.basis().size();
    const int n = chi.dim();
    if (was_tp) {
        ComplexMatrix t = ComplexMatrix::Zero(n, n);
        for (int m = 0; m < n2; ++m)
            for (int k = 0; k < n2; ++k)
                t += projected(m, k) * (chi.basis()[k].adjoint() * chi.basis()[m]);

        HermitianEigenDecomposition teig = herm_eig(t, 1e-6);
        if (teig.eigenvalues(0) > 1e-12) {
            ComplexVector inv_sqrt(n);
            for (int i = 0; i < n; ++i) inv_sqrt(i) = 1.0 / std::sqrt(teig.eigenvalues(i));
            ComplexMatrix t_inv_half =
                teig.eigenvectors * inv_sqrt.asDiagonal() * teig.eigenvectors.adjoint();

            Eigen::PartialPivLU<ComplexMatrix> lu(chi.basis().vectorized());
            ComplexMatrix g(n2, n2);
            for (int m = 0; m < n2; ++m)
                g.col(m) = lu.solve(vec(ComplexMatrix(chi.basis()[m] * t_inv_half)));
            projected = g * projected * g.adjoint();
        }
    }

    return with_detected_tp_flag(
        ChiMatrix(chi.basis(), hermitize(projected), false, Validation::lenient));
}

} // namespace qpt
