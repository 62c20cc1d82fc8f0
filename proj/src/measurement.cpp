#include "qpt/measurement.hpp"

#include <cmath>

#include "qpt/rng.hpp"

namespace qpt {

namespace {

constexpr double kZeroProbability = 1e-12;

// unnormalized action of a branch operation
ComplexMatrix branch_action(const KrausSet& op, const ComplexMatrix& rho) {
    ComplexMatrix out = ComplexMatrix::Zero(op.dim(), op.dim());
    for (const ComplexMatrix& a : op.operators()) out += a * rho * a.adjoint();
    return out;
}

} // namespace

InstrumentModel::InstrumentModel(std::vector<InstrumentBranch> branches)
    : branches_(std::move(branches)) {
    if (branches_.empty()) throw Error(ErrorKind::unknown_branch, "instrument has no branches");
    const int n = branches_.front().operation.dim();

    ComplexMatrix completeness = ComplexMatrix::Zero(n, n);
    for (const InstrumentBranch& b : branches_) {
        if (b.operation.dim() != n)
            throw Error(ErrorKind::dimension_mismatch, "mixed branch dimensions");
        for (const ComplexMatrix& a : b.operation.operators()) completeness += a.adjoint() * a;
    }
    const double defect = frobenius(ComplexMatrix(completeness - ComplexMatrix::Identity(n, n)));
    if (defect > 1e-9)
        throw Error(ErrorKind::not_trace_preserving,
                    "branches sum to a non-trace-preserving map, defect " + std::to_string(defect));
}

const InstrumentBranch& InstrumentModel::branch(const std::string& label) const {
    for (const InstrumentBranch& b : branches_)
        if (b.label == label) return b;
    throw Error(ErrorKind::unknown_branch, "no branch labeled '" + label + "'");
}

BranchOutcome simulate_branch(const InstrumentModel& model, const std::string& label,
                              const DensityMatrix& input, std::optional<long> trials,
                              std::uint64_t seed) {
    const InstrumentBranch& b = model.branch(label);
    if (input.dim() != model.dim())
        throw Error(ErrorKind::dimension_mismatch, "input dimension mismatch");

    const ComplexMatrix unnormalized = branch_action(b.operation, input.matrix());
    const double p = unnormalized.trace().real();
    if (p < kZeroProbability)
        throw Error(ErrorKind::zero_probability_branch,
                    "branch probability " + std::to_string(p) + "; renormalized state undefined");

    double p_hat = p;
    if (trials) {
        if (*trials < 1) throw Error(ErrorKind::parse_error, "trials must be positive");
        Rng rng(seed);
        long hits = 0;
        for (long t = 0; t < *trials; ++t)
            if (rng.bernoulli(p)) ++hits;
        p_hat = static_cast<double>(hits) / static_cast<double>(*trials);
    }
    return {p_hat, DensityMatrix(hermitize(unnormalized) / p)};
}

BranchDataset simulate_branch_dataset(const InstrumentModel& model, const std::string& label,
                                      std::optional<long> trials, std::uint64_t seed) {
    const int dim = model.dim();
    const PreparationRecipe recipe = PreparationRecipe::standard(dim);

    BranchDataset data;
    data.dim = dim;
    data.branch = label;
    data.trials = trials;
    data.seed = seed;
    data.records.resize(static_cast<std::size_t>(dim) * dim);

    for (int j = 0; j < dim * dim; ++j) {
        BranchRecord& record = data.records[static_cast<std::size_t>(j)];
        record.element = j;
        try {
            BranchOutcome out = simulate_branch(model, label, DensityMatrix::pure(recipe.preparation(j)),
                                                trials, sub_seed(seed, static_cast<std::uint64_t>(j)));
            record.p = out.probability;
            record.rho = out.state.matrix();
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::zero_probability_branch) throw;
            record.p = 0.0;
            record.rho = ComplexMatrix::Zero(dim, dim);
        }
    }
    return data;
}

std::vector<ComplexMatrix> denormalize(const BranchDataset& data) {
    const int n2 = data.dim * data.dim;
    if (static_cast<int>(data.records.size()) != n2)
        throw Error(ErrorKind::incomplete_dataset, "branch dataset must cover all basis inputs");

    // unnormalized measured outputs E_i(prep_j) = p_j rho'_j
    std::vector<ComplexMatrix> unnormalized(static_cast<std::size_t>(n2));
    std::vector<bool> seen(static_cast<std::size_t>(n2), false);
    for (const BranchRecord& r : data.records) {
        if (r.element < 0 || r.element >= n2 || seen[static_cast<std::size_t>(r.element)])
            throw Error(ErrorKind::incomplete_dataset, "branch dataset indices must cover 0..N^2-1");
        seen[static_cast<std::size_t>(r.element)] = true;
        unnormalized[static_cast<std::size_t>(r.element)] =
            r.p <= 0.0 ? ComplexMatrix::Zero(data.dim, data.dim) : ComplexMatrix(r.p * r.rho);
    }

    // assemble E_i(|n><m|): the recipe combinations are valid only for the
    // unnormalized outputs
    const PreparationRecipe recipe = PreparationRecipe::standard(data.dim);
    std::vector<ComplexMatrix> effective(static_cast<std::size_t>(n2));
    for (int j = 0; j < n2; ++j) {
        ComplexMatrix assembled = ComplexMatrix::Zero(data.dim, data.dim);
        for (const PreparationTerm& term : recipe.terms(j))
            assembled += term.coeff * unnormalized[static_cast<std::size_t>(term.element)];
        effective[static_cast<std::size_t>(j)] = std::move(assembled);
    }
    return effective;
}

ChiMatrix reconstruct_branch(const BranchDataset& data, const OperatorBasis& basis) {
    if (basis.dim() != data.dim)
        throw Error(ErrorKind::dimension_mismatch, "basis and dataset dimensions differ");

    const StateBasis states = projector_state_basis(data.dim);
    const LambdaMatrix lambda = compute_lambda(denormalize(data), states);
    const BetaTensor beta = compute_beta(basis, states);
    return reconstruct_chi(beta, lambda, basis);
}

} // namespace qpt
