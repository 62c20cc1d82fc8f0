// measurement.hpp — selective quantum operations: one (generally
// non-trace-preserving) operation per measurement outcome, with outcome
// probability tr E_i(rho) and renormalized post-measurement state. Branch
// reconstruction undoes the renormalization before the linear inversion.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpt/channel.hpp"
#include "qpt/tomography.hpp"

namespace qpt {

struct InstrumentBranch {
    std::string label;
    KrausSet operation;
};

// A complete instrument: the branches together are trace preserving.
class InstrumentModel {
public:
    explicit InstrumentModel(std::vector<InstrumentBranch> branches);

    int dim() const { return branches_.front().operation.dim(); }
    const std::vector<InstrumentBranch>& branches() const { return branches_; }
    const InstrumentBranch& branch(const std::string& label) const;

private:
    std::vector<InstrumentBranch> branches_;
};

// Per prepared input: estimated outcome probability and the (exact)
// renormalized post-measurement state; rho is zero when the branch
// probability vanishes on that input.
struct BranchRecord {
    int element = 0; // basis-element index owning the preparation
    double p = 0.0;
    ComplexMatrix rho;
};

struct BranchDataset {
    int dim = 0;
    std::string branch;
    std::optional<long> trials; // nullopt = exact probabilities
    std::uint64_t seed = 0;
    std::vector<BranchRecord> records;
};

struct BranchOutcome {
    double probability;
    DensityMatrix state;
};

// Exact mode returns (tr E_i(rho), E_i(rho)/tr). Sampled mode estimates the
// probability as a frequency over `trials` draws; the state stays exact
// (tomography noise is layered by the tomography module, not here).
// Throws ZeroProbabilityBranch when the exact probability is below 1e-12.
BranchOutcome simulate_branch(const InstrumentModel& model, const std::string& label,
                              const DensityMatrix& input, std::optional<long> trials,
                              std::uint64_t seed);

// Runs simulate_branch over the N^2 recipe preparations, one derived sub-seed
// per record; zero-probability inputs produce (p=0, rho=0) records.
BranchDataset simulate_branch_dataset(const InstrumentModel& model, const std::string& label,
                                      std::optional<long> trials, std::uint64_t seed);

// E_i(rho_j) = p_j rho'_j for every basis element, assembling off-diagonal
// elements from the unnormalized preparation outputs. Linearity holds only
// for the unnormalized map, which is the point of the renormalization
// inversion.
std::vector<ComplexMatrix> denormalize(const BranchDataset& data);

// denormalize -> lambda -> kappa -> chi, yielding a non-trace-preserving chi.
ChiMatrix reconstruct_branch(const BranchDataset& data, const OperatorBasis& basis);

} // namespace qpt
