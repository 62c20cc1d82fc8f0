// errors.hpp — typed exception hierarchy shared by all qpt modules
#pragma once

#include <stdexcept>
#include <string>

namespace qpt {

enum class ErrorKind {
    not_square,
    not_hermitian,
    convergence_failure,
    singular,
    branch_cut_eigenvalue,
    invalid_density_matrix,
    dimension_mismatch,
    zero_weight,
    degenerate_basis,
    not_positive,
    wrong_dimension,
    not_trace_preserving,
    not_unitary,
    incomplete_dataset,
    inconsistent_data,
    unknown_branch,
    zero_probability_branch,
    parse_error,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::not_square:              return "NotSquare";
        case ErrorKind::not_hermitian:           return "NotHermitian";
        case ErrorKind::convergence_failure:     return "ConvergenceFailure";
        case ErrorKind::singular:                return "Singular";
        case ErrorKind::branch_cut_eigenvalue:   return "BranchCutEigenvalue";
        case ErrorKind::invalid_density_matrix:  return "InvalidDensityMatrix";
        case ErrorKind::dimension_mismatch:      return "DimensionMismatch";
        case ErrorKind::zero_weight:             return "ZeroWeight";
        case ErrorKind::degenerate_basis:        return "DegenerateBasis";
        case ErrorKind::not_positive:            return "NotPositive";
        case ErrorKind::wrong_dimension:         return "WrongDimension";
        case ErrorKind::not_trace_preserving:    return "NotTracePreserving";
        case ErrorKind::not_unitary:             return "NotUnitary";
        case ErrorKind::incomplete_dataset:      return "IncompleteDataset";
        case ErrorKind::inconsistent_data:       return "InconsistentData";
        case ErrorKind::unknown_branch:          return "UnknownBranch";
        case ErrorKind::zero_probability_branch: return "ZeroProbabilityBranch";
        case ErrorKind::parse_error:             return "ParseError";
    }
    return "UnknownError";
}

} // namespace qpt
