#include "qpt/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "qpt/numerics.hpp"
#include "qpt/optimize.hpp"

namespace qpt {

namespace {

void require_unitary(const ComplexMatrix& u, int dim) {
    require_square(u, "target");
    if (u.rows() != dim) throw Error(ErrorKind::dimension_mismatch, "target dimension mismatch");
    const double defect =
        frobenius(ComplexMatrix(u.adjoint() * u - ComplexMatrix::Identity(dim, dim)));
    if (defect > 1e-9)
        throw Error(ErrorKind::not_unitary, "unitarity defect " + std::to_string(defect));
}

double clamp_fidelity(double f) { return std::clamp(f, 0.0, 1.0); }

// W_ij = tr(A_i rho A_j^†); positive with unit trace for trace-preserving ops
ComplexMatrix exchange_matrix(const DensityMatrix& rho, const KrausSet& op) {
    const int r = op.size();
    ComplexMatrix w(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            w(i, j) = (op[i] * rho.matrix() * op[j].adjoint()).trace();
    return hermitize(w);
}

std::vector<RealVector> pure_state_grid(int dim) {
    if (dim == 2) return sphere_grid_1q(64);
    const int d = pure_state_param_count(dim);
    RealVector lo = RealVector::Zero(d);
    RealVector hi(d);
    for (int k = 0; k < dim - 1; ++k) hi(k) = 0.5 * M_PI;
    for (int k = dim - 1; k < d; ++k) hi(k) = 2.0 * M_PI;
    return halton_grid(2000, lo, hi);
}

std::vector<RealVector> density_grid(int dim) {
    const int d = density_param_count(dim);
    RealVector lo = RealVector::Constant(d, -M_PI);
    RealVector hi = RealVector::Constant(d, M_PI);
    lo.tail(dim).setConstant(-4.0);
    hi.tail(dim).setConstant(4.0);
    return halton_grid(dim == 2 ? 4096 : 2000, lo, hi);
}

} // namespace

double entanglement_fidelity_kraus(const DensityMatrix& rho, const ComplexMatrix& target,
                                   const KrausSet& op) {
    if (op.dim() != rho.dim()) throw Error(ErrorKind::dimension_mismatch, "dimensions differ");
    require_unitary(target, rho.dim());

    double f = 0.0;
    for (const ComplexMatrix& a : op.operators())
        f += std::norm((target.adjoint() * a * rho.matrix()).trace());
    return clamp_fidelity(f);
}

double entanglement_fidelity_chi(const DensityMatrix& rho, const ComplexMatrix& target,
                                 const ChiMatrix& chi) {
    if (chi.dim() != rho.dim()) throw Error(ErrorKind::dimension_mismatch, "dimensions differ");
    require_unitary(target, rho.dim());

    const int n2 = chi.basis().size();
    ComplexVector t(n2); // tr(U^† A~_m rho)
    for (int m = 0; m < n2; ++m)
        t(m) = (target.adjoint() * chi.basis()[m] * rho.matrix()).trace();

    // tr(rho A~_n^† U) == conj(tr(U^† A~_n rho)) for Hermitian rho
    Complex f = 0.0;
    for (int m = 0; m < n2; ++m)
        for (int n = 0; n < n2; ++n) f += chi.matrix()(m, n) * t(m) * std::conj(t(n));
    return clamp_fidelity(f.real());
}

FidelityReport min_fidelity(const ComplexMatrix& target, const KrausSet& op) {
    const int dim = op.dim();
    require_unitary(target, dim);

    auto objective = [&](const RealVector& params) {
        const ComplexVector psi = pure_state_from_angles(params, dim);
        const ComplexVector ideal = target * psi;
        // <psi|U^† E(|psi><psi|) U|psi> = sum_i |<ideal|A_i|psi>|^2
        double f = 0.0;
        for (const ComplexMatrix& a : op.operators()) f += std::norm((ideal.adjoint() * (a * psi))(0));
        return f;
    };

    SearchResult best = grid_then_refine(objective, pure_state_grid(dim));
    return {clamp_fidelity(best.value),
            DensityMatrix::pure(pure_state_from_angles(best.params, dim)), "grid+nelder-mead over pure states"};
}

FidelityReport min_entanglement_fidelity(const ComplexMatrix& target, const KrausSet& op) {
    const int dim = op.dim();
    require_unitary(target, dim);

    auto objective = [&](const RealVector& params) {
        return entanglement_fidelity_kraus(DensityMatrix(density_from_params(params, dim)), target, op);
    };

    SearchResult best = grid_then_refine(objective, density_grid(dim));
    return {clamp_fidelity(best.value), DensityMatrix(density_from_params(best.params, dim)),
            "grid+nelder-mead over density matrices"};
}

double entropy_exchange(const DensityMatrix& rho, const KrausSet& op) {
    if (op.dim() != rho.dim()) throw Error(ErrorKind::dimension_mismatch, "dimensions differ");
    return von_neumann_entropy(exchange_matrix(rho, op));
}

CapacityReport channel_capacity(const KrausSet& op) {
    if (!op.trace_preserving())
        throw Error(ErrorKind::not_trace_preserving, "capacity requires a trace-preserving channel");
    const int dim = op.dim();

    auto coherent_information = [&](const ComplexMatrix& rho_mat) {
        DensityMatrix rho(rho_mat, Validation::lenient);
        const ComplexMatrix out = apply(op, rho).state.matrix();
        return von_neumann_entropy(out) - von_neumann_entropy(exchange_matrix(rho, op));
    };
    auto objective = [&](const RealVector& params) {
        return -coherent_information(density_from_params(params, dim));
    };

    SearchResult best = grid_then_refine(objective, density_grid(dim));

    CapacityReport report{0.0, -best.value, DensityMatrix(density_from_params(best.params, dim)),
                          0.0, 0.0, ""};
    report.output_entropy = von_neumann_entropy(apply(op, report.argmax_state).state.matrix());
    report.entropy_exchange = entropy_exchange(report.argmax_state, op);
    if (report.raw_optimum <= 0.0) {
        report.capacity = 0.0;
        report.note = "coherent information non-positive";
    } else {
        report.capacity = report.raw_optimum;
    }
    return report;
}

LindbladReport lindblad_log(const Superoperator& op) {
    ComplexMatrix generator = matrix_log(op.matrix()); // Singular/BranchCut surface here

    const double roundtrip =
        frobenius(ComplexMatrix(matrix_exp(generator) - op.matrix()));
    if (roundtrip > 1e-8 * (1.0 + frobenius(op.matrix())))
        throw Error(ErrorKind::convergence_failure, "exp(log E) residual " + std::to_string(roundtrip));

    LindbladReport report{Superoperator(op.dim(), generator), {}, false};
    const OperatorBasis basis = standard_basis(static_cast<int>(std::round(std::log2(op.dim()))));
    const std::array<double, 3> fractions{0.25, 0.5, 0.75};
    bool all_ok = true;
    for (std::size_t i = 0; i < fractions.size(); ++i) {
        Superoperator fractional(op.dim(), matrix_exp(ComplexMatrix(fractions[i] * generator)));
        const double min_eig = superoperator_to_chi(fractional, basis).min_eigenvalue();
        report.fractional_positive[i] = min_eig >= -1e-6;
        all_ok = all_ok && report.fractional_positive[i];
    }
    report.valid_generator = all_ok;
    return report;
}

LindbladReport lindblad_log(const KrausSet& op) { return lindblad_log(to_superoperator(op)); }

} // namespace qpt
