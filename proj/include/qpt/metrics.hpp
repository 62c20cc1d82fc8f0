// metrics.hpp — channel quality measures: entanglement fidelity in Kraus and
// chi form, minimum gate fidelity, entropy exchange, single-letter channel
// capacity, and the Lindblad generator extracted as a matrix logarithm.
#pragma once

#include <array>
#include <string>

#include "qpt/channel.hpp"

namespace qpt {

struct FidelityReport {
    double value = 0.0;       // in [0, 1]
    DensityMatrix state;      // the minimizing state found
    std::string method;
};

struct CapacityReport {
    double capacity = 0.0;            // max(0, coherent information), bits
    double raw_optimum = 0.0;         // unfloored optimizer value
    DensityMatrix argmax_state;
    double output_entropy = 0.0;      // S(E(rho)) at the argmax
    double entropy_exchange = 0.0;    // S_e(rho, E) at the argmax
    std::string note;
};

struct LindbladReport {
    Superoperator generator;
    // is exp(t L) a positive (chi >= -1e-6) map at t = 0.25, 0.5, 0.75?
    std::array<bool, 3> fractional_positive{};
    bool valid_generator = false; // all three checks passed
};

// F_e = sum_i |tr(U^† A_i rho)|^2
double entanglement_fidelity_kraus(const DensityMatrix& rho, const ComplexMatrix& target,
                                   const KrausSet& op);

// F_e = sum_mn chi_mn tr(U^† A~_m rho) tr(rho A~_n^† U)
double entanglement_fidelity_chi(const DensityMatrix& rho, const ComplexMatrix& target,
                                 const ChiMatrix& chi);

// min over pure states of <psi| U^† E(|psi><psi|) U |psi>; the reported value
// is an upper bound on the true minimum (it is attained by a concrete state).
FidelityReport min_fidelity(const ComplexMatrix& target, const KrausSet& op);

// min over density matrices of the entanglement fidelity F_e(rho, U, E).
FidelityReport min_entanglement_fidelity(const ComplexMatrix& target, const KrausSet& op);

// Von Neumann entropy (bits) of W_ij = tr(A_i rho A_j^†).
double entropy_exchange(const DensityMatrix& rho, const KrausSet& op);

// C(E) = max_rho S(E(rho)) - S_e(rho, E), floored at zero. The reported value
// is a lower bound on the true maximum.
CapacityReport channel_capacity(const KrausSet& op);

// Principal logarithm of the channel superoperator, with a positivity probe
// of the fractional powers exp(t log E).
LindbladReport lindblad_log(const Superoperator& op);
LindbladReport lindblad_log(const KrausSet& op);

} // namespace qpt
