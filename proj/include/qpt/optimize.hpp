// optimize.hpp — deterministic derivative-free search used by the fidelity
// and capacity metrics: a coarse grid (regular for one qubit, Halton
// otherwise) followed by Nelder–Mead refinement from the best grid points.
#pragma once

#include <functional>
#include <vector>

#include "qpt/linalg.hpp"

namespace qpt {

using Objective = std::function<double(const RealVector&)>;

struct SearchResult {
    double value = 0.0;
    RealVector params;
};

// Nelder–Mead simplex minimization; bounded only by the iteration budget.
SearchResult nelder_mead(const Objective& f, const RealVector& start, double step, int max_iters);

// Minimizes f over the box [lo, hi]^d: evaluates the supplied grid points,
// then refines with Nelder–Mead from the `restarts` best, 500 iterations each.
SearchResult grid_then_refine(const Objective& f, const std::vector<RealVector>& grid,
                              int restarts = 5, int nm_iters = 500);

// Regular theta/phi product grid for a single qubit (per-axis resolution n).
std::vector<RealVector> sphere_grid_1q(int n);

// Halton points scaled into [lo, hi]^d, origin-centered box midpoint included.
std::vector<RealVector> halton_grid(int count, const RealVector& lo, const RealVector& hi);

// Pure state from 2N-2 hyperspherical parameters: N-1 amplitude angles in
// [0, pi/2] and N-1 relative phases.
ComplexVector pure_state_from_angles(const RealVector& params, int dim);

// Density matrix from N^2 + N parameters: a Hermitian generator H (N^2 real
// coordinates) giving the eigenbasis V = exp(iH), plus N softmax weights.
ComplexMatrix density_from_params(const RealVector& params, int dim);

inline int pure_state_param_count(int dim) { return 2 * dim - 2; }
inline int density_param_count(int dim) { return dim * dim + dim; }

} // namespace qpt
