#include "qpt/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qpt/numerics.hpp"
#include "qpt/rng.hpp"

namespace qpt {

SearchResult nelder_mead(const Objective& f, const RealVector& start, double step, int max_iters) {
    const int n = static_cast<int>(start.size());

    std::vector<RealVector> simplex;
    std::vector<double> values;
    simplex.reserve(static_cast<std::size_t>(n) + 1);
    simplex.push_back(start);
    values.push_back(f(start));
    for (int i = 0; i < n; ++i) {
        RealVector v = start;
        v(i) += step;
        simplex.push_back(v);
        values.push_back(f(v));
    }

    auto order = [&] {
        std::vector<int> idx(simplex.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return values[static_cast<std::size_t>(a)] < values[static_cast<std::size_t>(b)]; });
        std::vector<RealVector> s2;
        std::vector<double> v2;
        for (int i : idx) {
            s2.push_back(simplex[static_cast<std::size_t>(i)]);
            v2.push_back(values[static_cast<std::size_t>(i)]);
        }
        simplex = std::move(s2);
        values = std::move(v2);
    };

    for (int iter = 0; iter < max_iters; ++iter) {
        order();
        if ((simplex.back() - simplex.front()).norm() < 1e-12) break;

        RealVector centroid = RealVector::Zero(n);
        for (std::size_t i = 0; i + 1 < simplex.size(); ++i) centroid += simplex[i];
        centroid /= static_cast<double>(n);

        const RealVector& worst = simplex.back();
        RealVector reflected = centroid + (centroid - worst);
        const double fr = f(reflected);

        if (fr < values.front()) {
            RealVector expanded = centroid + 2.0 * (centroid - worst);
            const double fe = f(expanded);
            if (fe < fr) {
                simplex.back() = expanded;
                values.back() = fe;
            } else {
                simplex.back() = reflected;
                values.back() = fr;
            }
        } else if (fr < values[values.size() - 2]) {
            simplex.back() = reflected;
            values.back() = fr;
        } else {
            RealVector contracted = centroid + 0.5 * (worst - centroid);
            const double fc = f(contracted);
            if (fc < values.back()) {
                simplex.back() = contracted;
                values.back() = fc;
            } else {
                for (std::size_t i = 1; i < simplex.size(); ++i) {
                    simplex[i] = simplex.front() + 0.5 * (simplex[i] - simplex.front());
                    values[i] = f(simplex[i]);
                }
            }
        }
    }
    order();
    return {values.front(), simplex.front()};
}

SearchResult grid_then_refine(const Objective& f, const std::vector<RealVector>& grid, int restarts,
                              int nm_iters) {
    if (grid.empty()) throw Error(ErrorKind::convergence_failure, "empty search grid");

    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) scored.emplace_back(f(grid[i]), i);
    std::sort(scored.begin(), scored.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    SearchResult best{scored.front().first, grid[scored.front().second]};
    const int starts = std::min<int>(restarts, static_cast<int>(scored.size()));
    for (int s = 0; s < starts; ++s) {
        SearchResult refined = nelder_mead(f, grid[scored[static_cast<std::size_t>(s)].second], 0.1, nm_iters);
        if (refined.value < best.value) best = refined;
    }
    return best;
}

std::vector<RealVector> sphere_grid_1q(int n) {
    std::vector<RealVector> grid;
    grid.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            RealVector p(2);
            p(0) = (i + 0.5) * (0.5 * M_PI) / n; // amplitude angle, [0, pi/2]
            p(1) = (j + 0.5) * (2.0 * M_PI) / n; // relative phase
            grid.push_back(p);
        }
    }
    return grid;
}

std::vector<RealVector> halton_grid(int count, const RealVector& lo, const RealVector& hi) {
    const int d = static_cast<int>(lo.size());
    std::vector<RealVector> grid;
    grid.reserve(static_cast<std::size_t>(count) + 1);
    grid.push_back(RealVector(0.5 * (lo + hi))); // box midpoint
    for (int i = 0; i < count; ++i) {
        RealVector p(d);
        for (int k = 0; k < d; ++k)
            p(k) = lo(k) + (hi(k) - lo(k)) * halton(static_cast<std::uint64_t>(i), k);
        grid.push_back(p);
    }
    return grid;
}

ComplexVector pure_state_from_angles(const RealVector& params, int dim) {
    if (params.size() != pure_state_param_count(dim))
        throw Error(ErrorKind::dimension_mismatch, "wrong pure-state parameter count");

    ComplexVector psi(dim);
    double tail = 1.0; // product of sines so far
    for (int k = 0; k < dim - 1; ++k) {
        const double theta = params(k);
        psi(k) = tail * std::cos(theta);
        tail *= std::sin(theta);
    }
    psi(dim - 1) = tail;
    for (int k = 1; k < dim; ++k) {
        const double phase = params(dim - 2 + k);
        psi(k) *= Complex(std::cos(phase), std::sin(phase));
    }
    return psi;
}

ComplexMatrix density_from_params(const RealVector& params, int dim) {
    if (params.size() != density_param_count(dim))
        throw Error(ErrorKind::dimension_mismatch, "wrong density parameter count");

    // Hermitian generator from the first dim^2 coordinates
    ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
    int idx = 0;
    for (int r = 0; r < dim; ++r) h(r, r) = params(idx++);
    for (int r = 0; r < dim; ++r)
        for (int c = r + 1; c < dim; ++c) {
            h(r, c) = Complex(params(idx), params(idx + 1));
            h(c, r) = std::conj(h(r, c));
            idx += 2;
        }

    HermitianEigenDecomposition eig = herm_eig(h);
    ComplexVector phases(dim);
    for (int k = 0; k < dim; ++k)
        phases(k) = Complex(std::cos(eig.eigenvalues(k)), std::sin(eig.eigenvalues(k)));
    ComplexMatrix v = eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();

    // softmax weights from the last dim coordinates
    RealVector w = params.tail(dim);
    const double shift = w.maxCoeff();
    RealVector e = (w.array() - shift).exp();
    e /= e.sum();

    return v * e.cast<Complex>().asDiagonal() * v.adjoint();
}

} // namespace qpt
