#include "qpt/bloch.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <array>
#include <cmath>

namespace qpt {

namespace {

std::array<ComplexMatrix, 3> sigma() { return {pauli_x(), pauli_y(), pauli_z()}; }

void require_qubit_tp(const KrausSet& op) {
    if (op.dim() != 2) throw Error(ErrorKind::wrong_dimension, "Bloch picture requires one qubit");
    if (!op.trace_preserving())
        throw Error(ErrorKind::not_trace_preserving, "affine map requires a trace-preserving channel");
}

// Levi-Civita with epsilon_123 = +1 (0-based indices)
double levi_civita(int j, int k, int p) {
    if (j == k || k == p || j == p) return 0.0;
    if ((j + 1) % 3 == k) return 1.0; // cyclic
    return -1.0;
}

} // namespace

Eigen::Vector3d bloch_vector(const DensityMatrix& rho) {
    if (rho.dim() != 2) throw Error(ErrorKind::wrong_dimension, "Bloch vector requires one qubit");
    Eigen::Vector3d v;
    const auto s = sigma();
    for (int k = 0; k < 3; ++k) v(k) = (rho.matrix() * s[k]).trace().real();
    return v;
}

AffineMap affine_from_channel(const KrausSet& op) {
    require_qubit_tp(op);

    AffineMap map;
    map.c = bloch_vector(apply(op, DensityMatrix::maximally_mixed(2)).state);
    const auto s = sigma();
    for (int k = 0; k < 3; ++k) {
        // (I + sigma_k)/2 is the pure state with Bloch vector e_k
        DensityMatrix axis((ComplexMatrix::Identity(2, 2) + s[k]) * 0.5);
        map.m.col(k) = bloch_vector(apply(op, axis).state) - map.c;
    }
    return map;
}

AffineMap affine_from_coefficients(const KrausSet& op) {
    require_qubit_tp(op);
    const auto s = sigma();

    // A_i = alpha_i I + sum_k a_ik sigma_k; coefficients via the
    // Hilbert-Schmidt orthogonality of {I, sigma_k}
    std::vector<Complex> alpha;
    std::vector<std::array<Complex, 3>> a;
    for (const ComplexMatrix& op_i : op.operators()) {
        alpha.push_back(op_i.trace() / 2.0);
        std::array<Complex, 3> row;
        for (int k = 0; k < 3; ++k) row[static_cast<std::size_t>(k)] = (op_i * s[k]).trace() / 2.0;
        a.push_back(row);
    }

    AffineMap map;
    const Complex i(0.0, 1.0);
    for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) {
            Complex sum = 0.0;
            for (std::size_t l = 0; l < a.size(); ++l) {
                sum += a[l][j] * std::conj(a[l][k]) + std::conj(a[l][j]) * a[l][k];
                if (j == k) {
                    Complex norm = std::norm(alpha[l]);
                    for (int p = 0; p < 3; ++p) norm -= a[l][p] * std::conj(a[l][p]);
                    sum += norm;
                }
                for (int p = 0; p < 3; ++p)
                    sum += i * levi_civita(j, k, p) *
                           (alpha[l] * std::conj(a[l][p]) - std::conj(alpha[l]) * a[l][p]);
            }
            map.m(j, k) = sum.real();
        }
    }
    for (int k = 0; k < 3; ++k) {
        Complex sum = 0.0;
        for (std::size_t l = 0; l < a.size(); ++l)
            for (int j = 0; j < 3; ++j)
                for (int p = 0; p < 3; ++p)
                    sum += levi_civita(j, p, k) * a[l][j] * std::conj(a[l][p]);
        map.c(k) = (2.0 * i * sum).real();
    }
    return map;
}

PolarFactors polar_factors(const AffineMap& map) {
    RealPolarFactors f = polar_decompose_real(map.m);
    return {f.orthogonal, f.symmetric};
}

DecoherenceSummary decoherence_summary(const AffineMap& map) {
    DecoherenceSummary out;
    out.displacement = map.c.norm();
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(map.m);
    out.singular_values = svd.singularValues();
    out.determinant = map.m.determinant();

    PolarFactors f = polar_factors(map);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(f.deformation);
    out.deformation_eigenvalues = eig.eigenvalues();
    out.deformation_axes = eig.eigenvectors();
    return out;
}

bool maps_ball_into_itself(const AffineMap& map, double tol) {
    // deterministic golden-angle sphere grid plus the six axis points
    constexpr int kProbes = 64;
    const double golden = 2.399963229728653;
    for (int i = 0; i < kProbes; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / kProbes;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * i;
        Eigen::Vector3d u(r * std::cos(phi), r * std::sin(phi), z);
        if ((map.m * u + map.c).norm() > 1.0 + tol) return false;
    }
    for (int k = 0; k < 3; ++k)
        for (double sign : {1.0, -1.0}) {
            Eigen::Vector3d u = Eigen::Vector3d::Zero();
            u(k) = sign;
            if ((map.m * u + map.c).norm() > 1.0 + tol) return false;
        }
    return true;
}

} // namespace qpt
