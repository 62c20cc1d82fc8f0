// bloch.hpp — single-qubit geometric picture: the affine Bloch-ball map
// lambda -> M lambda + c of a channel, its polar factors M = O S, and the
// derived deformation summary.
#pragma once

#include "qpt/channel.hpp"
#include "qpt/numerics.hpp"

namespace qpt {

struct AffineMap {
    Eigen::Matrix3d m;
    Eigen::Vector3d c;
};

struct PolarFactors {
    Eigen::Matrix3d rotation;   // O, det +1
    Eigen::Matrix3d deformation; // S, symmetric
};

struct DecoherenceSummary {
    double displacement;             // |c|
    Eigen::Vector3d singular_values; // of M, descending
    double determinant;              // det M
    Eigen::Vector3d deformation_eigenvalues; // of S, ascending
    Eigen::Matrix3d deformation_axes;        // eigenvectors of S, columns
};

// lambda_k = tr(rho sigma_k)
Eigen::Vector3d bloch_vector(const DensityMatrix& rho);

// M and c extracted from the channel action on the axis states (I+sigma_k)/2
// and on I/2; exact for genuine channels.
AffineMap affine_from_channel(const KrausSet& op);

// M and c from the closed-form sums over the Kraus expansion coefficients
// A_i = alpha_i I + sum_k a_ik sigma_k. Agrees with affine_from_channel.
AffineMap affine_from_coefficients(const KrausSet& op);

PolarFactors polar_factors(const AffineMap& map);

DecoherenceSummary decoherence_summary(const AffineMap& map);

// true when |M u + c| <= 1 + tol on a deterministic probe grid of unit vectors
bool maps_ball_into_itself(const AffineMap& map, double tol = 1e-9);

} // namespace qpt
