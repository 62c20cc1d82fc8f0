#include <doctest.h>

#include <cmath>

#include "qpt/bloch.hpp"
#include "test_support.hpp"

using namespace qpt;
using namespace qpt::testing;

TEST_SUITE("bloch") {

TEST_CASE("bloch_vector: poles, center, equator") {
    CHECK((bloch_vector(DensityMatrix::pure(ket(2, 0))) - Eigen::Vector3d(0, 0, 1)).norm() < 1e-12);
    CHECK(bloch_vector(DensityMatrix::maximally_mixed(2)).norm() < 1e-12);
    DensityMatrix plus = DensityMatrix::pure(ComplexVector((ket(2, 0) + ket(2, 1)) / std::sqrt(2.0)));
    CHECK((bloch_vector(plus) - Eigen::Vector3d(1, 0, 0)).norm() < 1e-12);
}

TEST_CASE("affine_from_channel: identity, depolarizing, amplitude damping") {
    AffineMap ident = affine_from_channel(identity_channel(2));
    CHECK((ident.m - Eigen::Matrix3d::Identity()).norm() < 1e-12);
    CHECK(ident.c.norm() < 1e-12);

    const double p = 0.35;
    AffineMap dep = affine_from_channel(depolarizing(p));
    CHECK((dep.m - (1.0 - p) * Eigen::Matrix3d::Identity()).norm() < 1e-12);
    CHECK(dep.c.norm() < 1e-12);

    // evaluated on the axis states by hand: contraction sqrt(1-g) in x/y,
    // 1-g in z, displacement g towards the pole
    const double g = 0.19;
    AffineMap ad = affine_from_channel(amplitude_damping(g));
    Eigen::Matrix3d expected = Eigen::Vector3d(std::sqrt(1.0 - g), std::sqrt(1.0 - g), 1.0 - g).asDiagonal();
    CHECK((ad.m - expected).norm() < 1e-10);
    CHECK((ad.c - Eigen::Vector3d(0, 0, g)).norm() < 1e-10);

    CHECK_THROWS_AS(affine_from_channel(identity_channel(4)), Error);
}

TEST_CASE("affine_from_coefficients: trivial set, rotations, cross-formula agreement") {
    AffineMap ident = affine_from_coefficients(identity_channel(2));
    CHECK((ident.m - Eigen::Matrix3d::Identity()).norm() < 1e-12);
    CHECK(ident.c.norm() < 1e-12);

    // exp(-i theta sigma_z / 2) rotates the equator by theta
    const double theta = 1.1;
    ComplexMatrix u(2, 2);
    u << std::exp(Complex(0.0, -theta / 2.0)), 0.0, 0.0, std::exp(Complex(0.0, theta / 2.0));
    AffineMap rot = affine_from_coefficients(KrausSet({u}));
    Eigen::Matrix3d expected;
    expected << std::cos(theta), -std::sin(theta), 0, std::sin(theta), std::cos(theta), 0, 0, 0, 1;
    CHECK((rot.m - expected).norm() < 1e-10);
    CHECK(rot.c.norm() < 1e-12);
    CHECK((rot.m - affine_from_channel(KrausSet({u})).m).norm() < 1e-10);

    AffineMap ad1 = affine_from_coefficients(amplitude_damping(0.19));
    AffineMap ad2 = affine_from_channel(amplitude_damping(0.19));
    CHECK((ad1.m - ad2.m).norm() < 1e-12);
    CHECK((ad1.c - ad2.c).norm() < 1e-12);
}

TEST_CASE("formula equivalence on 200 random trace-preserving channels") {
    Rng rng(2024);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        KrausSet k = random_tp_channel(2, 1 + trial % 4, rng);
        AffineMap a = affine_from_channel(k);
        AffineMap b = affine_from_coefficients(k);
        worst = std::max(worst, (a.m - b.m).norm() + (a.c - b.c).norm());
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("unitality: c vanishes iff the channel is unital") {
    AffineMap dep = affine_from_channel(depolarizing(0.5));
    CHECK(dep.c.norm() < 1e-10);
    AffineMap ad = affine_from_channel(amplitude_damping(0.3));
    CHECK(ad.c.norm() > 0.29);

    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        KrausSet k = random_tp_channel(2, 2, rng);
        AffineMap map = affine_from_channel(k);
        const double center_motion =
            bloch_vector(apply(k, DensityMatrix::maximally_mixed(2)).state).norm();
        CHECK(std::abs(map.c.norm() - center_motion) < 1e-10);
    }
}

TEST_CASE("composition: affine map of E2 after E1 is (M2 M1, M2 c1 + c2)") {
    Rng rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        KrausSet e1 = random_tp_channel(2, 1 + trial % 3, rng);
        KrausSet e2 = random_tp_channel(2, 1 + (trial + 1) % 3, rng);
        AffineMap m1 = affine_from_channel(e1);
        AffineMap m2 = affine_from_channel(e2);
        AffineMap both = affine_from_channel(compose(e2, e1));
        CHECK((both.m - m2.m * m1.m).norm() < 1e-10);
        CHECK((both.c - (m2.m * m1.c + m2.c)).norm() < 1e-10);
    }
}

TEST_CASE("contractivity and ball preservation") {
    Rng rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        AffineMap map = affine_from_channel(random_tp_channel(2, 1 + trial % 4, rng));
        Eigen::JacobiSVD<Eigen::Matrix3d> svd(map.m);
        CHECK(svd.singularValues()(0) <= 1.0 + 1e-9);
        CHECK(maps_ball_into_itself(map));
    }
}

TEST_CASE("polar_factors: identity, depolarizing, composed rotation") {
    PolarFactors ident = polar_factors(affine_from_channel(identity_channel(2)));
    CHECK((ident.rotation - Eigen::Matrix3d::Identity()).norm() < 1e-10);
    CHECK((ident.deformation - Eigen::Matrix3d::Identity()).norm() < 1e-10);

    const double p = 0.3;
    PolarFactors dep = polar_factors(affine_from_channel(depolarizing(p)));
    CHECK((dep.rotation - Eigen::Matrix3d::Identity()).norm() < 1e-10);
    CHECK((dep.deformation - (1.0 - p) * Eigen::Matrix3d::Identity()).norm() < 1e-10);

    // z-rotation composed with amplitude damping recovers both factors
    const double theta = 0.8, g = 0.36;
    ComplexMatrix u(2, 2);
    u << std::exp(Complex(0.0, -theta / 2.0)), 0.0, 0.0, std::exp(Complex(0.0, theta / 2.0));
    AffineMap map = affine_from_channel(compose(KrausSet({u}), amplitude_damping(g)));
    PolarFactors f = polar_factors(map);
    Eigen::Matrix3d rz;
    rz << std::cos(theta), -std::sin(theta), 0, std::sin(theta), std::cos(theta), 0, 0, 0, 1;
    CHECK((f.rotation - rz).norm() < 1e-9);
    CHECK((f.deformation -
           Eigen::Matrix3d(Eigen::Vector3d(std::sqrt(1.0 - g), std::sqrt(1.0 - g), 1.0 - g).asDiagonal()))
              .norm() < 1e-9);
    CHECK((f.rotation * f.deformation - map.m).norm() < 1e-9);
}

TEST_CASE("decoherence_summary: identity, depolarizing, amplitude damping") {
    DecoherenceSummary ident = decoherence_summary(affine_from_channel(identity_channel(2)));
    CHECK(ident.displacement < 1e-12);
    CHECK((ident.singular_values - Eigen::Vector3d(1, 1, 1)).norm() < 1e-10);

    DecoherenceSummary dep = decoherence_summary(affine_from_channel(depolarizing(0.4)));
    CHECK((dep.singular_values - Eigen::Vector3d(0.6, 0.6, 0.6)).norm() < 1e-10);

    DecoherenceSummary ad = decoherence_summary(affine_from_channel(amplitude_damping(0.19)));
    CHECK(ad.displacement == doctest::Approx(0.19).epsilon(1e-10));
    CHECK((ad.singular_values - Eigen::Vector3d(0.9, 0.9, 0.81)).norm() < 1e-10);
    CHECK(ad.determinant == doctest::Approx(0.9 * 0.9 * 0.81).epsilon(1e-10));
}

} // TEST_SUITE
