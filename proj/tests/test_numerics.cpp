#include <doctest.h>

#include <cmath>

#include "qpt/numerics.hpp"
#include "test_support.hpp"

using namespace qpt;
using namespace qpt::testing;

TEST_SUITE("numerics") {

TEST_CASE("herm_eig: identity and Pauli spectra") {
    auto eig = herm_eig(ComplexMatrix::Identity(2, 2));
    CHECK(eig.eigenvalues(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eig.eigenvalues(1) == doctest::Approx(1.0).epsilon(1e-12));

    auto sx = herm_eig(pauli_x());
    CHECK(sx.eigenvalues(0) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(sx.eigenvalues(1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("herm_eig: reassembly and orthonormality on random Hermitian input") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = 2 + trial % 4;
        ComplexMatrix h = random_hermitian(dim, rng);
        auto eig = herm_eig(h);

        ComplexMatrix rebuilt = eig.eigenvectors *
                                eig.eigenvalues.cast<Complex>().asDiagonal() *
                                eig.eigenvectors.adjoint();
        CHECK(frobenius(ComplexMatrix(rebuilt - h)) < 1e-10 * (1.0 + frobenius(h)));
        CHECK(frobenius(ComplexMatrix(eig.eigenvectors.adjoint() * eig.eigenvectors -
                                      ComplexMatrix::Identity(dim, dim))) < 1e-10);

        // ascending order, eigenvalue sum equals the trace
        for (int i = 1; i < dim; ++i) CHECK(eig.eigenvalues(i) >= eig.eigenvalues(i - 1));
        CHECK(eig.eigenvalues.sum() == doctest::Approx(h.trace().real()).epsilon(1e-10));
    }
}

TEST_CASE("herm_eig: rejects non-square and non-Hermitian input") {
    CHECK_THROWS_AS(herm_eig(ComplexMatrix::Zero(2, 3)), Error);
    ComplexMatrix bad(2, 2);
    bad << 0.0, 1.0, 0.0, 0.0;
    CHECK_THROWS_AS(herm_eig(bad), Error);
    try {
        herm_eig(bad);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::not_hermitian);
    }
}

TEST_CASE("pseudo_inverse: invertible, zero, and projector cases") {
    ComplexMatrix m(2, 2);
    m << 1.0, 2.0, Complex(0.0, 1.0), -1.0;
    CHECK(frobenius(ComplexMatrix(pseudo_inverse(m) - m.inverse())) < 1e-12);

    ComplexMatrix zero = ComplexMatrix::Zero(3, 2);
    CHECK(frobenius(pseudo_inverse(zero)) == 0.0);

    ComplexMatrix proj = ComplexMatrix::Zero(2, 2);
    proj(0, 0) = 1.0;
    CHECK(frobenius(ComplexMatrix(pseudo_inverse(proj) - proj)) < 1e-12);
}

TEST_CASE("pseudo_inverse: Moore-Penrose identities across ranks") {
    Rng rng(23);
    for (int rows : {2, 3, 4}) {
        for (int cols : {2, 4}) {
            for (int rank = 1; rank <= std::min(rows, cols); ++rank) {
                ComplexMatrix m = gaussian_matrix(rows, rank, rng) * gaussian_matrix(rank, cols, rng);
                ComplexMatrix k = pseudo_inverse(m);
                const double scale = 1.0 + frobenius(m);
                CHECK(frobenius(ComplexMatrix(m * k * m - m)) < 1e-9 * scale);
                CHECK(frobenius(ComplexMatrix(k * m * k - k)) < 1e-9 * scale);
                CHECK(frobenius(ComplexMatrix((m * k).adjoint() - m * k)) < 1e-9);
                CHECK(frobenius(ComplexMatrix((k * m).adjoint() - k * m)) < 1e-9);
            }
        }
    }
}

TEST_CASE("matrix_log: diagonal cases and the exp round trip") {
    CHECK(frobenius(matrix_log(ComplexMatrix::Identity(3, 3))) < 1e-12);

    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = std::exp(1.0);
    d(1, 1) = std::exp(2.0);
    ComplexMatrix logd = matrix_log(d);
    CHECK(std::abs(logd(0, 0) - Complex(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(logd(1, 1) - Complex(2.0, 0.0)) < 1e-12);

    Rng rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        ComplexMatrix k = gaussian_matrix(3, 3, rng);
        k *= 0.4 / frobenius(k);
        ComplexMatrix recovered = matrix_log(matrix_exp(k));
        CHECK(frobenius(ComplexMatrix(recovered - k)) < 1e-8);
    }
}

TEST_CASE("matrix_log: singular, branch-cut, and defective rejections") {
    ComplexMatrix sing = ComplexMatrix::Zero(2, 2);
    sing(0, 0) = 1.0;
    CHECK_THROWS_AS(matrix_log(sing), Error);

    ComplexMatrix neg = ComplexMatrix::Identity(2, 2);
    neg(1, 1) = -1.0;
    try {
        matrix_log(neg);
        FAIL("expected BranchCutEigenvalue");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::branch_cut_eigenvalue);
    }

    // Jordan block: eigenvector route cannot reproduce it
    ComplexMatrix jordan(2, 2);
    jordan << 1.0, 1.0, 0.0, 1.0;
    try {
        matrix_log(jordan);
        FAIL("expected ConvergenceFailure");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::convergence_failure);
    }
}

TEST_CASE("polar_decompose_real: identity, scaling, rotation-deformation") {
    auto id = polar_decompose_real(Eigen::Matrix3d::Identity());
    CHECK((id.orthogonal - Eigen::Matrix3d::Identity()).norm() < 1e-12);
    CHECK((id.symmetric - Eigen::Matrix3d::Identity()).norm() < 1e-12);

    auto half = polar_decompose_real(0.5 * Eigen::Matrix3d::Identity());
    CHECK((half.orthogonal - Eigen::Matrix3d::Identity()).norm() < 1e-12);
    CHECK((half.symmetric - 0.5 * Eigen::Matrix3d::Identity()).norm() < 1e-12);

    const double theta = 0.7;
    Eigen::Matrix3d rz;
    rz << std::cos(theta), -std::sin(theta), 0, std::sin(theta), std::cos(theta), 0, 0, 0, 1;
    Eigen::Matrix3d s = Eigen::Vector3d(0.9, 0.5, 0.2).asDiagonal();
    auto f = polar_decompose_real(rz * s);
    CHECK((f.orthogonal - rz).norm() < 1e-10);
    CHECK((f.symmetric - s).norm() < 1e-10);
}

TEST_CASE("polar_decompose_real: reconstruction and det(O)=1, reflections included") {
    Rng rng(51);
    for (int trial = 0; trial < 40; ++trial) {
        Eigen::Matrix3d m;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) m(r, c) = rng.normal();
        auto f = polar_decompose_real(m);
        CHECK((m - f.orthogonal * f.symmetric).norm() <= 1e-9 * (1.0 + m.norm()));
        CHECK((f.symmetric - f.symmetric.transpose()).norm() < 1e-10);
        CHECK((f.orthogonal.transpose() * f.orthogonal - Eigen::Matrix3d::Identity()).norm() < 1e-10);
        CHECK(f.orthogonal.determinant() == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("von_neumann_entropy: pure, mixed, and a two-outcome oracle value") {
    ComplexMatrix pure = ComplexMatrix::Zero(2, 2);
    pure(0, 0) = 1.0;
    CHECK(von_neumann_entropy(pure) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(von_neumann_entropy(ComplexMatrix(0.5 * ComplexMatrix::Identity(2, 2))) ==
          doctest::Approx(1.0).epsilon(1e-12));

    // independent evaluation: -0.9 log2 0.9 - 0.1 log2 0.1
    const double expected = -0.9 * std::log2(0.9) - 0.1 * std::log2(0.1);
    ComplexMatrix mixed = ComplexMatrix::Zero(2, 2);
    mixed(0, 0) = 0.9;
    mixed(1, 1) = 0.1;
    CHECK(von_neumann_entropy(mixed) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(von_neumann_entropy(mixed) == doctest::Approx(0.4690).epsilon(1e-3));

    CHECK_THROWS_AS(von_neumann_entropy(ComplexMatrix(2.0 * ComplexMatrix::Identity(2, 2))), Error);
}

} // TEST_SUITE
