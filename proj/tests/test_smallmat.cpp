#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "fidelim/rng.hpp"
#include "fidelim/smallmat.hpp"
#include "oracles.hpp"

using namespace fidelim;

namespace {

Hermitian2 random_h2(rng::Gaussian& g) {
    return Hermitian2(g(), g(), g(), g());
}

double residual(const Hermitian2& h, double e, const Vec2& v) {
    return (h.to_matrix() * v - e * v).norm();
}

}  // namespace

TEST_CASE("eig2 symmetric two-level system") {
    const Hermitian2 h(0.0, -0.8, 0.0, 0.0);
    const Eig2 e = eig2(h);
    CHECK(e.e_minus == doctest::Approx(-0.8).epsilon(1e-14));
    CHECK(e.e_plus == doctest::Approx(0.8).epsilon(1e-14));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(e.v_minus[0] - Complex(inv_sqrt2, 0.0)) < 1e-14);
    CHECK(std::abs(e.v_minus[1] - Complex(inv_sqrt2, 0.0)) < 1e-14);
    CHECK_FALSE(e.degenerate);
}

TEST_CASE("eig2 diagonal case") {
    const Eig2 e = eig2(Hermitian2(0.0, 0.0, 0.0, 1.0));
    CHECK(e.e_minus == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(std::abs(e.v_minus[0]) < 1e-15);
    CHECK(std::abs(e.v_minus[1] - Complex(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(e.v_plus[0] - Complex(1.0, 0.0)) < 1e-15);
}

TEST_CASE("eig2 against dense 2x2 eigensolver") {
    const Hermitian2 h(0.3, -0.8, 0.0, 0.4);
    const Eig2 e = eig2(h);
    CHECK(e.e_minus == doctest::Approx(0.3 - std::sqrt(0.8)).epsilon(1e-14));

    const oracle::Eig2x2 ref = oracle::eig_2x2(h.to_matrix());
    CHECK(e.e_minus == doctest::Approx(ref.e0).epsilon(1e-13));
    CHECK(e.e_plus == doctest::Approx(ref.e1).epsilon(1e-13));
    // same ray: |<v_ref|v>| = 1
    CHECK(std::abs(ref.v0.dot(e.v_minus)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(ref.v1.dot(e.v_plus)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eig2 degenerate flag") {
    const Eig2 e = eig2(Hermitian2(0.7, 0.0, 0.0, 0.0));
    CHECK(e.degenerate);
    CHECK(std::abs(e.v_minus[0] - Complex(1.0, 0.0)) == 0.0);
    CHECK(std::abs(e.v_plus[1] - Complex(1.0, 0.0)) == 0.0);
}

TEST_CASE("eig2 residual and orthonormality on seeded samples") {
    rng::Gaussian g(20240101);
    for (int t = 0; t < 10000; ++t) {
        const Hermitian2 h = random_h2(g);
        const Eig2 e = eig2(h);
        if (e.degenerate) continue;
        const double scale = std::abs(h.a0) + h.b_norm();
        CHECK(residual(h, e.e_minus, e.v_minus) <= 1e-13 * scale);
        CHECK(residual(h, e.e_plus, e.v_plus) <= 1e-13 * scale);
        CHECK(std::abs(e.v_minus.norm() - 1.0) <= 1e-13);
        CHECK(std::abs(e.v_plus.norm() - 1.0) <= 1e-13);
        CHECK(std::abs(e.v_minus.dot(e.v_plus)) <= 1e-13);
    }
}

TEST_CASE("eig2 is bitwise deterministic") {
    rng::Gaussian g(7);
    for (int t = 0; t < 100; ++t) {
        const Hermitian2 h = random_h2(g);
        const Eig2 a = eig2(h);
        const Eig2 b = eig2(h);
        CHECK(std::memcmp(&a.e_minus, &b.e_minus, sizeof(double)) == 0);
        CHECK(std::memcmp(a.v_minus.data(), b.v_minus.data(), 2 * sizeof(Complex)) == 0);
        CHECK(std::memcmp(a.v_plus.data(), b.v_plus.data(), 2 * sizeof(Complex)) == 0);
    }
}

TEST_CASE("gauge fixing: largest component real non-negative, ties to lowest index") {
    Eigen::VectorXcd v(2);
    v << Complex(0.0, 0.5), Complex(0.0, -0.5);
    gauge_fix(v);  // tie in magnitude: index 0 becomes real non-negative
    CHECK(v[0].real() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(v[0].imag() == 0.0);
}

TEST_CASE("expu2 trivial cases") {
    const Mat2 id = expu2(Hermitian2(0.0, 0.0, 0.0, 0.0), 1.37);
    CHECK((id - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-15);

    // exp(-i pi sigma_z) = -I
    const Mat2 mI = expu2(Hermitian2(0.0, 0.0, 0.0, 1.0), std::numbers::pi);
    CHECK((mI + Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("expu2 half-rotation about x") {
    // exp(-i h) with h = -0.8 sigma_x equals cos(0.8) I + i sin(0.8) sigma_x
    const Mat2 u = expu2(Hermitian2(0.0, -0.8, 0.0, 0.0), 1.0);
    CHECK(u(0, 0).real() == doctest::Approx(std::cos(0.8)).epsilon(1e-15));
    CHECK(u(0, 1).imag() == doctest::Approx(std::sin(0.8)).epsilon(1e-15));
    const Eigen::Matrix2cd ref = oracle::expm_unitary(
        Hermitian2(0.0, -0.8, 0.0, 0.0).to_matrix(), 1.0);
    CHECK((u - ref).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("expu2 unitary and matching dense exponential on seeded samples") {
    rng::Gaussian g(20240102);
    for (int t = 0; t < 10000; ++t) {
        const Hermitian2 h = random_h2(g);
        const double tau = g();
        const Mat2 u = expu2(h, tau);
        CHECK((u.adjoint() * u - Mat2::Identity()).cwiseAbs().maxCoeff() <= 1e-13);
        const Eigen::MatrixXcd ref = expu_dense(DenseHermitian(h.to_matrix()), tau);
        CHECK((u - ref).cwiseAbs().maxCoeff() <= 1e-11);
    }
}

TEST_CASE("DenseHermitian validation") {
    Eigen::MatrixXcd m(2, 2);
    m << Complex(1.0, 0.0), Complex(0.0, 1.0), Complex(0.0, 1.0), Complex(2.0, 0.0);
    CHECK_THROWS_AS(DenseHermitian{m}, DomainError);  // anti-Hermitian off-diagonal

    Eigen::MatrixXcd rect(2, 3);
    rect.setZero();
    CHECK_THROWS_AS(DenseHermitian{rect}, DimensionError);
}

TEST_CASE("eig_dense identity and diagonal") {
    const EigDense id = eig_dense(DenseHermitian(Eigen::MatrixXcd::Identity(3, 3)));
    for (int i = 0; i < 3; ++i) CHECK(id.values[i] == doctest::Approx(1.0).epsilon(1e-14));

    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(3, 3);
    d(0, 0) = 2.0;
    d(1, 1) = -1.0;
    d(2, 2) = 0.0;
    const EigDense e = eig_dense(DenseHermitian(d));
    CHECK(e.values[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(e.values[1] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(e.values[2] == doctest::Approx(2.0).epsilon(1e-14));
    // permuted basis vectors, gauge-fixed to +1 entries
    CHECK(std::abs(e.vectors(1, 0) - Complex(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(e.vectors(2, 1) - Complex(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(e.vectors(0, 2) - Complex(1.0, 0.0)) < 1e-12);
}

TEST_CASE("eig_dense Kronecker sum spectrum equals pairwise sums") {
    rng::Gaussian g(31337);
    const Hermitian2 ha = random_h2(g);
    const Hermitian2 hb = random_h2(g);
    const Mat2 A = ha.to_matrix();
    const Mat2 B = hb.to_matrix();

    Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(4, 4);
    K.block<2, 2>(0, 0) = A + B(0, 0) * Mat2::Identity();
    K.block<2, 2>(2, 2) = A + B(1, 1) * Mat2::Identity();
    K.block<2, 2>(0, 2) = B(0, 1) * Mat2::Identity();
    K.block<2, 2>(2, 0) = B(1, 0) * Mat2::Identity();

    const EigDense e = eig_dense(DenseHermitian(K));
    const Eig2 ea = eig2(ha);
    const Eig2 eb = eig2(hb);
    const std::vector<double> expected = oracle::pairwise_sums(
        {ea.e_minus, ea.e_plus}, {eb.e_minus, eb.e_plus});
    for (int i = 0; i < 4; ++i) {
        CHECK(e.values[i] == doctest::Approx(expected[i]).epsilon(1e-12));
    }
}

TEST_CASE("eig_dense residual and Gram identity on seeded samples") {
    rng::Gaussian g(20240103);
    for (int t = 0; t < 50; ++t) {
        const int dim = 2 + static_cast<int>(rng::mix(t) % 15);
        const DenseHermitian H(rng::random_hermitian(g, dim));
        const EigDense e = eig_dense(H);
        const double norm2 = H.matrix().operatorNorm();
        for (int c = 0; c < dim; ++c) {
            const double res =
                (H.matrix() * e.vectors.col(c) - e.values[c] * e.vectors.col(c)).norm();
            CHECK(res <= 1e-10 * std::max(norm2, 1e-30));
        }
        const Eigen::MatrixXcd gram = e.vectors.adjoint() * e.vectors;
        CHECK((gram - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("expu_dense trivial and diagonal") {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(3, 3);
    d(0, 0) = 1.0;
    d(1, 1) = 2.0;
    d(2, 2) = -0.5;

    const Eigen::MatrixXcd at_zero = expu_dense(DenseHermitian(d), 0.0);
    CHECK((at_zero - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);

    const double tau = 0.9;
    const Eigen::MatrixXcd u = expu_dense(DenseHermitian(d), tau);
    for (int i = 0; i < 3; ++i) {
        const Complex expected = std::exp(Complex(0.0, -d(i, i).real() * tau));
        CHECK(std::abs(u(i, i) - expected) < 1e-13);
    }
    CHECK((u.adjoint() * u - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-10);
}
