// smallmat.hpp — complex Hermitian kernels: closed-form 2x2 operations in
// Pauli form, and a dense d x d Hermitian eigendecomposition/exponential
// backend for brute-force cross-checks.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstddef>

#include "fidelim/errors.hpp"

namespace fidelim {

using Complex = std::complex<double>;
using Vec2 = Eigen::Vector2cd;
using Mat2 = Eigen::Matrix2cd;

inline constexpr std::size_t kDenseDimMax = 4096;

// ----------------------------- 2x2 Hermitian ---------------------------------

// h = a0*I + b.sigma. Eigenvalues are a0 -/+ |b|; the representation keeps the
// matrix Hermitian by construction and the exponential branch-free.
struct Hermitian2 {
    double a0{0.0};
    std::array<double, 3> b{0.0, 0.0, 0.0};

    Hermitian2() = default;
    Hermitian2(double a0_, double bx, double by, double bz);

    double b_norm() const;

    // Degenerate when |b| < 1e-14 * (|a0| + 1).
    bool degenerate() const;

    Mat2 to_matrix() const;
};

struct Eig2 {
    double e_minus{0.0};
    double e_plus{0.0};
    Vec2 v_minus;
    Vec2 v_plus;
    bool degenerate{false};
};

// Phase-fix a vector so its largest-magnitude component is real and
// non-negative; ties broken by lowest index. Overlap magnitudes are
// gauge-invariant, the fixed gauge only makes traces reproducible.
void gauge_fix(Eigen::Ref<Eigen::VectorXcd> v);
Vec2 gauge_fixed(const Vec2& v);

// Closed-form spectral decomposition of a0*I + b.sigma. When |b| is below the
// degeneracy threshold, returns v_minus=(1,0), v_plus=(0,1) with the flag set.
Eig2 eig2(const Hermitian2& h);

// exp(-i*h*tau) = e^{-i a0 tau} (cos(|b|tau) I - i sin(|b|tau) bhat.sigma).
// Exactly unitary up to rounding.
Mat2 expu2(const Hermitian2& h, double tau);

// ----------------------------- dense Hermitian -------------------------------

class DenseHermitian {
public:
    // Validates dim <= 4096, finite entries, and ||H - H^dag||_max <= 1e-12 * ||H||_max.
    explicit DenseHermitian(Eigen::MatrixXcd entries);

    std::size_t dim() const { return static_cast<std::size_t>(mat_.rows()); }
    const Eigen::MatrixXcd& matrix() const { return mat_; }

private:
    Eigen::MatrixXcd mat_;
};

struct EigDense {
    Eigen::VectorXd values;    // ascending
    Eigen::MatrixXcd vectors;  // orthonormal columns, gauge-fixed
};

// Dense Hermitian eigendecomposition; throws NonConvergenceError if the
// underlying iterative solver fails.
EigDense eig_dense(const DenseHermitian& h);

// exp(-i*H*tau) through eig_dense.
Eigen::MatrixXcd expu_dense(const DenseHermitian& h, double tau);

}  // namespace fidelim
