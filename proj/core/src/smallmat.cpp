#include "fidelim/smallmat.hpp"

#include <cmath>

namespace fidelim {

namespace {

bool all_finite(const Eigen::MatrixXcd& m) {
    return m.allFinite();
}

// Adding +0.0 collapses -0.0 to +0.0, keeping Pauli vectors bitwise
// reproducible across k when a hopping amplitude vanishes.
double clean_zero(double x) { return x + 0.0; }

}  // namespace

// ----------------------------- 2x2 Hermitian ---------------------------------

Hermitian2::Hermitian2(double a0_, double bx, double by, double bz)
    : a0(clean_zero(a0_)), b{clean_zero(bx), clean_zero(by), clean_zero(bz)} {
    if (!std::isfinite(a0) || !std::isfinite(b[0]) || !std::isfinite(b[1]) ||
        !std::isfinite(b[2])) {
        throw DomainError("Hermitian2: non-finite coefficient");
    }
}

double Hermitian2::b_norm() const {
    return std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
}

bool Hermitian2::degenerate() const {
    return b_norm() < 1e-14 * (std::abs(a0) + 1.0);
}

Mat2 Hermitian2::to_matrix() const {
    Mat2 m;
    m(0, 0) = Complex(a0 + b[2], 0.0);
    m(0, 1) = Complex(b[0], -b[1]);
    m(1, 0) = Complex(b[0], b[1]);
    m(1, 1) = Complex(a0 - b[2], 0.0);
    return m;
}

void gauge_fix(Eigen::Ref<Eigen::VectorXcd> v) {
    Eigen::Index best = 0;
    double best_mag = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v[i]);
        if (mag > best_mag) {  // strict: ties keep the lowest index
            best_mag = mag;
            best = i;
        }
    }
    if (best_mag <= 0.0) return;
    const Complex phase = std::conj(v[best]) / best_mag;
    v *= phase;
    v[best] = Complex(std::abs(v[best]), 0.0);  // kill residual imaginary dust
}

Vec2 gauge_fixed(const Vec2& v) {
    Eigen::VectorXcd tmp = v;
    gauge_fix(tmp);
    return Vec2(tmp[0], tmp[1]);
}

Eig2 eig2(const Hermitian2& h) {
    Eig2 out;
    const double bn = h.b_norm();
    out.e_minus = h.a0 - bn;
    out.e_plus = h.a0 + bn;

    if (h.degenerate()) {
        out.degenerate = true;
        out.v_minus = Vec2(Complex(1.0, 0.0), Complex(0.0, 0.0));
        out.v_plus = Vec2(Complex(0.0, 0.0), Complex(1.0, 0.0));
        return out;
    }

    const Complex off(h.b[0], -h.b[1]);  // matrix entry (0,1)
    Vec2 vm;
    if (h.b[2] > 0.0) {
        vm << -off, Complex(bn + h.b[2], 0.0);
    } else {
        // avoids cancellation when b points near -z
        vm << Complex(bn - h.b[2], 0.0), -std::conj(off);
    }
    vm.normalize();
    // orthogonal complement of a unit 2-vector (a,b) is (-conj(b), conj(a))
    Vec2 vp;
    vp << -std::conj(vm[1]), std::conj(vm[0]);

    out.v_minus = gauge_fixed(vm);
    out.v_plus = gauge_fixed(vp);
    return out;
}

Mat2 expu2(const Hermitian2& h, double tau) {
    if (!std::isfinite(tau)) throw DomainError("expu2: non-finite tau");
    const double bn = h.b_norm();
    const Complex global = std::exp(Complex(0.0, -h.a0 * tau));
    const double c = std::cos(bn * tau);
    const double s = std::sin(bn * tau);

    Mat2 u;
    if (bn == 0.0) {
        u = Mat2::Identity();
    } else {
        const double nx = h.b[0] / bn;
        const double ny = h.b[1] / bn;
        const double nz = h.b[2] / bn;
        const Complex is(0.0, s);
        u(0, 0) = Complex(c, 0.0) - is * nz;
        u(1, 1) = Complex(c, 0.0) + is * nz;
        u(0, 1) = -is * Complex(nx, -ny);
        u(1, 0) = -is * Complex(nx, ny);
    }
    return global * u;
}

// ----------------------------- dense Hermitian -------------------------------

DenseHermitian::DenseHermitian(Eigen::MatrixXcd entries) : mat_(std::move(entries)) {
    if (mat_.rows() != mat_.cols() || mat_.rows() == 0) {
        throw DimensionError("DenseHermitian: matrix must be square and non-empty");
    }
    if (static_cast<std::size_t>(mat_.rows()) > kDenseDimMax) {
        throw DimensionError("DenseHermitian: dim exceeds 4096");
    }
    if (!all_finite(mat_)) {
        throw DomainError("DenseHermitian: non-finite entry");
    }
    const double scale = mat_.cwiseAbs().maxCoeff();
    const double asym = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(scale, 1e-300)) {
        throw DomainError("DenseHermitian: matrix is not Hermitian");
    }
    // store the exactly Hermitian symmetrization
    mat_ = 0.5 * (mat_ + mat_.adjoint()).eval();
}

EigDense eig_dense(const DenseHermitian& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.matrix());
    if (solver.info() != Eigen::Success) {
        throw NonConvergenceError("eig_dense: eigensolver did not converge");
    }
    EigDense out;
    out.values = solver.eigenvalues();
    out.vectors = solver.eigenvectors();
    for (Eigen::Index c = 0; c < out.vectors.cols(); ++c) {
        gauge_fix(out.vectors.col(c));
    }
    return out;
}

Eigen::MatrixXcd expu_dense(const DenseHermitian& h, double tau) {
    if (!std::isfinite(tau)) throw DomainError("expu_dense: non-finite tau");
    const EigDense ed = eig_dense(h);
    const Eigen::Index d = ed.values.size();
    Eigen::VectorXcd phases(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        phases[i] = std::exp(Complex(0.0, -ed.values[i] * tau));
    }
    return ed.vectors * phases.asDiagonal() * ed.vectors.adjoint();
}

}  // namespace fidelim
