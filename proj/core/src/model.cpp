#include "fidelim/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace fidelim {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

// ------------------------------- parameters ----------------------------------

void ModelParams::validate() const {
    if (!std::isfinite(J) || !std::isfinite(U) || !std::isfinite(E_R) ||
        !std::isfinite(Gamma)) {
        throw ConfigError("ModelParams: non-finite parameter");
    }
    if (E_R <= 0.0) throw ConfigError("ModelParams: E_R must be > 0");
    if (Gamma <= 0.0) throw ConfigError("ModelParams: Gamma must be > 0");
    if (N < 1) throw ConfigError("ModelParams: N must be >= 1");
    if (J * U == 0.0) {
        throw ConfigError("ModelParams: J = 0 or U = 0 closes the gap at lambda = 0");
    }
}

ModeIndex ModeIndex::of(std::size_t j, std::size_t N) {
    return ModeIndex{j, kTwoPi * static_cast<double>(j) / static_cast<double>(N)};
}

DriveProtocol DriveProtocol::uniform(double lambda_max, std::size_t points) {
    if (!(lambda_max >= 0.0)) throw ConfigError("DriveProtocol: lambda_max must be >= 0");
    if (points < 2) throw ConfigError("DriveProtocol: need at least 2 grid points");
    DriveProtocol out;
    out.lambda_max = lambda_max;
    out.grid.resize(points);
    for (std::size_t i = 0; i < points; ++i) {
        out.grid[i] = lambda_max * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    out.grid.front() = 0.0;
    out.grid.back() = lambda_max;
    return out;
}

void DriveProtocol::validate() const {
    if (grid.size() < 2) throw ConfigError("DriveProtocol: need at least 2 grid points");
    if (grid.front() != 0.0) throw ConfigError("DriveProtocol: grid must start at 0");
    if (grid.back() != lambda_max) throw ConfigError("DriveProtocol: grid must end at lambda_max");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw ConfigError("DriveProtocol: grid must be strictly increasing");
        }
    }
}

// ------------------------------- operations ----------------------------------

Hermitian2 bloch_h(const ModelParams& p, double k, double lambda) {
    // c(k) = -(J+U) - (J-U) e^{-ik}; matrix entry (0,1) = b_x - i b_y
    const double bx = -(p.J + p.U) - (p.J - p.U) * std::cos(k);
    const double by = -((p.J - p.U) * std::sin(k));
    const double bz = lambda * p.E_R;
    return Hermitian2(0.0, bx, by, bz);
}

Vec2 ground_state_mode(const ModelParams& p, double k, double lambda) {
    const Hermitian2 h = bloch_h(p, k, lambda);
    const Eig2 e = eig2(h);
    if (e.degenerate) {
        throw GapClosureError("ground_state_mode: gap closed at k=" + std::to_string(k) +
                              ", lambda=" + std::to_string(lambda));
    }
    return e.v_minus;
}

namespace {

// ln |<phi_k(lambda)|phi_k(0)>|^2 for one mode. Near-unit overlaps go through
// the orthogonal complement so the deficit keeps full relative precision.
double mode_log_overlap_sq(const ModelParams& p, double k, double lambda) {
    const Vec2 g0 = ground_state_mode(p, k, 0.0);
    const Vec2 gl = ground_state_mode(p, k, lambda);
    const Vec2 gl_perp(-std::conj(gl[1]), std::conj(gl[0]));
    const double s2 = std::min(1.0, std::norm(gl_perp.dot(g0)));
    if (s2 <= 0.5) return std::log1p(-s2);
    return std::min(0.0, 2.0 * std::log(std::abs(gl.dot(g0))));
}

}  // namespace

double oc_exact(const ModelParams& p, double lambda) {
    p.validate();
    if (lambda == 0.0) return 0.0;  // C(0) = 1 exactly
    double acc = 0.0;
    if (p.staggering_vanishes()) {
        const double t = mode_log_overlap_sq(p, 0.0, lambda);
        for (std::size_t j = 0; j < p.N; ++j) acc += t;  // bitwise = full sweep
        return acc;
    }
    for (std::size_t j = 0; j < p.N; ++j) {
        acc += mode_log_overlap_sq(p, ModeIndex::of(j, p.N).k, lambda);
    }
    return acc;
}

double catastrophe_exponent(const ModelParams& p) {
    return static_cast<double>(p.N) * p.E_R * p.E_R / (16.0 * p.J * p.U);
}

double oc_asymptotic(const ModelParams& p, double lambda) {
    p.validate();
    return -catastrophe_exponent(p) * lambda * lambda;
}

double delta_v_exact(const ModelParams& p) {
    p.validate();
    double var = 0.0;
    for (std::size_t j = 0; j < p.N; ++j) {
        const Vec2 g = ground_state_mode(p, ModeIndex::of(j, p.N).k, 0.0);
        // per-mode <sigma_z> and <sigma_z^2> = 1
        const double sz = std::norm(g[0]) - std::norm(g[1]);
        var += 1.0 - sz * sz;
    }
    return std::sqrt(var) * p.E_R;
}

double r_closed(const ModelParams& p, double lambda) {
    p.validate();
    return lambda * lambda * delta_v_exact(p) / (2.0 * p.Gamma);
}

// --------------------------- dense oracle backend ----------------------------

DenseModel::DenseModel(const ModelParams& p) : p_(p) {
    p_.validate();
    if (p_.N > 12) {
        throw DimensionError("DenseModel: N > 12 exceeds the dense backend limit");
    }
    dim_ = std::size_t{1} << p_.N;
}

DenseHermitian DenseModel::hamiltonian(double lambda) const {
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim_),
                                                static_cast<Eigen::Index>(dim_));
    for (std::size_t j = 0; j < p_.N; ++j) {
        const Mat2 h = bloch_h(p_, ModeIndex::of(j, p_.N).k, lambda).to_matrix();
        const std::size_t bit = std::size_t{1} << j;
        for (std::size_t idx = 0; idx < dim_; ++idx) {
            const std::size_t s = (idx & bit) ? 1 : 0;
            H(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx)) += h(s, s);
            const std::size_t flipped = idx ^ bit;
            const std::size_t sf = 1 - s;
            H(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(flipped)) += h(s, sf);
        }
    }
    return DenseHermitian(std::move(H));
}

Eigen::VectorXcd DenseModel::ground_state(double lambda) const {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Ones(1);
    for (std::size_t j = 0; j < p_.N; ++j) {
        // mode j occupies basis bit j: new index = old | (s_j << j)
        const Vec2 g = ground_state_mode(p_, ModeIndex::of(j, p_.N).k, lambda);
        Eigen::VectorXcd next(psi.size() * 2);
        next.head(psi.size()) = g[0] * psi;
        next.tail(psi.size()) = g[1] * psi;
        psi = std::move(next);
    }
    return psi;
}

Eigen::VectorXd DenseModel::drive_diagonal() const {
    Eigen::VectorXd d(static_cast<Eigen::Index>(dim_));
    for (std::size_t idx = 0; idx < dim_; ++idx) {
        int sum = 0;
        for (std::size_t j = 0; j < p_.N; ++j) {
            sum += (idx & (std::size_t{1} << j)) ? -1 : 1;  // sigma_z eigenvalue per mode
        }
        d[static_cast<Eigen::Index>(idx)] = p_.E_R * static_cast<double>(sum);
    }
    return d;
}

}  // namespace fidelim
