// model.hpp — driven Rice-Mele model in momentum space: per-mode Bloch
// Hamiltonians, instantaneous ground states, closed-form catastrophe exponent
// and drive-variance quantities, plus the dense tensor-product backend used as
// a brute-force oracle for small N.
//
// Conventions: N counts unit cells = momentum modes, periodic boundary
// conditions with k_j = 2*pi*j/N, half filling realized as one fermion per
// k-mode in the two-band space. All energies are expressed in units of E_R;
// E_R stays an explicit field so the closed forms read like their sources.

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "fidelim/smallmat.hpp"

namespace fidelim {

// ------------------------------- parameters ----------------------------------

struct ModelParams {
    double J{0.4};      // intra-cell hopping
    double U{0.4};      // hopping staggering
    double E_R{1.0};    // energy scale; Delta = lambda * E_R
    double Gamma{0.7};  // driving rate d(lambda)/dt, constant
    std::size_t N{1000};  // unit cells = momentum modes

    // Throws ConfigError unless E_R > 0, Gamma > 0, N >= 1 and J*U != 0
    // (J = 0 or U = 0 closes the gap at lambda = 0).
    void validate() const;

    bool staggering_vanishes() const { return J - U == 0.0; }
};

struct ModeIndex {
    std::size_t j{0};
    double k{0.0};  // 2*pi*j/N in [0, 2*pi)

    static ModeIndex of(std::size_t j, std::size_t N);
};

struct DriveProtocol {
    double lambda_max{1.5};
    std::vector<double> grid;  // strictly increasing, grid[0] = 0, back() = lambda_max

    static DriveProtocol uniform(double lambda_max, std::size_t points);

    void validate() const;
};

// ------------------------------- operations ----------------------------------

// Bloch Hamiltonian h(k, lambda) = [[lambda*E_R, c(k)], [conj(c(k)), -lambda*E_R]]
// with c(k) = -(J+U) - (J-U) e^{-ik}, in Pauli form.
Hermitian2 bloch_h(const ModelParams& p, double k, double lambda);

// Lower eigenvector of bloch_h, gauge-fixed. Throws GapClosureError on
// degeneracy.
Vec2 ground_state_mode(const ModelParams& p, double k, double lambda);

// ln C(lambda) = sum_k ln |<phi_k(lambda)|phi_k(0)>|^2, accumulated in log
// space and in ascending mode order. When J == U every mode is identical and
// one mode is evaluated, then accumulated N times (bitwise equal to the full
// sweep).
double oc_exact(const ModelParams& p, double lambda);

// Large-N asymptotic ln C(lambda) = -C_N * lambda^2 with C_N = N E_R^2/(16 J U).
double oc_asymptotic(const ModelParams& p, double lambda);
double catastrophe_exponent(const ModelParams& p);  // C_N

// Standard deviation of the drive V = E_R sum_j (n_aj - n_bj) in the
// lambda = 0 many-body ground state; equals sqrt(N)*E_R whenever the gap is
// open. Computed as the root of the sum of per-mode variances.
double delta_v_exact(const ModelParams& p);

// R(lambda) = lambda^2 * deltaV_N / (2 Gamma).
double r_closed(const ModelParams& p, double lambda);

// --------------------------- dense oracle backend ----------------------------

// Full tensor-product backend over the N two-level modes (dim 2^N, N <= 12).
// Basis index bit j holds the state of mode j.
class DenseModel {
public:
    explicit DenseModel(const ModelParams& p);

    std::size_t dim() const { return dim_; }
    const ModelParams& params() const { return p_; }

    DenseHermitian hamiltonian(double lambda) const;

    // Tensor product of per-mode ground states.
    Eigen::VectorXcd ground_state(double lambda) const;

    // Drive operator V = E_R sum_k sigma_z^(k) (diagonal).
    Eigen::VectorXd drive_diagonal() const;

private:
    ModelParams p_;
    std::size_t dim_;
};

}  // namespace fidelim
