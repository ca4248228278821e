// evolution.hpp — integrates the scaled time-dependent Schroedinger equation
// i*Gamma d/dlambda |psi> = h(lambda) |psi> per momentum mode (and densely for
// the brute-force backend). Stepping is exponential-midpoint: each step applies
// the exact exponential of the midpoint Hamiltonian, so norms are preserved to
// rounding and fidelities never leave [0,1].

#pragma once

#include <cstddef>
#include <vector>

#include "fidelim/model.hpp"
#include "fidelim/smallmat.hpp"

namespace fidelim {

struct ModeState {
    Vec2 amplitudes;

    ModeState() : amplitudes(Complex(1.0, 0.0), Complex(0.0, 0.0)) {}
    explicit ModeState(const Vec2& a);  // validates ||a|| = 1 within 1e-12
};

struct IntegratorConfig {
    std::size_t base_steps{2048};  // level-0 steps over [0, lambda_max]
    double tol{1e-9};              // convergence criterion on final per-mode fidelity
    int max_halvings{12};          // refinement budget; 0 = fixed grid, no refinement
    std::size_t threads{0};        // 0 = hardware concurrency
    bool force_per_mode_sweep{false};  // disable the identical-modes shortcut

    void validate() const;
};

// Aggregated many-body trajectory on the protocol grid. Overlaps are logs of
// amplitude magnitudes: ln F(lambda) = 2 * log_overlap_instantaneous.
struct EvolutionRecord {
    std::vector<double> lambda_grid;
    std::vector<double> log_overlap_instantaneous;  // ln|<Phi_lambda|Psi_lambda>|
    std::vector<double> log_overlap_initial;        // ln|<Psi_0|Psi_lambda>|
    std::vector<double> energy_mean;                // <H_lambda> in the evolved state
    std::vector<double> energy_var;                 // Var(H_lambda) in the evolved state

    double log_fidelity(std::size_t i) const { return 2.0 * log_overlap_instantaneous[i]; }
    double fidelity(std::size_t i) const;
};

struct ModeTrajectory {
    std::vector<ModeState> states;  // one per protocol grid point
    int level{0};                   // accepted refinement level
};

// Evolve one momentum mode from its lambda = 0 ground state. The step grid
// subdivides each protocol interval; it is halved until the final fidelity
// with the instantaneous ground state changes by < tol between successive
// refinements. Throws NoConvergenceError when max_halvings is exhausted.
ModeTrajectory evolve_mode(const ModelParams& p, double k, const DriveProtocol& protocol,
                           const IntegratorConfig& cfg);

// Per-grid-point observables of one mode trajectory.
struct ModeObservables {
    std::vector<double> log_overlap_instantaneous;
    std::vector<double> log_overlap_initial;
    std::vector<double> energy_mean;
    std::vector<double> energy_var;
};

ModeObservables mode_observables(const ModelParams& p, double k, const DriveProtocol& protocol,
                                 const ModeTrajectory& traj);

// Full sweep over the N modes with deterministic index-ascending reduction.
// Mode trajectories are independent and evaluated in parallel; when J == U and
// the shortcut is enabled, one mode is evolved and accumulated N times, which
// is bitwise identical to the full sweep.
EvolutionRecord evolve_many_body(const ModelParams& p, const DriveProtocol& protocol,
                                 const IntegratorConfig& cfg);

// Brute-force twin of evolve_many_body on the dense backend (N <= 12):
// midpoint stepping with expu_dense, refinement on the many-body fidelity.
EvolutionRecord evolve_dense(const DenseModel& model, const DriveProtocol& protocol,
                             const IntegratorConfig& cfg);

}  // namespace fidelim
