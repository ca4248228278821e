// metrics.hpp — state-space metrics and quantum-speed-limit functionals:
// fidelity, Bures angle, theta(lambda), energy uncertainty of the drive, the
// clipped speed-limit integrals, and numerical checks of the orthogonal
// decomposition identity behind them. hbar = 1 throughout.

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "fidelim/evolution.hpp"
#include "fidelim/model.hpp"
#include "fidelim/smallmat.hpp"

namespace fidelim {

// Angle in radians, restricted to [0, pi/2].
struct Angle {
    double value{0.0};

    Angle() = default;
    explicit Angle(double radians);
};

// Squared magnitude of the inner product; throws NormError when either
// argument deviates from unit norm by more than 1e-9.
double fidelity(const Eigen::VectorXcd& psi, const Eigen::VectorXcd& phi);

// Bures angle D = (2/pi) arccos sqrt(F), valued in [0, 1].
double bures_angle(const Eigen::VectorXcd& psi, const Eigen::VectorXcd& phi);
double bures_angle_from_fidelity(double f);

// theta(lambda) = arccos |<Psi_0|Psi_lambda>| = (pi/2) * D(Psi_lambda, Psi_0),
// read off the evolution record. lambda must lie on the record grid.
Angle theta_lambda(const EvolutionRecord& record, double lambda);
Angle theta_at(const EvolutionRecord& record, std::size_t index);

// Energy uncertainty of H_lambda in the initial ground state. For
// H_lambda = H_0 + lambda*V with an initial eigenstate this is exactly
// |lambda| * deltaV_N; delta_e0_direct evaluates the same quantity from
// per-mode second moments without using the eigenstate identity.
double delta_e0(const ModelParams& p, double lambda);
double delta_e0_direct(const ModelParams& p, double lambda);

// Speed-limit trace: R(lambda) = lambda^2 deltaV_N / (2 Gamma) together with
// its clipped companions min(R, pi/2) and min(R, pi/4).
struct QslTrace {
    std::vector<double> lambda_grid;
    std::vector<double> R;
    std::vector<double> R_tilde;   // min(R, pi/2)
    std::vector<double> R_tilde2;  // min(R, pi/4)

    void validate() const;
};

QslTrace qsl_trace(const ModelParams& p, const DriveProtocol& protocol);

// ---- orthogonal decomposition A|psi> = <A>|psi> + dA|psi_perp> --------------

struct DecompositionReport {
    double delta_a{0.0};
    double orthogonality_residual{0.0};   // |<psi|psi_perp>|
    double reconstruction_residual{0.0};  // ||A psi - <A> psi - dA psi_perp||
    bool eigenstate_branch{false};        // dA below threshold: trivially satisfied

    bool pass(double tol = 1e-10) const {
        return eigenstate_branch ||
               (orthogonality_residual <= tol && reconstruction_residual <= tol);
    }
};

// dim <= 64.
DecompositionReport check_decomposition(const DenseHermitian& A, const Eigen::VectorXcd& psi);

// ---- both speed-limit variants ----------------------------------------------

// Variant a bounds theta by the integral of the initial-state uncertainty
// (clipped at pi/2); variant b by the running integral of the instantaneous
// uncertainty along the trajectory (trapezoid on the record grid).
struct QslVariantsReport {
    double min_slack_initial{0.0};        // min over grid of R_tilde - theta
    double min_slack_instantaneous{0.0};  // min over grid of integral - theta

    bool pass(double slack_tol = -1e-9) const {
        return min_slack_initial >= slack_tol && min_slack_instantaneous >= slack_tol;
    }
};

// General form: caller supplies the initial-state uncertainty on the record
// grid; the integrals are composite trapezoids scaled by 1/Gamma.
QslVariantsReport check_qsl_both_variants(const EvolutionRecord& record,
                                          const std::vector<double>& delta_e0_on_grid,
                                          double Gamma);

// Model form: delta_e0 taken from the eigenstate identity.
QslVariantsReport check_qsl_both_variants(const ModelParams& p, const EvolutionRecord& record);

}  // namespace fidelim
