#include "fidelim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace fidelim {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kQuarterPi = std::numbers::pi / 4.0;
}  // namespace

Angle::Angle(double radians) : value(radians) {
    if (!std::isfinite(value)) throw DomainError("Angle: non-finite value");
    if (value < 0.0 || value > kHalfPi) {
        if (value >= -1e-12 && value <= kHalfPi + 1e-12) {
            value = std::clamp(value, 0.0, kHalfPi);  // rounding dust
        } else {
            throw DomainError("Angle: value outside [0, pi/2]");
        }
    }
}

double fidelity(const Eigen::VectorXcd& psi, const Eigen::VectorXcd& phi) {
    if (psi.size() != phi.size()) throw DomainError("fidelity: dimension mismatch");
    if (std::abs(psi.norm() - 1.0) > 1e-9 || std::abs(phi.norm() - 1.0) > 1e-9) {
        throw NormError("fidelity: state not normalized");
    }
    return std::min(1.0, std::norm(psi.dot(phi)));
}

double bures_angle_from_fidelity(double f) {
    if (f < 0.0 || f > 1.0) throw DomainError("bures_angle: fidelity outside [0,1]");
    return (2.0 / std::numbers::pi) * std::acos(std::sqrt(f));
}

double bures_angle(const Eigen::VectorXcd& psi, const Eigen::VectorXcd& phi) {
    return bures_angle_from_fidelity(fidelity(psi, phi));
}

Angle theta_at(const EvolutionRecord& record, std::size_t index) {
    const double lo = record.log_overlap_initial[index];
    if (lo > -0.34) {
        // near-unit overlap: acos(exp(lo)) has a sqrt(eps) noise floor there,
        // asin of the complement keeps full precision
        const double s = std::sqrt(std::max(0.0, -std::expm1(2.0 * lo)));
        return Angle(std::asin(std::min(1.0, s)));
    }
    return Angle(std::acos(std::min(1.0, std::exp(lo))));
}

Angle theta_lambda(const EvolutionRecord& record, double lambda) {
    const auto& grid = record.lambda_grid;
    const double scale = std::max(1.0, std::abs(grid.back()));
    const auto it = std::lower_bound(grid.begin(), grid.end(), lambda - 1e-12 * scale);
    if (it == grid.end() || std::abs(*it - lambda) > 1e-12 * scale) {
        throw DomainError("theta_lambda: lambda not on the record grid");
    }
    return theta_at(record, static_cast<std::size_t>(it - grid.begin()));
}

double delta_e0(const ModelParams& p, double lambda) {
    return std::abs(lambda) * delta_v_exact(p);
}

double delta_e0_direct(const ModelParams& p, double lambda) {
    p.validate();
    double var = 0.0;
    for (std::size_t j = 0; j < p.N; ++j) {
        const double k = ModeIndex::of(j, p.N).k;
        const Vec2 g = ground_state_mode(p, k, 0.0);
        const Mat2 h = bloch_h(p, k, lambda).to_matrix();
        const Vec2 hg = h * g;
        const double mean = g.dot(hg).real();
        var += std::max(0.0, hg.squaredNorm() - mean * mean);
    }
    return std::sqrt(var);
}

void QslTrace::validate() const {
    const std::size_t G = lambda_grid.size();
    if (R.size() != G || R_tilde.size() != G || R_tilde2.size() != G) {
        throw DomainError("QslTrace: column length mismatch");
    }
    for (std::size_t i = 0; i < G; ++i) {
        if (R_tilde[i] < 0.0 || R_tilde[i] > kHalfPi + 1e-15) {
            throw DomainError("QslTrace: R_tilde outside [0, pi/2]");
        }
        if (R_tilde2[i] < 0.0 || R_tilde2[i] > kQuarterPi + 1e-15) {
            throw DomainError("QslTrace: R_tilde2 outside [0, pi/4]");
        }
        if (i > 0 && R[i] < R[i - 1]) {
            throw DomainError("QslTrace: R must be non-decreasing");
        }
    }
}

QslTrace qsl_trace(const ModelParams& p, const DriveProtocol& protocol) {
    p.validate();
    protocol.validate();
    const double dv = delta_v_exact(p);
    QslTrace out;
    out.lambda_grid = protocol.grid;
    const std::size_t G = protocol.grid.size();
    out.R.resize(G);
    out.R_tilde.resize(G);
    out.R_tilde2.resize(G);
    for (std::size_t i = 0; i < G; ++i) {
        const double lambda = protocol.grid[i];
        const double r = lambda * lambda * dv / (2.0 * p.Gamma);
        out.R[i] = r;
        out.R_tilde[i] = std::min(r, kHalfPi);
        out.R_tilde2[i] = std::min(r, kQuarterPi);
    }
    out.validate();
    return out;
}

DecompositionReport check_decomposition(const DenseHermitian& A, const Eigen::VectorXcd& psi) {
    if (A.dim() > 64) throw DimensionError("check_decomposition: dim > 64");
    if (psi.size() != static_cast<Eigen::Index>(A.dim())) {
        throw DomainError("check_decomposition: dimension mismatch");
    }
    if (std::abs(psi.norm() - 1.0) > 1e-9) {
        throw NormError("check_decomposition: psi not normalized");
    }

    DecompositionReport rep;
    const Eigen::VectorXcd apsi = A.matrix() * psi;
    const double mean = psi.dot(apsi).real();
    const double var = std::max(0.0, apsi.squaredNorm() - mean * mean);
    rep.delta_a = std::sqrt(var);
    if (rep.delta_a <= 1e-12) {
        rep.eigenstate_branch = true;  // psi is an eigenstate of A
        return rep;
    }
    const Eigen::VectorXcd perp = (apsi - mean * psi) / rep.delta_a;
    rep.orthogonality_residual = std::abs(psi.dot(perp));
    rep.reconstruction_residual = (apsi - mean * psi - rep.delta_a * perp).norm();
    return rep;
}

QslVariantsReport check_qsl_both_variants(const EvolutionRecord& record,
                                          const std::vector<double>& delta_e0_on_grid,
                                          double Gamma) {
    const std::size_t G = record.lambda_grid.size();
    if (delta_e0_on_grid.size() != G) {
        throw DomainError("check_qsl_both_variants: grid length mismatch");
    }
    QslVariantsReport rep;
    rep.min_slack_initial = std::numeric_limits<double>::infinity();
    rep.min_slack_instantaneous = std::numeric_limits<double>::infinity();

    double integral_initial = 0.0;        // of delta_e0 / Gamma
    double integral_instantaneous = 0.0;  // of sqrt(energy_var) / Gamma
    for (std::size_t i = 0; i < G; ++i) {
        if (i > 0) {
            const double h = record.lambda_grid[i] - record.lambda_grid[i - 1];
            integral_initial +=
                0.5 * h * (delta_e0_on_grid[i - 1] + delta_e0_on_grid[i]) / Gamma;
            integral_instantaneous += 0.5 * h *
                                      (std::sqrt(record.energy_var[i - 1]) +
                                       std::sqrt(record.energy_var[i])) /
                                      Gamma;
        }
        const double theta = theta_at(record, i).value;
        rep.min_slack_initial =
            std::min(rep.min_slack_initial, std::min(integral_initial, kHalfPi) - theta);
        rep.min_slack_instantaneous =
            std::min(rep.min_slack_instantaneous, integral_instantaneous - theta);
    }
    return rep;
}

QslVariantsReport check_qsl_both_variants(const ModelParams& p, const EvolutionRecord& record) {
    const double dv = delta_v_exact(p);
    std::vector<double> de0(record.lambda_grid.size());
    for (std::size_t i = 0; i < de0.size(); ++i) {
        de0[i] = std::abs(record.lambda_grid[i]) * dv;
    }
    return check_qsl_both_variants(record, de0, p.Gamma);
}

}  // namespace fidelim
