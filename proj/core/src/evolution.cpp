#include "fidelim/evolution.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

namespace fidelim {

ModeState::ModeState(const Vec2& a) : amplitudes(a) {
    if (std::abs(amplitudes.norm() - 1.0) > 1e-12) {
        throw NormError("ModeState: amplitudes not normalized");
    }
}

void IntegratorConfig::validate() const {
    if (base_steps < 1) throw ConfigError("IntegratorConfig: base_steps must be >= 1");
    if (!(tol > 0.0)) throw ConfigError("IntegratorConfig: tol must be > 0");
    if (max_halvings < 0) throw ConfigError("IntegratorConfig: max_halvings must be >= 0");
}

double EvolutionRecord::fidelity(std::size_t i) const {
    return std::exp(log_fidelity(i));
}

namespace {

// Substeps per protocol interval at refinement level 0, proportional to the
// interval length, at least one each.
std::vector<std::size_t> interval_steps(const DriveProtocol& protocol, std::size_t base_steps) {
    const std::size_t n_int = protocol.grid.size() - 1;
    std::vector<std::size_t> counts(n_int);
    const double span = protocol.grid.back() - protocol.grid.front();
    for (std::size_t i = 0; i < n_int; ++i) {
        const double frac = (protocol.grid[i + 1] - protocol.grid[i]) / span;
        const double ideal = static_cast<double>(base_steps) * frac;
        counts[i] = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(ideal - 1e-12)));
    }
    return counts;
}

std::vector<ModeState> run_mode_pass(const ModelParams& p, double k,
                                     const DriveProtocol& protocol,
                                     const std::vector<std::size_t>& counts,
                                     std::size_t level_factor) {
    std::vector<ModeState> out;
    out.reserve(protocol.grid.size());
    Vec2 psi = ground_state_mode(p, k, 0.0);
    out.emplace_back(psi);
    for (std::size_t i = 0; i + 1 < protocol.grid.size(); ++i) {
        const double a = protocol.grid[i];
        const double width = protocol.grid[i + 1] - a;
        const std::size_t n = counts[i] * level_factor;
        const double delta = width / static_cast<double>(n);
        for (std::size_t m = 0; m < n; ++m) {
            const double mid = a + (static_cast<double>(m) + 0.5) * delta;
            psi = expu2(bloch_h(p, k, mid), delta / p.Gamma) * psi;
        }
        out.emplace_back(psi);
    }
    return out;
}

double final_gs_fidelity(const ModelParams& p, double k, const DriveProtocol& protocol,
                         const std::vector<ModeState>& states) {
    const Vec2 gs = ground_state_mode(p, k, protocol.lambda_max);
    return std::norm(gs.dot(states.back().amplitudes));
}

// ln|<phi|psi>| without forming 1 - tiny: near-unit overlaps go through the
// orthogonal complement, |<phi|psi>|^2 = 1 - |<phi_perp|psi>|^2 exactly for
// unit vectors, and the small side is computed at full relative precision.
double log_abs_overlap(const Vec2& phi, const Vec2& phi_perp, const Vec2& psi) {
    const double s2 = std::min(1.0, std::norm(phi_perp.dot(psi)));
    if (s2 <= 0.5) return 0.5 * std::log1p(-s2);
    return std::min(0.0, std::log(std::abs(phi.dot(psi))));
}

Vec2 orthogonal_complement(const Vec2& v) {
    return Vec2(-std::conj(v[1]), std::conj(v[0]));
}

double log_abs_overlap_dense(const Eigen::VectorXcd& phi, const Eigen::VectorXcd& psi) {
    const Complex ov = phi.dot(psi);
    const double s2 = std::min(1.0, (psi - phi * ov).squaredNorm());
    if (s2 <= 0.5) return 0.5 * std::log1p(-s2);
    return std::min(0.0, std::log(std::abs(ov)));
}

}  // namespace

ModeTrajectory evolve_mode(const ModelParams& p, double k, const DriveProtocol& protocol,
                           const IntegratorConfig& cfg) {
    p.validate();
    protocol.validate();
    cfg.validate();

    const std::vector<std::size_t> counts = interval_steps(protocol, cfg.base_steps);

    ModeTrajectory traj;
    traj.states = run_mode_pass(p, k, protocol, counts, 1);
    traj.level = 0;
    if (cfg.max_halvings == 0) return traj;  // fixed grid

    double prev_fid = final_gs_fidelity(p, k, protocol, traj.states);
    for (int level = 1; level <= cfg.max_halvings; ++level) {
        ModeTrajectory finer;
        finer.states = run_mode_pass(p, k, protocol, counts, std::size_t{1} << level);
        finer.level = level;
        const double fid = final_gs_fidelity(p, k, protocol, finer.states);
        if (std::abs(fid - prev_fid) < cfg.tol) return finer;
        prev_fid = fid;
        traj = std::move(finer);
    }
    throw NoConvergenceError("evolve_mode: no convergence after " +
                             std::to_string(cfg.max_halvings) + " halvings at k=" +
                             std::to_string(k));
}

ModeObservables mode_observables(const ModelParams& p, double k, const DriveProtocol& protocol,
                                 const ModeTrajectory& traj) {
    const std::size_t G = protocol.grid.size();
    ModeObservables obs;
    obs.log_overlap_instantaneous.resize(G);
    obs.log_overlap_initial.resize(G);
    obs.energy_mean.resize(G);
    obs.energy_var.resize(G);

    const Vec2 psi0 = traj.states.front().amplitudes;
    const Vec2 psi0_perp = orthogonal_complement(psi0);
    for (std::size_t i = 0; i < G; ++i) {
        const double lambda = protocol.grid[i];
        const Vec2& psi = traj.states[i].amplitudes;
        const Vec2 gs = ground_state_mode(p, k, lambda);
        obs.log_overlap_instantaneous[i] =
            log_abs_overlap(gs, orthogonal_complement(gs), psi);
        obs.log_overlap_initial[i] = log_abs_overlap(psi0, psi0_perp, psi);
        const Mat2 h = bloch_h(p, k, lambda).to_matrix();
        const Vec2 hpsi = h * psi;
        const double mean = psi.dot(hpsi).real();
        obs.energy_mean[i] = mean;
        obs.energy_var[i] = (hpsi - mean * psi).squaredNorm();
    }
    // exact zeros at lambda = 0: the state is the instantaneous ground state
    obs.log_overlap_instantaneous[0] = 0.0;
    obs.log_overlap_initial[0] = 0.0;
    return obs;
}

namespace {

void accumulate(EvolutionRecord& rec, const ModeObservables& obs) {
    const std::size_t G = rec.lambda_grid.size();
    for (std::size_t i = 0; i < G; ++i) {
        rec.log_overlap_instantaneous[i] += obs.log_overlap_instantaneous[i];
        rec.log_overlap_initial[i] += obs.log_overlap_initial[i];
        rec.energy_mean[i] += obs.energy_mean[i];
        rec.energy_var[i] += obs.energy_var[i];
    }
}

EvolutionRecord zero_record(const DriveProtocol& protocol) {
    EvolutionRecord rec;
    rec.lambda_grid = protocol.grid;
    rec.log_overlap_instantaneous.assign(protocol.grid.size(), 0.0);
    rec.log_overlap_initial.assign(protocol.grid.size(), 0.0);
    rec.energy_mean.assign(protocol.grid.size(), 0.0);
    rec.energy_var.assign(protocol.grid.size(), 0.0);
    return rec;
}

}  // namespace

EvolutionRecord evolve_many_body(const ModelParams& p, const DriveProtocol& protocol,
                                 const IntegratorConfig& cfg) {
    p.validate();
    protocol.validate();
    cfg.validate();

    EvolutionRecord rec = zero_record(protocol);

    if (p.staggering_vanishes() && !cfg.force_per_mode_sweep) {
        // all modes are bitwise identical; accumulating one mode N times equals
        // the full index-ordered sweep bit for bit
        const ModeTrajectory traj = evolve_mode(p, 0.0, protocol, cfg);
        const ModeObservables obs = mode_observables(p, 0.0, protocol, traj);
        for (std::size_t j = 0; j < p.N; ++j) accumulate(rec, obs);
        return rec;
    }

    const std::size_t n_threads =
        cfg.threads > 0 ? cfg.threads
                        : std::max<std::size_t>(1, std::thread::hardware_concurrency());
    const std::size_t chunk = 256;  // bounds per-mode trajectory storage

    std::vector<ModeObservables> slots(std::min(chunk, p.N));
    std::vector<std::exception_ptr> errors(slots.size());

    for (std::size_t start = 0; start < p.N; start += chunk) {
        const std::size_t count = std::min(chunk, p.N - start);
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                const std::size_t local = next.fetch_add(1);
                if (local >= count) break;
                const std::size_t j = start + local;
                try {
                    const double k = ModeIndex::of(j, p.N).k;
                    const ModeTrajectory traj = evolve_mode(p, k, protocol, cfg);
                    slots[local] = mode_observables(p, k, protocol, traj);
                } catch (...) {
                    errors[local] = std::current_exception();
                }
            }
        };
        if (n_threads == 1 || count == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            const std::size_t spawn = std::min(n_threads, count);
            pool.reserve(spawn);
            for (std::size_t t = 0; t < spawn; ++t) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
        }
        for (std::size_t local = 0; local < count; ++local) {
            if (errors[local]) std::rethrow_exception(errors[local]);
            accumulate(rec, slots[local]);
            errors[local] = nullptr;
        }
    }
    return rec;
}

EvolutionRecord evolve_dense(const DenseModel& model, const DriveProtocol& protocol,
                             const IntegratorConfig& cfg) {
    protocol.validate();
    cfg.validate();
    const ModelParams& p = model.params();

    const std::vector<std::size_t> counts = interval_steps(protocol, cfg.base_steps);
    const std::size_t G = protocol.grid.size();

    auto run_pass = [&](std::size_t level_factor) {
        std::vector<Eigen::VectorXcd> states;
        states.reserve(G);
        Eigen::VectorXcd psi = model.ground_state(0.0);
        states.push_back(psi);
        for (std::size_t i = 0; i + 1 < G; ++i) {
            const double a = protocol.grid[i];
            const double width = protocol.grid[i + 1] - a;
            const std::size_t n = counts[i] * level_factor;
            const double delta = width / static_cast<double>(n);
            for (std::size_t m = 0; m < n; ++m) {
                const double mid = a + (static_cast<double>(m) + 0.5) * delta;
                psi = (expu_dense(model.hamiltonian(mid), delta / p.Gamma) * psi).eval();
            }
            states.push_back(psi);
        }
        return states;
    };

    auto final_fidelity = [&](const std::vector<Eigen::VectorXcd>& states) {
        const Eigen::VectorXcd gs = model.ground_state(protocol.lambda_max);
        return std::norm(gs.dot(states.back()));
    };

    std::vector<Eigen::VectorXcd> states = run_pass(1);
    if (cfg.max_halvings > 0) {
        double prev_fid = final_fidelity(states);
        bool converged = false;
        for (int level = 1; level <= cfg.max_halvings; ++level) {
            std::vector<Eigen::VectorXcd> finer = run_pass(std::size_t{1} << level);
            const double fid = final_fidelity(finer);
            states = std::move(finer);
            if (std::abs(fid - prev_fid) < cfg.tol) {
                converged = true;
                break;
            }
            prev_fid = fid;
        }
        if (!converged) {
            throw NoConvergenceError("evolve_dense: no convergence after " +
                                     std::to_string(cfg.max_halvings) + " halvings");
        }
    }

    EvolutionRecord rec = zero_record(protocol);
    const Eigen::VectorXcd psi0 = states.front();
    for (std::size_t i = 0; i < G; ++i) {
        const double lambda = protocol.grid[i];
        const Eigen::VectorXcd& psi = states[i];
        const Eigen::VectorXcd gs = model.ground_state(lambda);
        rec.log_overlap_instantaneous[i] = log_abs_overlap_dense(gs, psi);
        rec.log_overlap_initial[i] = log_abs_overlap_dense(psi0, psi);
        const Eigen::MatrixXcd H = model.hamiltonian(lambda).matrix();
        const Eigen::VectorXcd hpsi = H * psi;
        const double mean = psi.dot(hpsi).real();
        rec.energy_mean[i] = mean;
        rec.energy_var[i] = (hpsi - mean * psi).squaredNorm();
    }
    rec.log_overlap_instantaneous[0] = 0.0;
    rec.log_overlap_initial[0] = 0.0;
    return rec;
}

}  // namespace fidelim
