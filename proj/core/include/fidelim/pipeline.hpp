// pipeline.hpp — batch orchestration: run configuration (JSON file + key=value
// overrides), trace assembly, CSV/SVG emission, the consolidated verification
// battery, and the scaling sweep. The CLI binary is a thin wrapper over the
// cmd_* entry points so everything here stays directly testable.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fidelim/bounds.hpp"
#include "fidelim/evolution.hpp"
#include "fidelim/model.hpp"
#include "fidelim/scaling.hpp"

namespace fidelim {

struct RunConfig {
    ModelParams model;
    double lambda_max{1.5};
    std::size_t grid_points{2048};
    IntegratorConfig integrator;
    double epsilon{0.1};
    std::uint64_t seed{42};
    std::vector<std::size_t> n_list{100, 1000, 10000};
    std::string csv_path;   // empty = standard output
    std::string svg_path;   // empty = no SVG
    std::string inject_fault;  // test hook for the verify negative control

    void validate() const;
    DriveProtocol protocol() const { return DriveProtocol::uniform(lambda_max, grid_points); }
};

// Parse a flat JSON document. Unknown keys are rejected. Keys:
// J, U, E_R, Gamma, N, lambda_max, grid_points, base_steps, tol, max_halvings,
// threads, force_per_mode_sweep, epsilon, seed, n_list, csv, svg, inject_fault.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config_file(const std::string& path);

// Apply one "key=value" override (the --set flag); throws ConfigError on
// unknown keys or malformed values.
void apply_override(RunConfig& cfg, const std::string& key_equals_value);

// ------------------------------ simulation -----------------------------------

struct SimulationResult {
    Trace trace;
    EvolutionRecord record;
};

// Evolve, assemble the full Trace (F, C, theta, speed-limit columns, bound
// terms) on the configured grid.
SimulationResult simulate(const RunConfig& cfg);

struct BandsResult {
    Trace trace;
    BoundBand old_band;
    BoundBand sin_band;
    BoundBand g_band;
    AreaRatios ratios;
};

BandsResult compute_bands(const RunConfig& cfg);

// ------------------------------ verification ---------------------------------

struct CheckResult {
    std::string name;
    double min_slack{0.0};
    bool pass{false};
};

// The consolidated battery behind `verify`: inequality chain, both
// speed-limit variants, the triplet lemma, the orthogonal-decomposition
// identity, closed-form cross-checks, and bound-column integrity.
std::vector<CheckResult> run_verify_checks(const RunConfig& cfg);

// ------------------------------ scaling sweep --------------------------------

std::vector<ScalingReport> run_scaling(const RunConfig& cfg);

// ------------------------------ emission -------------------------------------

std::string format_double(double v);  // 17 significant digits, round-trip exact

void write_trace_csv(std::ostream& os, const Trace& trace);
void write_bands_csv(std::ostream& os, const BandsResult& bands);
void write_scaling_csv(std::ostream& os, const std::vector<ScalingReport>& reports);
void write_verify_report(std::ostream& os, const std::vector<CheckResult>& checks);
void write_bands_svg(std::ostream& os, const BandsResult& bands, const RunConfig& cfg);

// ------------------------------ CLI entry points -----------------------------
// Return process exit codes: 0 success, 1 verification failure, 2 config
// error, 3 numerical failure. Canonical output goes to `out` (or the
// configured file); human-readable progress goes to `diag`.

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& diag);
int cmd_bands(const RunConfig& cfg, std::ostream& out, std::ostream& diag);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& diag);
int cmd_scaling(const RunConfig& cfg, std::ostream& out, std::ostream& diag);

}  // namespace fidelim
