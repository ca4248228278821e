// fidelim — batch front-end for driven-lattice simulations, fidelity-band
// reports, the verification battery, and scaling sweeps.
//
//   fidelim simulate --n 1000 --out trace.csv
//   fidelim bands    --n 1000 --out bands.csv --svg bands.svg
//   fidelim verify   --seed 42
//   fidelim scaling  --set n_list=100,1000,10000 --out scaling.csv
//
// Precedence: command-line flag > config file > built-in default.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "fidelim/pipeline.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::vector<std::string> sets;
    std::string out_path;
    std::string svg_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> n;
    std::optional<double> lambda_max;
    std::optional<double> gamma;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config file (flat keys)");
    cmd->add_option("--set", flags.sets, "Override a config key, key=value (repeatable)");
    cmd->add_option("--out", flags.out_path, "CSV output path (default: stdout)");
    cmd->add_option("--svg", flags.svg_path, "SVG output path (bands only)");
    cmd->add_option("--seed", flags.seed, "PRNG seed for randomized checks");
    cmd->add_option("--n", flags.n, "Number of unit cells");
    cmd->add_option("--lambda-max", flags.lambda_max, "Sweep endpoint");
    cmd->add_option("--gamma", flags.gamma, "Driving rate");
}

// flag > file > default
int build_config(const CommonFlags& flags, fidelim::RunConfig& cfg) {
    try {
        if (!flags.config_path.empty()) {
            cfg = fidelim::load_config_file(flags.config_path);
        }
        for (const std::string& kv : flags.sets) {
            fidelim::apply_override(cfg, kv);
        }
        if (flags.seed) cfg.seed = *flags.seed;
        if (flags.n) cfg.model.N = static_cast<std::size_t>(*flags.n);
        if (flags.lambda_max) cfg.lambda_max = *flags.lambda_max;
        if (flags.gamma) cfg.model.Gamma = *flags.gamma;
        if (!flags.out_path.empty()) cfg.csv_path = flags.out_path;
        if (!flags.svg_path.empty()) cfg.svg_path = flags.svg_path;
    } catch (const fidelim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"driven many-body simulation and adiabatic-fidelity bound toolkit"};
    app.require_subcommand(1);

    CommonFlags flags_simulate, flags_bands, flags_verify, flags_scaling;
    CLI::App* sim = app.add_subcommand("simulate", "Evolve and emit the full trace CSV");
    add_common_flags(sim, flags_simulate);
    CLI::App* bands = app.add_subcommand("bands", "Two-sided fidelity bands, areas, CSV/SVG");
    add_common_flags(bands, flags_bands);
    CLI::App* verify = app.add_subcommand("verify", "Run the consolidated check battery");
    add_common_flags(verify, flags_verify);
    CLI::App* scaling = app.add_subcommand("scaling", "Size sweep of breakdown quantities");
    add_common_flags(scaling, flags_scaling);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    fidelim::RunConfig cfg;
    int rc = 0;
    if (sim->parsed()) {
        rc = build_config(flags_simulate, cfg);
        if (rc == 0) rc = fidelim::cmd_simulate(cfg, std::cout, std::cerr);
    } else if (bands->parsed()) {
        rc = build_config(flags_bands, cfg);
        if (rc == 0) rc = fidelim::cmd_bands(cfg, std::cout, std::cerr);
    } else if (verify->parsed()) {
        rc = build_config(flags_verify, cfg);
        if (rc == 0) rc = fidelim::cmd_verify(cfg, std::cout, std::cerr);
    } else if (scaling->parsed()) {
        rc = build_config(flags_scaling, cfg);
        if (rc == 0) rc = fidelim::cmd_scaling(cfg, std::cout, std::cerr);
    }
    return rc;
}
