#include "fidelim/pipeline.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "fidelim/metrics.hpp"
#include "fidelim/rng.hpp"
#include "fidelim/svg.hpp"

namespace fidelim {

using nlohmann::json;

// ------------------------------ configuration --------------------------------

void RunConfig::validate() const {
    model.validate();
    integrator.validate();
    if (!(lambda_max > 0.0)) throw ConfigError("RunConfig: lambda_max must be > 0");
    if (grid_points < 2) throw ConfigError("RunConfig: grid_points must be >= 2");
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw ConfigError("RunConfig: epsilon must lie in (0,1)");
    }
    if (n_list.empty()) throw ConfigError("RunConfig: n_list must be non-empty");
    for (std::size_t n : n_list) {
        if (n < 1) throw ConfigError("RunConfig: n_list entries must be >= 1");
    }
    if (!inject_fault.empty() && inject_fault != "halve_g") {
        throw ConfigError("RunConfig: unknown inject_fault value");
    }
}

namespace {

const char* const kKnownKeys[] = {"J",          "U",           "E_R",
                                  "Gamma",      "N",           "lambda_max",
                                  "grid_points", "base_steps", "tol",
                                  "max_halvings", "threads",   "force_per_mode_sweep",
                                  "epsilon",    "seed",        "n_list",
                                  "csv",        "svg",         "inject_fault"};

bool known_key(const std::string& k) {
    for (const char* known : kKnownKeys) {
        if (k == known) return true;
    }
    return false;
}

std::size_t to_size(const json& v, const char* key) {
    if (!v.is_number_unsigned() && !v.is_number_integer()) {
        throw ConfigError(std::string("config: ") + key + " must be an integer");
    }
    const auto i = v.get<long long>();
    if (i < 0) throw ConfigError(std::string("config: ") + key + " must be >= 0");
    return static_cast<std::size_t>(i);
}

double parse_double(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: malformed number for " + key + ": '" + s + "'");
    }
}

std::uint64_t parse_u64(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: malformed integer for " + key + ": '" + s + "'");
    }
}

bool parse_bool(const std::string& s, const std::string& key) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw ConfigError("config: malformed boolean for " + key + ": '" + s + "'");
}

std::vector<std::size_t> parse_n_list(const std::string& s) {
    std::vector<std::size_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(static_cast<std::size_t>(parse_u64(item, "n_list")));
    }
    if (out.empty()) throw ConfigError("config: n_list must be non-empty");
    return out;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config: top level must be a JSON object");

    RunConfig cfg;
    for (const auto& [key, value] : doc.items()) {
        if (!known_key(key)) throw ConfigError("config: unknown key '" + key + "'");
        if (key == "J") cfg.model.J = value.get<double>();
        else if (key == "U") cfg.model.U = value.get<double>();
        else if (key == "E_R") cfg.model.E_R = value.get<double>();
        else if (key == "Gamma") cfg.model.Gamma = value.get<double>();
        else if (key == "N") cfg.model.N = to_size(value, "N");
        else if (key == "lambda_max") cfg.lambda_max = value.get<double>();
        else if (key == "grid_points") cfg.grid_points = to_size(value, "grid_points");
        else if (key == "base_steps") cfg.integrator.base_steps = to_size(value, "base_steps");
        else if (key == "tol") cfg.integrator.tol = value.get<double>();
        else if (key == "max_halvings") cfg.integrator.max_halvings = static_cast<int>(to_size(value, "max_halvings"));
        else if (key == "threads") cfg.integrator.threads = to_size(value, "threads");
        else if (key == "force_per_mode_sweep") cfg.integrator.force_per_mode_sweep = value.get<bool>();
        else if (key == "epsilon") cfg.epsilon = value.get<double>();
        else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
        else if (key == "n_list") {
            if (!value.is_array()) throw ConfigError("config: n_list must be an array");
            cfg.n_list.clear();
            for (const auto& item : value) cfg.n_list.push_back(to_size(item, "n_list"));
            if (cfg.n_list.empty()) throw ConfigError("config: n_list must be non-empty");
        } else if (key == "csv") cfg.csv_path = value.get<std::string>();
        else if (key == "svg") cfg.svg_path = value.get<std::string>();
        else if (key == "inject_fault") cfg.inject_fault = value.get<std::string>();
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void apply_override(RunConfig& cfg, const std::string& key_equals_value) {
    const auto eq = key_equals_value.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("--set expects key=value, got '" + key_equals_value + "'");
    }
    const std::string key = key_equals_value.substr(0, eq);
    const std::string value = key_equals_value.substr(eq + 1);
    if (!known_key(key)) throw ConfigError("config: unknown key '" + key + "'");

    if (key == "J") cfg.model.J = parse_double(value, key);
    else if (key == "U") cfg.model.U = parse_double(value, key);
    else if (key == "E_R") cfg.model.E_R = parse_double(value, key);
    else if (key == "Gamma") cfg.model.Gamma = parse_double(value, key);
    else if (key == "N") cfg.model.N = static_cast<std::size_t>(parse_u64(value, key));
    else if (key == "lambda_max") cfg.lambda_max = parse_double(value, key);
    else if (key == "grid_points") cfg.grid_points = static_cast<std::size_t>(parse_u64(value, key));
    else if (key == "base_steps") cfg.integrator.base_steps = static_cast<std::size_t>(parse_u64(value, key));
    else if (key == "tol") cfg.integrator.tol = parse_double(value, key);
    else if (key == "max_halvings") cfg.integrator.max_halvings = static_cast<int>(parse_u64(value, key));
    else if (key == "threads") cfg.integrator.threads = static_cast<std::size_t>(parse_u64(value, key));
    else if (key == "force_per_mode_sweep") cfg.integrator.force_per_mode_sweep = parse_bool(value, key);
    else if (key == "epsilon") cfg.epsilon = parse_double(value, key);
    else if (key == "seed") cfg.seed = parse_u64(value, key);
    else if (key == "n_list") cfg.n_list = parse_n_list(value);
    else if (key == "csv") cfg.csv_path = value;
    else if (key == "svg") cfg.svg_path = value;
    else if (key == "inject_fault") cfg.inject_fault = value;
}

// ------------------------------ simulation -----------------------------------

namespace {

// C(lambda) on the grid; per-lambda values are independent, so the sweep is
// parallel with slot storage (deterministic for any thread count).
std::vector<double> oc_grid(const ModelParams& p, const std::vector<double>& grid,
                            std::size_t threads) {
    std::vector<double> log_c(grid.size());
    const std::size_t n_threads =
        threads > 0 ? threads : std::max<std::size_t>(1, std::thread::hardware_concurrency());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= log_c.size()) break;
            log_c[i] = oc_exact(p, grid[i]);
        }
    };
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return log_c;
}

}  // namespace

SimulationResult simulate(const RunConfig& cfg) {
    cfg.validate();
    const DriveProtocol protocol = cfg.protocol();

    SimulationResult out;
    out.record = evolve_many_body(cfg.model, protocol, cfg.integrator);

    const std::vector<double> log_c =
        oc_grid(cfg.model, protocol.grid, cfg.integrator.threads);
    const QslTrace qsl = qsl_trace(cfg.model, protocol);

    Trace& tr = out.trace;
    const std::size_t G = protocol.grid.size();
    tr.lambda_grid = protocol.grid;
    tr.F.resize(G);
    tr.C.resize(G);
    tr.theta.resize(G);
    tr.R = qsl.R;
    tr.R_tilde = qsl.R_tilde;
    tr.R_tilde2 = qsl.R_tilde2;
    tr.sinR_tilde.resize(G);
    tr.g1.resize(G);
    tr.g2.resize(G);
    tr.g.resize(G);
    for (std::size_t i = 0; i < G; ++i) {
        tr.F[i] = std::min(1.0, out.record.fidelity(i));
        tr.C[i] = std::min(1.0, std::exp(log_c[i]));
        tr.theta[i] = theta_at(out.record, i).value;
        tr.sinR_tilde[i] = std::sin(qsl.R_tilde[i]);
        tr.g1[i] = g1_of(tr.C[i], tr.R[i]);
        tr.g2[i] = g2_of(tr.C[i], tr.R[i]);
        tr.g[i] = tr.g1[i] + tr.g2[i];
    }
    tr.validate();
    return out;
}

BandsResult compute_bands(const RunConfig& cfg) {
    BandsResult out;
    out.trace = simulate(cfg).trace;
    out.old_band = band(out.trace, BoundKind::Old);
    out.sin_band = band(out.trace, BoundKind::Sin);
    out.g_band = band(out.trace, BoundKind::G);
    out.ratios = area_ratios(out.trace);
    return out;
}

// ------------------------------ verification ---------------------------------

namespace {

CheckResult budget_check(const std::string& name, double budget, double worst) {
    // slack = budget - worst error; pass when the error stays within budget
    CheckResult r;
    r.name = name;
    r.min_slack = budget - worst;
    r.pass = r.min_slack >= 0.0;
    return r;
}

}  // namespace

std::vector<CheckResult> run_verify_checks(const RunConfig& cfg) {
    cfg.validate();
    std::vector<CheckResult> checks;

    SimulationResult sim = simulate(cfg);
    if (cfg.inject_fault == "halve_g") {
        for (std::size_t i = 0; i < sim.trace.size(); ++i) {
            sim.trace.g1[i] *= 0.5;
            sim.trace.g2[i] *= 0.5;
            sim.trace.g[i] *= 0.5;
        }
    }

    // bound columns must reproduce their defining formulas exactly
    {
        double worst = 0.0;
        const Trace& tr = sim.trace;
        for (std::size_t i = 0; i < tr.size(); ++i) {
            worst = std::max(worst, std::abs(tr.g1[i] - g1_of(tr.C[i], tr.R[i])));
            worst = std::max(worst, std::abs(tr.g2[i] - g2_of(tr.C[i], tr.R[i])));
            worst = std::max(worst,
                             std::abs(tr.g[i] - bound_value(BoundKind::G, tr.C[i], tr.R[i])));
            worst = std::max(worst,
                             std::abs(tr.sinR_tilde[i] - std::sin(tr.R_tilde[i])));
        }
        checks.push_back(budget_check("bound_columns", 1e-14, worst));
    }

    {
        const ChainReport chain = verify_inequality_chain(sim.trace);
        CheckResult r;
        r.name = "inequality_chain";
        r.min_slack = chain.min_slack();
        r.pass = chain.pass(-1e-9);
        checks.push_back(r);
    }

    {
        const QslVariantsReport qsl = check_qsl_both_variants(cfg.model, sim.record);
        CheckResult a;
        a.name = "qsl_variant_initial";
        a.min_slack = qsl.min_slack_initial;
        a.pass = qsl.min_slack_initial >= -1e-9;
        checks.push_back(a);
        CheckResult b;
        b.name = "qsl_variant_instantaneous";
        b.min_slack = qsl.min_slack_instantaneous;
        b.pass = qsl.min_slack_instantaneous >= -1e-9;
        checks.push_back(b);
    }

    {
        const LemmaReport lemma = lemma_s2_check(cfg.seed, 100000, {2, 3, 4, 5, 6, 7, 8});
        CheckResult r;
        r.name = "lemma_s2";
        r.min_slack = std::min(lemma.min_slack_lemma, lemma.min_slack_triangle);
        r.pass = lemma.pass(-1e-12);
        checks.push_back(r);
    }

    {
        double worst = 0.0;
        for (std::size_t t = 0; t < 10000; ++t) {
            rng::Gaussian gen(rng::derive_seed(cfg.seed ^ 0xd3c0417ull, t));
            const int dim = 2 + static_cast<int>(t % 7);
            const DenseHermitian A(rng::random_hermitian(gen, dim));
            const Eigen::VectorXcd psi = rng::random_state(gen, dim);
            const DecompositionReport rep = check_decomposition(A, psi);
            if (!rep.eigenstate_branch) {
                worst = std::max(worst, std::max(rep.orthogonality_residual,
                                                 rep.reconstruction_residual));
            }
        }
        checks.push_back(budget_check("decomposition", 1e-10, worst));
    }

    {
        const double dv = delta_v_exact(cfg.model);
        const double expected = std::sqrt(static_cast<double>(cfg.model.N)) * cfg.model.E_R;
        checks.push_back(budget_check("delta_v_closed_form", 1e-12,
                                      std::abs(dv - expected) / expected));
    }

    {
        double worst = 0.0;
        for (std::size_t n : {std::size_t{100}, std::size_t{1000}, std::size_t{10000}}) {
            ModelParams p = cfg.model;
            p.N = n;
            const double cn = catastrophe_exponent(p);
            const double lambda = 0.1 / std::sqrt(cn);
            const double dev =
                std::abs(oc_exact(p, lambda) - oc_asymptotic(p, lambda)) / (cn * lambda * lambda);
            worst = std::max(worst, dev);
        }
        checks.push_back(budget_check("oc_asymptotic_slope", 0.05, worst));
    }

    {
        // trapezoid of delta_e0 / Gamma against the closed form at lambda_max
        const DriveProtocol protocol = cfg.protocol();
        const double dv = delta_v_exact(cfg.model);
        double integral = 0.0;
        for (std::size_t i = 1; i < protocol.grid.size(); ++i) {
            const double h = protocol.grid[i] - protocol.grid[i - 1];
            integral += 0.5 * h *
                        (std::abs(protocol.grid[i - 1]) + std::abs(protocol.grid[i])) * dv /
                        cfg.model.Gamma;
        }
        const double closed = r_closed(cfg.model, cfg.lambda_max);
        checks.push_back(
            budget_check("qsl_quadrature", 1e-8, std::abs(integral - closed) / closed));
    }

    return checks;
}

// ------------------------------ scaling sweep --------------------------------

std::vector<ScalingReport> run_scaling(const RunConfig& cfg) {
    cfg.validate();
    std::vector<ScalingReport> out;
    out.reserve(cfg.n_list.size());
    for (std::size_t n : cfg.n_list) {
        RunConfig local = cfg;
        local.model.N = n;
        const SimulationResult sim = simulate(local);

        ScalingReport rep;
        rep.N = n;
        rep.C_N = catastrophe_exponent(local.model);
        rep.deltaV_N = delta_v_exact(local.model);
        rep.lambda_star_asymptotic = mean_free_path_asymptotic(local.model);
        rep.lambda_star_numeric =
            mean_free_path_numeric(sim.trace.lambda_grid, sim.trace.F);
        rep.R_at_lambda_star = r_at_mean_free_path(local.model);
        rep.Gamma_N_bound = max_driving_rate(local.model, cfg.epsilon);
        rep.epsilon = cfg.epsilon;
        out.push_back(rep);
    }
    return out;
}

// ------------------------------ emission -------------------------------------

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_trace_csv(std::ostream& os, const Trace& trace) {
    os << "lambda,F,C,theta,R,R_tilde,sinR_tilde,R_tilde2,g1,g2,g\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        os << format_double(trace.lambda_grid[i]) << ',' << format_double(trace.F[i]) << ','
           << format_double(trace.C[i]) << ',' << format_double(trace.theta[i]) << ','
           << format_double(trace.R[i]) << ',' << format_double(trace.R_tilde[i]) << ','
           << format_double(trace.sinR_tilde[i]) << ',' << format_double(trace.R_tilde2[i])
           << ',' << format_double(trace.g1[i]) << ',' << format_double(trace.g2[i]) << ','
           << format_double(trace.g[i]) << '\n';
    }
}

void write_bands_csv(std::ostream& os, const BandsResult& bands) {
    os << "lambda,lower_old,upper_old,lower_sin,upper_sin,lower_g,upper_g,F,C\n";
    const Trace& tr = bands.trace;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        os << format_double(tr.lambda_grid[i]) << ',' << format_double(bands.old_band.lower[i])
           << ',' << format_double(bands.old_band.upper[i]) << ','
           << format_double(bands.sin_band.lower[i]) << ','
           << format_double(bands.sin_band.upper[i]) << ','
           << format_double(bands.g_band.lower[i]) << ','
           << format_double(bands.g_band.upper[i]) << ',' << format_double(tr.F[i]) << ','
           << format_double(tr.C[i]) << '\n';
    }
}

void write_scaling_csv(std::ostream& os, const std::vector<ScalingReport>& reports) {
    os << "N,C_N,deltaV_N,lambda_star_asym,lambda_star_num,R_at_lambda_star,Gamma_N_bound\n";
    for (const auto& r : reports) {
        os << r.N << ',' << format_double(r.C_N) << ',' << format_double(r.deltaV_N) << ','
           << format_double(r.lambda_star_asymptotic) << ','
           << format_double(r.lambda_star_numeric) << ','
           << format_double(r.R_at_lambda_star) << ',' << format_double(r.Gamma_N_bound)
           << '\n';
    }
}

void write_verify_report(std::ostream& os, const std::vector<CheckResult>& checks) {
    for (const auto& c : checks) {
        os << c.name << ' ' << format_double(c.min_slack) << ' '
           << (c.pass ? "PASS" : "FAIL") << '\n';
    }
}

void write_bands_svg(std::ostream& os, const BandsResult& bands, const RunConfig& cfg) {
    SvgFigure fig;
    fig.title = "Fidelity bands, N = " + std::to_string(cfg.model.N);
    fig.x_label = "lambda";
    fig.y_label = "fidelity";

    const auto add_band = [&](const BoundBand& b, const char* fill, double opacity,
                              const char* label) {
        SvgBand sb;
        sb.x = b.lambda_grid;
        sb.lower = b.lower;
        sb.upper = b.upper;
        sb.fill = fill;
        sb.opacity = opacity;
        sb.label = label;
        fig.bands.push_back(std::move(sb));
    };
    add_band(bands.old_band, "#1f77b4", 0.25, "R~ band");
    add_band(bands.sin_band, "#2ca02c", 0.30, "sin R~ band");
    add_band(bands.g_band, "#d62728", 0.35, "g band");

    SvgCurve f_curve;
    f_curve.x = bands.trace.lambda_grid;
    f_curve.y = bands.trace.F;
    f_curve.stroke = "#ff7f0e";
    f_curve.width = 1.5;
    f_curve.label = "F(lambda)";
    fig.curves.push_back(std::move(f_curve));

    SvgCurve c_curve;
    c_curve.x = bands.trace.lambda_grid;
    c_curve.y = bands.trace.C;
    c_curve.stroke = "black";
    c_curve.width = 1.0;
    c_curve.label = "C(lambda)";
    fig.curves.push_back(std::move(c_curve));

    write_svg(os, fig);
}

// ------------------------------ CLI entry points -----------------------------

namespace {

// Writes canonical CSV to the configured file, or to `fallback` when no path
// is set.
template <typename WriteFn>
int emit_csv(const std::string& path, std::ostream& fallback, std::ostream& diag,
             WriteFn&& write) {
    if (path.empty()) {
        write(fallback);
        return 0;
    }
    std::ofstream out(path);
    if (!out) {
        diag << "error: cannot open output file '" << path << "'\n";
        return 2;
    }
    write(out);
    diag << "wrote " << path << '\n';
    return 0;
}

}  // namespace

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& diag) {
    try {
        cfg.validate();
        diag << "simulate: N=" << cfg.model.N << " lambda_max=" << cfg.lambda_max
             << " grid=" << cfg.grid_points << '\n';
        const SimulationResult sim = simulate(cfg);
        return emit_csv(cfg.csv_path, out, diag,
                        [&](std::ostream& os) { write_trace_csv(os, sim.trace); });
    } catch (const ConfigError& e) {
        diag << "config error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        diag << "numerical failure: " << e.what() << '\n';
        return 3;
    }
}

int cmd_bands(const RunConfig& cfg, std::ostream& out, std::ostream& diag) {
    try {
        cfg.validate();
        diag << "bands: N=" << cfg.model.N << " lambda_max=" << cfg.lambda_max << '\n';
        const BandsResult bands = compute_bands(cfg);
        const int rc = emit_csv(cfg.csv_path, out, diag,
                                [&](std::ostream& os) { write_bands_csv(os, bands); });
        if (rc != 0) return rc;
        if (!cfg.svg_path.empty()) {
            std::ofstream svg(cfg.svg_path);
            if (!svg) {
                diag << "error: cannot open SVG file '" << cfg.svg_path << "'\n";
                return 2;
            }
            write_bands_svg(svg, bands, cfg);
            diag << "wrote " << cfg.svg_path << '\n';
        }
        out << "area_ratio sin_over_old " << format_double(bands.ratios.sin_over_old) << '\n';
        out << "area_ratio g_over_old " << format_double(bands.ratios.g_over_old) << '\n';
        return 0;
    } catch (const ConfigError& e) {
        diag << "config error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        diag << "numerical failure: " << e.what() << '\n';
        return 3;
    }
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& diag) {
    try {
        cfg.validate();
        diag << "verify: N=" << cfg.model.N << " seed=" << cfg.seed << '\n';
        const std::vector<CheckResult> checks = run_verify_checks(cfg);
        write_verify_report(out, checks);
        for (const auto& c : checks) {
            if (!c.pass) return 1;
        }
        return 0;
    } catch (const ConfigError& e) {
        diag << "config error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        diag << "numerical failure: " << e.what() << '\n';
        return 3;
    }
}

int cmd_scaling(const RunConfig& cfg, std::ostream& out, std::ostream& diag) {
    try {
        cfg.validate();
        diag << "scaling: sweep over " << cfg.n_list.size() << " sizes\n";
        const std::vector<ScalingReport> reports = run_scaling(cfg);
        return emit_csv(cfg.csv_path, out, diag,
                        [&](std::ostream& os) { write_scaling_csv(os, reports); });
    } catch (const ConfigError& e) {
        diag << "config error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        diag << "numerical failure: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace fidelim
