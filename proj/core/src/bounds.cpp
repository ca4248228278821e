#include "fidelim/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fidelim/rng.hpp"

namespace fidelim {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kQuarterPi = std::numbers::pi / 4.0;

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double acc = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        acc += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    }
    return acc;
}
}  // namespace

double g_of(double C, Angle theta) {
    if (!(C >= 0.0 && C <= 1.0)) throw DomainError("g_of: C outside [0,1]");
    const double s = std::sin(theta.value);
    return s * s * std::abs(1.0 - 2.0 * C) +
           std::sin(2.0 * theta.value) * std::sqrt(C) * std::sqrt(1.0 - C);
}

double g1_of(double C, double R) {
    const double s = std::sin(std::min(R, kHalfPi));
    return s * s * std::abs(1.0 - 2.0 * C);
}

double g2_of(double C, double R) {
    return std::sin(2.0 * std::min(R, kQuarterPi)) * std::sqrt(C) * std::sqrt(1.0 - C);
}

double bound_value(BoundKind kind, double C, double R) {
    if (!(C >= 0.0 && C <= 1.0)) throw DomainError("bound_value: C outside [0,1]");
    if (!(R >= 0.0)) throw DomainError("bound_value: R must be >= 0");
    switch (kind) {
        case BoundKind::Old:
            return std::min(R, kHalfPi);
        case BoundKind::Sin:
            return std::sin(std::min(R, kHalfPi));
        case BoundKind::G:
            return g1_of(C, R) + g2_of(C, R);
    }
    throw DomainError("bound_value: unknown kind");
}

void Trace::validate() const {
    const std::size_t G = lambda_grid.size();
    const auto check_len = [G](const std::vector<double>& col) { return col.size() == G; };
    if (!check_len(F) || !check_len(C) || !check_len(theta) || !check_len(R) ||
        !check_len(R_tilde) || !check_len(R_tilde2) || !check_len(sinR_tilde) ||
        !check_len(g1) || !check_len(g2) || !check_len(g)) {
        throw DomainError("Trace: column length mismatch");
    }
    for (std::size_t i = 0; i < G; ++i) {
        if (!(F[i] >= 0.0 && F[i] <= 1.0)) throw DomainError("Trace: F outside [0,1]");
        if (!(C[i] >= 0.0 && C[i] <= 1.0)) throw DomainError("Trace: C outside [0,1]");
        if (g[i] != g1[i] + g2[i]) throw DomainError("Trace: g != g1 + g2");
    }
}

BoundBand band(const Trace& trace, BoundKind kind) {
    BoundBand out;
    out.lambda_grid = trace.lambda_grid;
    const std::size_t G = trace.size();
    out.lower.resize(G);
    out.upper.resize(G);
    std::vector<double> width(G);
    for (std::size_t i = 0; i < G; ++i) {
        const double b = bound_value(kind, trace.C[i], trace.R[i]);
        out.lower[i] = std::max(trace.C[i] - b, 0.0);
        out.upper[i] = std::min(trace.C[i] + b, 1.0);
        width[i] = out.upper[i] - out.lower[i];
    }
    out.area = trapezoid(out.lambda_grid, width);
    return out;
}

AreaRatios area_ratios(const Trace& trace) {
    const double old_area = band(trace, BoundKind::Old).area;
    if (old_area == 0.0) {
        throw DegenerateAreaError("area_ratios: Old band has zero area");
    }
    AreaRatios out;
    out.sin_over_old = band(trace, BoundKind::Sin).area / old_area;
    out.g_over_old = band(trace, BoundKind::G).area / old_area;
    return out;
}

double ChainReport::min_slack() const {
    return std::min({fc_le_g_pointwise, gpt_le_sin_theta, fc_le_sin_theta,
                     sin_theta_le_sin_rt, sin_rt_le_rt, fc_le_g_lambda});
}

ChainReport verify_inequality_chain(const Trace& trace) {
    trace.validate();
    ChainReport rep;
    constexpr double inf = std::numeric_limits<double>::infinity();
    rep.fc_le_g_pointwise = inf;
    rep.gpt_le_sin_theta = inf;
    rep.fc_le_sin_theta = inf;
    rep.sin_theta_le_sin_rt = inf;
    rep.sin_rt_le_rt = inf;
    rep.fc_le_g_lambda = inf;

    for (std::size_t i = 0; i < trace.size(); ++i) {
        const double fc = std::abs(trace.F[i] - trace.C[i]);
        const double g_pt = g_of(trace.C[i], Angle(trace.theta[i]));
        const double sin_theta = std::sin(trace.theta[i]);
        rep.fc_le_g_pointwise = std::min(rep.fc_le_g_pointwise, g_pt - fc);
        rep.gpt_le_sin_theta = std::min(rep.gpt_le_sin_theta, sin_theta - g_pt);
        rep.fc_le_sin_theta = std::min(rep.fc_le_sin_theta, sin_theta - fc);
        rep.sin_theta_le_sin_rt =
            std::min(rep.sin_theta_le_sin_rt, trace.sinR_tilde[i] - sin_theta);
        rep.sin_rt_le_rt = std::min(rep.sin_rt_le_rt, trace.R_tilde[i] - trace.sinR_tilde[i]);
        rep.fc_le_g_lambda = std::min(rep.fc_le_g_lambda, trace.g[i] - fc);
    }
    return rep;
}

LemmaReport lemma_s2_check(std::uint64_t seed, std::size_t trials,
                           const std::vector<int>& dims) {
    if (trials < 1) throw DomainError("lemma_s2_check: trials must be >= 1");
    if (dims.empty()) throw DomainError("lemma_s2_check: dims must be non-empty");
    for (int d : dims) {
        if (d < 2 || d > 16) throw DomainError("lemma_s2_check: dims must lie in [2,16]");
    }

    LemmaReport rep;
    rep.seed = seed;
    rep.trials = trials;
    rep.min_slack_lemma = std::numeric_limits<double>::infinity();
    rep.min_slack_triangle = std::numeric_limits<double>::infinity();

    for (std::size_t t = 0; t < trials; ++t) {
        rng::Gaussian gen(rng::derive_seed(seed, t));
        const int dim = dims[t % dims.size()];
        const Eigen::VectorXcd psi1 = rng::random_state(gen, dim);
        const Eigen::VectorXcd psi2 = rng::random_state(gen, dim);
        const Eigen::VectorXcd psi3 = rng::random_state(gen, dim);

        const double f12 = fidelity(psi1, psi2);
        const double f13 = fidelity(psi1, psi3);
        const double d23 = bures_angle(psi2, psi3);
        const double slack_lemma = std::sin(kHalfPi * d23) - std::abs(f12 - f13);

        const double d12 = bures_angle(psi1, psi2);
        const double d13 = bures_angle(psi1, psi3);
        const double slack_triangle = d12 + d13 - d23;

        rep.min_slack_lemma = std::min(rep.min_slack_lemma, slack_lemma);
        rep.min_slack_triangle = std::min(rep.min_slack_triangle, slack_triangle);
        if (slack_lemma < -1e-12 || slack_triangle < -1e-12) ++rep.violations;
    }
    return rep;
}

}  // namespace fidelim
