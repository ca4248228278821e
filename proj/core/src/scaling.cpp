#include "fidelim/scaling.hpp"

#include <cmath>
#include <limits>

namespace fidelim {

double breakdown_constant_m() {
    const double e1 = std::exp(-1.0);
    const double e2 = std::exp(-2.0);
    return std::exp(-0.5) * std::sqrt(1.0 - e1) + std::sqrt(1.0 - e1 - e2);
}

double mean_free_path_asymptotic(const ModelParams& p) {
    p.validate();
    return 1.0 / std::sqrt(catastrophe_exponent(p));
}

double mean_free_path_numeric(const std::vector<double>& lambda_grid,
                              const std::vector<double>& F) {
    if (lambda_grid.size() != F.size() || lambda_grid.size() < 2) {
        throw DomainError("mean_free_path_numeric: bad grid");
    }
    const double target = std::exp(-1.0);

    // scan for the first bracketing interval
    std::size_t lo = 0;
    bool found = false;
    for (std::size_t i = 1; i < F.size(); ++i) {
        if ((F[i - 1] - target) * (F[i] - target) <= 0.0 && F[i - 1] != F[i]) {
            lo = i - 1;
            found = true;
            break;
        }
    }
    if (!found) {
        throw NoCrossingError("mean_free_path_numeric: F never crosses 1/e on the grid");
    }

    // bisection on the linear interpolant
    double a = lambda_grid[lo];
    double b = lambda_grid[lo + 1];
    const double fa = F[lo];
    const double fb = F[lo + 1];
    auto interp = [&](double x) {
        const double t = (x - lambda_grid[lo]) / (lambda_grid[lo + 1] - lambda_grid[lo]);
        return fa + t * (fb - fa);
    };
    double ga = fa - target;
    while (b - a > 1e-6) {
        const double m = 0.5 * (a + b);
        const double gm = interp(m) - target;
        if (ga * gm <= 0.0) {
            b = m;
        } else {
            a = m;
            ga = gm;
        }
    }
    return 0.5 * (a + b);
}

double r_at_mean_free_path(const ModelParams& p) {
    p.validate();
    return delta_v_exact(p) / (2.0 * p.Gamma * catastrophe_exponent(p));
}

AdiabaticityReport adiabaticity_condition(const Trace& trace, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw DomainError("adiabaticity_condition: epsilon outside (0,1)");
    }
    AdiabaticityReport rep;
    rep.max_violation = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const double excess = 1.0 - epsilon - trace.C[i] - trace.g[i];
        if (excess > rep.max_violation) rep.max_violation = excess;
        if (excess > 0.0 && !rep.violated) {
            rep.violated = true;
            rep.first_violation_lambda = trace.lambda_grid[i];
        }
    }
    return rep;
}

double max_driving_rate(const ModelParams& p, double epsilon, double multiplicative_constant) {
    p.validate();
    const double e1 = std::exp(-1.0);
    if (!(epsilon > 0.0 && epsilon < 1.0 - e1)) {
        throw DomainError("max_driving_rate: epsilon outside (0, 1 - 1/e)");
    }
    const double ratio = delta_v_exact(p) / catastrophe_exponent(p);
    return 0.5 * ratio * multiplicative_constant / (1.0 - epsilon - e1);
}

double max_driving_rate(const ModelParams& p, double epsilon) {
    return max_driving_rate(p, epsilon, breakdown_constant_m());
}

}  // namespace fidelim
