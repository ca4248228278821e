// scaling.hpp — adiabaticity-breakdown analysis: the adiabatic mean free path
// (sweep distance where F drops to 1/e), the necessary adiabaticity condition
// 1 - eps - C <= g, and the size-dependent driving-rate ceiling with its
// multiplicative constant.

#pragma once

#include <cstddef>
#include <vector>

#include "fidelim/bounds.hpp"
#include "fidelim/model.hpp"

namespace fidelim {

// M = e^{-1/2} (1 - 1/e)^{1/2} + (1 - 1/e - 1/e^2)^{1/2}, about 1.18706.
double breakdown_constant_m();

struct MeanFreePath {
    double asymptotic{0.0};  // C_N^{-1/2}
    double numeric{0.0};     // root of F(lambda) = 1/e on a simulated trace
};

double mean_free_path_asymptotic(const ModelParams& p);

// Bisection on the linearly interpolated F(lambda) to |bracket| <= 1e-6;
// throws NoCrossingError when F never reaches 1/e on the grid.
double mean_free_path_numeric(const std::vector<double>& lambda_grid,
                              const std::vector<double>& F);

// R evaluated at the asymptotic mean free path: deltaV_N / (2 Gamma C_N);
// decays like N^{-1/2} for this model.
double r_at_mean_free_path(const ModelParams& p);

// Necessary condition 1 - eps - C(lambda) <= g(lambda), checked per grid point.
struct AdiabaticityReport {
    bool violated{false};
    double first_violation_lambda{0.0};
    double max_violation{0.0};  // max over grid of (1 - eps - C - g)
};

AdiabaticityReport adiabaticity_condition(const Trace& trace, double epsilon);

// Driving-rate ceiling 0.5 * (deltaV_N / C_N) * M / (1 - eps - 1/e).
// Requires 0 < eps < 1 - 1/e. The older envelope corresponds to
// multiplicative_constant = 1.
double max_driving_rate(const ModelParams& p, double epsilon);
double max_driving_rate(const ModelParams& p, double epsilon, double multiplicative_constant);

struct ScalingReport {
    std::size_t N{0};
    double C_N{0.0};
    double deltaV_N{0.0};
    double lambda_star_asymptotic{0.0};
    double lambda_star_numeric{0.0};
    double R_at_lambda_star{0.0};
    double Gamma_N_bound{0.0};
    double epsilon{0.0};
};

}  // namespace fidelim
