// bounds.hpp — the three envelopes on |F - C|: the integrated-uncertainty
// bound R~, its sine sharpening, and the two-term refinement built from the
// auxiliary function g(C, theta). Also two-sided fidelity bands, band areas,
// the per-point inequality-chain verifier, and the randomized triplet check
// of the fidelity-difference lemma.

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fidelim/errors.hpp"
#include "fidelim/metrics.hpp"

namespace fidelim {

enum class BoundKind { Old, Sin, G };

// Auxiliary function g(C, theta) = sin^2(theta)|1 - 2C| + sin(2 theta) sqrt(C) sqrt(1-C).
// Its maximum over C at fixed theta is sin(theta), attained at C = (1 +/- sin theta)/2.
double g_of(double C, Angle theta);

// Row-level bound value from (C, R): Old -> min(R, pi/2); Sin -> sin of that;
// G -> sin^2(R~)|1-2C| + sin(2 R~~) sqrt(C)sqrt(1-C).
double bound_value(BoundKind kind, double C, double R);
double g1_of(double C, double R);
double g2_of(double C, double R);

// One lambda-grid record of everything the bounds need.
struct Trace {
    std::vector<double> lambda_grid;
    std::vector<double> F;
    std::vector<double> C;
    std::vector<double> theta;       // radians in [0, pi/2]
    std::vector<double> R;
    std::vector<double> R_tilde;
    std::vector<double> R_tilde2;
    std::vector<double> sinR_tilde;
    std::vector<double> g1;
    std::vector<double> g2;
    std::vector<double> g;

    std::size_t size() const { return lambda_grid.size(); }
    void validate() const;  // fidelities in [0,1], g = g1 + g2, matching lengths
};

struct BoundBand {
    std::vector<double> lambda_grid;
    std::vector<double> lower;
    std::vector<double> upper;
    double area{0.0};  // trapezoid integral of (upper - lower)
};

// lower = max(C - bound, 0), upper = min(C + bound, 1).
BoundBand band(const Trace& trace, BoundKind kind);

struct AreaRatios {
    double sin_over_old{0.0};  // green / blue
    double g_over_old{0.0};    // red / blue
};

// Ratios of band areas on the trace grid; throws DegenerateAreaError when the
// Old band has zero area.
AreaRatios area_ratios(const Trace& trace);

// ---- inequality chain --------------------------------------------------------

// Minimum slack over the grid for each link. Slacks are (rhs - lhs); the
// chain holds iff every slack >= -tol with tol covering integrator error.
struct ChainReport {
    double fc_le_g_pointwise{0.0};   // |F-C| <= g(C, theta)
    double gpt_le_sin_theta{0.0};    // g(C, theta) <= sin theta
    double fc_le_sin_theta{0.0};     // |F-C| <= sin theta
    double sin_theta_le_sin_rt{0.0}; // sin theta <= sin R~
    double sin_rt_le_rt{0.0};        // sin R~ <= R~
    double fc_le_g_lambda{0.0};      // |F-C| <= g(lambda)

    double min_slack() const;
    bool pass(double slack_tol = -1e-9) const { return min_slack() >= slack_tol; }
};

ChainReport verify_inequality_chain(const Trace& trace);

// ---- randomized triplet lemma ------------------------------------------------

// |F(psi1,psi2) - F(psi1,psi3)| <= sin((pi/2) D(psi2,psi3)) on seeded random
// triplets, plus the Bures-angle triangle inequality used in its proof.
struct LemmaReport {
    std::uint64_t seed{0};
    std::size_t trials{0};
    std::size_t violations{0};
    double min_slack_lemma{0.0};
    double min_slack_triangle{0.0};

    bool pass(double slack_tol = -1e-12) const {
        return violations == 0 && min_slack_lemma >= slack_tol &&
               min_slack_triangle >= slack_tol;
    }
};

LemmaReport lemma_s2_check(std::uint64_t seed, std::size_t trials,
                           const std::vector<int>& dims);

}  // namespace fidelim
