#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fidelim/metrics.hpp"
#include "fidelim/rng.hpp"
#include "oracles.hpp"

using namespace fidelim;

namespace {

ModelParams paper_params(std::size_t N) {
    ModelParams p;
    p.J = 0.4;
    p.U = 0.4;
    p.E_R = 1.0;
    p.Gamma = 0.7;
    p.N = N;
    return p;
}

Eigen::VectorXcd make_state(std::initializer_list<Complex> values) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (const Complex& c : values) v[i++] = c;
    return v;
}

}  // namespace

TEST_CASE("fidelity basics") {
    const auto e0 = make_state({1.0, 0.0});
    const auto e1 = make_state({0.0, 1.0});
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const auto plus = make_state({inv_sqrt2, inv_sqrt2});

    CHECK(fidelity(e0, e0) == 1.0);
    CHECK(fidelity(e0, e1) == 0.0);
    CHECK(fidelity(e0, plus) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(fidelity(plus, e0) == doctest::Approx(0.5).epsilon(1e-14));  // symmetric

    CHECK_THROWS_AS(fidelity(make_state({0.5, 0.0}), e0), NormError);
}

TEST_CASE("bures angle basics") {
    const auto e0 = make_state({1.0, 0.0});
    const auto e1 = make_state({0.0, 1.0});
    CHECK(bures_angle(e0, e0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(bures_angle(e0, e1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(bures_angle_from_fidelity(0.5) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("Angle range enforcement") {
    CHECK_NOTHROW(Angle(0.0));
    CHECK_NOTHROW(Angle(std::numbers::pi / 2.0));
    CHECK(Angle(-1e-13).value == 0.0);  // rounding dust clamps
    CHECK_THROWS_AS(Angle(2.0), DomainError);
    CHECK_THROWS_AS(Angle(-0.5), DomainError);
}

TEST_CASE("theta from the evolution record") {
    const ModelParams p = paper_params(4);
    const DriveProtocol protocol = DriveProtocol::uniform(0.4, 16);
    IntegratorConfig cfg;
    cfg.base_steps = 2048;
    cfg.max_halvings = 0;
    const EvolutionRecord rec = evolve_many_body(p, protocol, cfg);

    CHECK(theta_at(rec, 0).value == 0.0);
    CHECK(theta_lambda(rec, 0.0).value == 0.0);
    CHECK(theta_lambda(rec, protocol.grid[7]).value ==
          doctest::Approx(theta_at(rec, 7).value).epsilon(1e-15));
    CHECK_THROWS_AS(theta_lambda(rec, 0.123456), DomainError);

    // arccos of the recorded overlap magnitude (theta_at is the well-conditioned
    // equivalent, so agreement is limited by the acos noise floor near 1)
    for (std::size_t i = 0; i < protocol.grid.size(); ++i) {
        const double mag = std::exp(rec.log_overlap_initial[i]);
        CHECK(std::abs(theta_at(rec, i).value - std::acos(mag)) < 1e-7);
    }

    // fully departed state
    EvolutionRecord gone = rec;
    gone.log_overlap_initial.back() = -745.0;  // overlap magnitude underflows to 0
    CHECK(theta_at(gone, gone.lambda_grid.size() - 1).value ==
          doctest::Approx(std::numbers::pi / 2).epsilon(1e-14));
}

TEST_CASE("theta equals the dense Bures angle for N <= 3") {
    ModelParams p = paper_params(3);
    p.J = 0.5;
    p.U = 0.35;
    const DriveProtocol protocol = DriveProtocol::uniform(0.7, 8);
    IntegratorConfig cfg;
    cfg.base_steps = 4096;
    cfg.max_halvings = 0;
    cfg.force_per_mode_sweep = true;
    const EvolutionRecord rec = evolve_many_body(p, protocol, cfg);

    const DenseModel model(p);
    const auto ham = [&](double lambda) { return model.hamiltonian(lambda).matrix(); };
    const auto dense =
        oracle::propagate_dense(ham, model.ground_state(0.0), protocol.grid, 512, p.Gamma);

    for (std::size_t i = 0; i < protocol.grid.size(); ++i) {
        const double d = bures_angle(dense[i], dense[0]);
        const double theta_dense = 0.5 * std::numbers::pi * d;
        CHECK(theta_at(rec, i).value == doctest::Approx(theta_dense).epsilon(5e-7));
    }
}

TEST_CASE("delta_e0: identity route, direct route, dense moments") {
    const ModelParams p1000 = paper_params(1000);
    CHECK(delta_e0(p1000, 0.0) == 0.0);
    CHECK(delta_e0(p1000, 0.1) == doctest::Approx(0.1 * std::sqrt(1000.0)).epsilon(1e-12));
    CHECK(delta_e0(p1000, 0.1) == doctest::Approx(3.16228).epsilon(1e-5));

    for (auto [J, U] : {std::pair{0.4, 0.4}, std::pair{0.6, 0.2}}) {
        ModelParams p = paper_params(32);
        p.J = J;
        p.U = U;
        for (double lambda : {0.05, 0.4, 1.2}) {
            const double via_identity = delta_e0(p, lambda);
            const double via_moments = delta_e0_direct(p, lambda);
            CHECK(std::abs(via_identity - via_moments) <=
                  1e-10 * std::max(1.0, via_identity));
        }
    }

    // dense cross-check at N = 2
    const ModelParams p2 = paper_params(2);
    const DenseModel m(p2);
    const Eigen::VectorXcd gs = m.ground_state(0.0);
    for (double lambda : {0.3, 0.9}) {
        const Eigen::MatrixXcd H = m.hamiltonian(lambda).matrix();
        const Eigen::VectorXcd hpsi = H * gs;
        const double mean = gs.dot(hpsi).real();
        const double dense_de = std::sqrt(hpsi.squaredNorm() - mean * mean);
        CHECK(delta_e0(p2, lambda) == doctest::Approx(dense_de).epsilon(1e-10));
    }
}

TEST_CASE("qsl trace closed form, clipping, quadrature") {
    const ModelParams p = paper_params(1000);
    const DriveProtocol protocol = DriveProtocol::uniform(0.3, 2048);
    const QslTrace qsl = qsl_trace(p, protocol);

    CHECK(qsl.R.front() == 0.0);
    CHECK(qsl.R_tilde.front() == 0.0);
    CHECK(qsl.R_tilde2.front() == 0.0);

    CHECK(qsl.R.back() == doctest::Approx(std::sqrt(1000.0) * 0.09 / 1.4).epsilon(1e-12));
    CHECK(qsl.R.back() == doctest::Approx(2.0329).epsilon(1e-4));
    CHECK(qsl.R_tilde.back() == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
    CHECK(qsl.R_tilde2.back() == doctest::Approx(std::numbers::pi / 4).epsilon(1e-15));

    // R~~ <= R~ <= R pointwise
    for (std::size_t i = 0; i < qsl.R.size(); ++i) {
        CHECK(qsl.R_tilde2[i] <= qsl.R_tilde[i]);
        CHECK(qsl.R_tilde[i] <= qsl.R[i] + 1e-15);
    }

    // trapezoid of delta_e0 / Gamma reproduces the closed form
    double integral = 0.0;
    for (std::size_t i = 1; i < protocol.grid.size(); ++i) {
        const double h = protocol.grid[i] - protocol.grid[i - 1];
        integral += 0.5 * h * (delta_e0(p, protocol.grid[i - 1]) + delta_e0(p, protocol.grid[i])) /
                    p.Gamma;
    }
    CHECK(integral == doctest::Approx(qsl.R.back()).epsilon(1e-8));
}

TEST_CASE("decomposition identity: eigenstate and textbook cases") {
    Eigen::MatrixXcd sz(2, 2);
    sz << 1.0, 0.0, 0.0, -1.0;
    const DenseHermitian A(sz);

    const DecompositionReport trivial = check_decomposition(A, make_state({1.0, 0.0}));
    CHECK(trivial.eigenstate_branch);
    CHECK(trivial.pass());

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const DecompositionReport plus =
        check_decomposition(A, make_state({inv_sqrt2, inv_sqrt2}));
    CHECK_FALSE(plus.eigenstate_branch);
    CHECK(plus.delta_a == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(plus.pass());

    CHECK_THROWS_AS(check_decomposition(
                        DenseHermitian(Eigen::MatrixXcd::Identity(128, 128)),
                        Eigen::VectorXcd::Unit(128, 0).eval()),
                    DimensionError);
}

TEST_CASE("decomposition identity on seeded random pairs") {
    for (std::size_t t = 0; t < 1000; ++t) {
        rng::Gaussian gen(rng::derive_seed(99, t));
        const int dim = 8;
        const DenseHermitian A(rng::random_hermitian(gen, dim));
        const Eigen::VectorXcd psi = rng::random_state(gen, dim);
        const DecompositionReport rep = check_decomposition(A, psi);
        CHECK(rep.pass(1e-10));
    }
}

TEST_CASE("both speed-limit variants on the driven model") {
    const ModelParams p = paper_params(1000);
    const DriveProtocol protocol = DriveProtocol::uniform(0.3, 256);
    IntegratorConfig cfg;
    cfg.base_steps = 4096;
    cfg.tol = 1e-10;
    cfg.max_halvings = 12;
    const EvolutionRecord rec = evolve_many_body(p, protocol, cfg);

    const QslVariantsReport rep = check_qsl_both_variants(p, rec);
    CHECK(rep.min_slack_initial >= 0.0);
    CHECK(rep.min_slack_instantaneous >= -1e-9);
    CHECK(rep.pass());

    // theta <= R~ pointwise, with strictly positive slack away from lambda = 0
    const QslTrace qsl = qsl_trace(p, protocol);
    for (std::size_t i = 0; i < protocol.grid.size(); ++i) {
        CHECK(theta_at(rec, i).value <= qsl.R_tilde[i]);
        if (i > 0) CHECK(theta_at(rec, i).value < qsl.R_tilde[i]);
    }
}

TEST_CASE("time-independent Hamiltonian: both variants coincide") {
    rng::Gaussian gen(4242);
    const int dim = 4;
    const Eigen::MatrixXcd H = rng::random_hermitian(gen, dim);
    const Eigen::VectorXcd psi0 = rng::random_state(gen, dim);

    const Eigen::VectorXcd hpsi = H * psi0;
    const double mean = psi0.dot(hpsi).real();
    const double de = std::sqrt(hpsi.squaredNorm() - mean * mean);

    // evolve under the frozen H on a short grid (Gamma = 1)
    const std::vector<double> grid = DriveProtocol::uniform(0.2, 32).grid;
    const auto ham = [&](double) { return H; };
    const auto states = oracle::propagate_dense(ham, psi0, grid, 64, 1.0);

    EvolutionRecord rec;
    rec.lambda_grid = grid;
    rec.log_overlap_instantaneous.assign(grid.size(), 0.0);
    rec.log_overlap_initial.resize(grid.size());
    rec.energy_mean.assign(grid.size(), mean);
    rec.energy_var.assign(grid.size(), de * de);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Complex ov = psi0.dot(states[i]);
        const double s2 = std::min(1.0, (states[i] - psi0 * ov).squaredNorm());
        rec.log_overlap_initial[i] =
            s2 <= 0.5 ? 0.5 * std::log1p(-s2) : std::min(0.0, std::log(std::abs(ov)));
    }

    const std::vector<double> de0(grid.size(), de);
    const QslVariantsReport rep = check_qsl_both_variants(rec, de0, 1.0);
    CHECK(rep.pass(0.0));  // exact inequality, no integrator error budget
    CHECK(rep.min_slack_initial ==
          doctest::Approx(rep.min_slack_instantaneous).epsilon(1e-12));
}

TEST_CASE("bures triangle inequality on seeded triplets") {
    for (std::size_t t = 0; t < 10000; ++t) {
        rng::Gaussian gen(rng::derive_seed(7, t));
        const int dim = 2 + static_cast<int>(t % 7);
        const Eigen::VectorXcd a = rng::random_state(gen, dim);
        const Eigen::VectorXcd b = rng::random_state(gen, dim);
        const Eigen::VectorXcd c = rng::random_state(gen, dim);
        CHECK(bures_angle(b, c) <= bures_angle(a, b) + bures_angle(a, c) + 1e-12);
    }
}
