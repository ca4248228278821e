// rng.hpp — seeded deterministic sampling for property checks. Gaussian
// variates come from Box-Muller on raw mt19937_64 output so that reports are
// reproducible bit-for-bit across platforms and thread counts.

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace fidelim::rng {

// splitmix64; used to derive independent per-trial seeds from (seed, index).
std::uint64_t mix(std::uint64_t x);

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return mix(seed ^ mix(index + 0x9e3779b97f4a7c15ull));
}

class Gaussian {
public:
    explicit Gaussian(std::uint64_t seed) : gen_(seed) {}

    // standard normal variate
    double operator()();

private:
    std::mt19937_64 gen_;
    double spare_{0.0};
    bool has_spare_{false};
};

// Normalized complex Gaussian vector: Haar-uniform direction on the sphere.
Eigen::VectorXcd random_state(Gaussian& g, int dim);

// GUE-style random Hermitian matrix (M + M^dag)/2.
Eigen::MatrixXcd random_hermitian(Gaussian& g, int dim);

}  // namespace fidelim::rng
