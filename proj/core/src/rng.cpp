#include "fidelim/rng.hpp"

#include <cmath>
#include <numbers>

namespace fidelim::rng {

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

double Gaussian::operator()() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // uniforms in (0,1]; u1 > 0 keeps the log finite
    const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
}

Eigen::VectorXcd random_state(Gaussian& g, int dim) {
    Eigen::VectorXcd v(dim);
    for (int i = 0; i < dim; ++i) {
        const double re = g();
        const double im = g();
        v[i] = std::complex<double>(re, im);
    }
    v.normalize();
    return v;
}

Eigen::MatrixXcd random_hermitian(Gaussian& g, int dim) {
    Eigen::MatrixXcd m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            const double re = g();
            const double im = g();
            m(r, c) = std::complex<double>(re, im);
        }
    }
    return 0.5 * (m + m.adjoint()).eval();
}

}  // namespace fidelim::rng
