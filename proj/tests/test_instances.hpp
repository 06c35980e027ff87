#pragma once

// Randomized periodic desk instances for property-style tests: exponentially
// stable plants paired with neutrally stable generators and filters.

#include <random>

#include "hymor/linalg.hpp"
#include "hymor/systems.hpp"
#include "test_oracles.hpp"

namespace instances {

using namespace hymor;

/// Exponentially stable hybrid plant for a periodic domain of period T:
/// rho(A_d e^{A_c T}) < 1 and A_d invertible.
inline LinearHybridSystem random_stable_plant(Eigen::Index n, Eigen::Index m, Eigen::Index p, double period,
                                              std::mt19937_64& rng) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        Mat a_c = oracles::random_mat(n, n, rng);
        a_c -= (spectral_abscissa(a_c) + 0.3 + 0.7 * std::uniform_real_distribution<>(0, 1)(rng)) *
               Mat::Identity(n, n);
        Mat a_d = oracles::random_mat(n, n, rng);
        const double rho = spectral_radius(a_d * expm(a_c, period));
        if (rho > 0.75) a_d *= 0.75 / rho;
        if (!is_invertible(a_d, 1e-6)) continue;
        Mat b_c = oracles::random_mat(n, m, rng);
        Mat b_d = oracles::random_mat(n, m, rng);
        Mat c = oracles::random_mat(p, n, rng);
        return LinearHybridSystem(a_c, a_d, b_c, b_d, c);
    }
    throw std::runtime_error("failed to draw a stable plant");
}

/// Neutrally stable generator: sigma(J e^{ST}) on the unit circle by making S
/// skew-symmetric and J a rotation (nu in {1, 2}).
inline SignalGenerator random_neutral_generator(Eigen::Index nu, Eigen::Index m, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Mat s = Mat::Zero(nu, nu), j = Mat::Identity(nu, nu);
    if (nu == 2) {
        const double w = 0.5 + 0.5 * std::abs(unif(rng));
        s << 0.0, w, -w, 0.0;
        const double th = unif(rng);
        j << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    } else {
        j(0, 0) = unif(rng) > 0 ? 1.0 : -1.0;
    }
    for (int attempt = 0; attempt < 50; ++attempt) {
        Mat l_c = oracles::random_mat(m, nu, rng);
        Mat l_d = oracles::random_mat(m, nu, rng);
        SignalGenerator gen(s, j, l_c, l_d, oracles::random_mat(nu, 1, rng));
        if (gen.observable_flow && gen.observable_jump) return gen;
    }
    throw std::runtime_error("failed to draw an observable generator");
}

/// Neutrally stable filter: Q_c skew-symmetric, Q_d a rotation.
inline HybridFilter random_neutral_filter(Eigen::Index nu, Eigen::Index p, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Mat q_c = Mat::Zero(nu, nu), q_d = Mat::Identity(nu, nu);
    if (nu == 2) {
        const double w = 0.5 + 0.5 * std::abs(unif(rng));
        q_c << 0.0, w, -w, 0.0;
        const double th = unif(rng);
        q_d << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    } else {
        q_d(0, 0) = unif(rng) > 0 ? 1.0 : -1.0;
    }
    for (int attempt = 0; attempt < 50; ++attempt) {
        Mat r_c = oracles::random_mat(nu, p, rng);
        Mat r_d = oracles::random_mat(nu, p, rng);
        HybridFilter filt(q_c, q_d, r_c, r_d, Vec::Zero(nu));
        if (filt.reachable_flow && filt.reachable_jump) return filt;
    }
    throw std::runtime_error("failed to draw a reachable filter");
}

}  // namespace instances
