#pragma once

// Test-only reference implementations, kept independent of the library's
// solution paths so the two sides of each check cannot share a bug.

#include <complex>
#include <random>
#include <vector>

#include "hymor/types.hpp"

namespace oracles {

using hymor::Mat;

/// Matrix exponential by argument scaling, plain Taylor summation and repeated
/// squaring. Slow but independent of the Pade-based production path.
inline Mat expm_taylor_squaring(const Mat& a, double t) {
    const Eigen::Index n = a.rows();
    Mat at = a * t;
    int squarings = 0;
    while (at.norm() > 0.25) {
        at *= 0.5;
        ++squarings;
    }
    Mat sum = Mat::Identity(n, n);
    Mat term = Mat::Identity(n, n);
    for (int k = 1; k <= 30; ++k) {
        term = term * at / static_cast<double>(k);
        sum += term;
        if (term.norm() < 1e-18 * sum.norm()) break;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

/// Characteristic polynomial coefficients by the Faddeev-LeVerrier recursion:
/// p(x) = x^n + c[1] x^{n-1} + ... + c[n].
inline std::vector<double> char_poly(const Mat& a) {
    const Eigen::Index n = a.rows();
    std::vector<double> c(static_cast<size_t>(n) + 1, 0.0);
    c[0] = 1.0;
    Mat m = Mat::Zero(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        m = a * m + c[static_cast<size_t>(k - 1)] * Mat::Identity(n, n);
        c[static_cast<size_t>(k)] = -(a * m).trace() / static_cast<double>(k);
    }
    return c;
}

/// All polynomial roots by Durand-Kerner iteration.
inline std::vector<std::complex<double>> poly_roots(const std::vector<double>& coeffs) {
    using C = std::complex<double>;
    const size_t n = coeffs.size() - 1;
    auto eval = [&](C x) {
        C v = coeffs[0];
        for (size_t i = 1; i <= n; ++i) v = v * x + coeffs[i];
        return v;
    };
    std::vector<C> r(n);
    for (size_t i = 0; i < n; ++i) r[i] = std::pow(C(0.4, 0.9), static_cast<double>(i + 1));
    for (int it = 0; it < 500; ++it) {
        double move = 0.0;
        for (size_t i = 0; i < n; ++i) {
            C denom(1.0, 0.0);
            for (size_t k = 0; k < n; ++k)
                if (k != i) denom *= (r[i] - r[k]);
            const C delta = eval(r[i]) / denom;
            r[i] -= delta;
            move = std::max(move, std::abs(delta));
        }
        if (move < 1e-14) break;
    }
    return r;
}

/// Spectral radius from the characteristic polynomial roots only.
inline double spectral_radius_charpoly(const Mat& a) {
    double rho = 0.0;
    for (const auto& r : poly_roots(char_poly(a))) rho = std::max(rho, std::abs(r));
    return rho;
}

/// Composite-Simpson quadrature of a matrix-valued integrand on [a, b].
template <typename F>
Mat simpson(F&& f, double a, double b, int panels = 2000) {
    const double h = (b - a) / (2 * panels);
    Mat sum = f(a) + f(b);
    for (int i = 1; i < 2 * panels; ++i) sum += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
    return sum * (h / 3.0);
}

inline Mat random_mat(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> unif(-scale, scale);
    Mat m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = unif(rng);
    return m;
}

}  // namespace oracles
