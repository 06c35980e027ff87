#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "hymor/types.hpp"

namespace hymor {

struct OdeOptions {
    double abs_tol = 1e-9;
    double rel_tol = 1e-7;
    double h_init = 1e-3;
    double h_min = 1e-14;
    size_t max_steps = 50'000'000;
};

/// Adaptive Dormand-Prince 5(4) integration of a matrix-valued ODE from t0 to
/// t1 (t1 > t0). The right-hand side is f(t, Y).
class DormandPrince54 {
public:
    using Rhs = std::function<Mat(double, const Mat&)>;

    explicit DormandPrince54(OdeOptions opts = {}) : opts_(opts) {}

    Mat integrate(const Rhs& f, double t0, double t1, Mat y) const {
        if (!(t1 >= t0)) throw ValidationError("ode: t1 must be >= t0");
        if (t1 == t0) return y;
        double t = t0;
        double h = std::min(opts_.h_init, t1 - t0);
        Mat k1 = f(t, y);
        size_t steps = 0;
        while (t < t1) {
            if (++steps > opts_.max_steps) throw NumericError("ode: step limit exceeded");
            const double gap = t1 - t;
            if (gap <= opts_.h_min) break;  // within rounding of the endpoint
            const bool capped = h >= gap;
            const double hs = capped ? gap : h;

            const Mat k2 = f(t + c2 * hs, y + hs * (a21 * k1));
            const Mat k3 = f(t + c3 * hs, y + hs * (a31 * k1 + a32 * k2));
            const Mat k4 = f(t + c4 * hs, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
            const Mat k5 = f(t + c5 * hs, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            const Mat k6 = f(t + hs, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            const Mat y5 = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            const Mat k7 = f(t + hs, y5);
            const Mat err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

            double scale_err = 0.0;
            for (Eigen::Index r = 0; r < y.rows(); ++r)
                for (Eigen::Index c = 0; c < y.cols(); ++c) {
                    const double sc =
                        opts_.abs_tol + opts_.rel_tol * std::max(std::abs(y(r, c)), std::abs(y5(r, c)));
                    scale_err = std::max(scale_err, std::abs(err(r, c)) / sc);
                }

            const double factor =
                (scale_err == 0.0) ? 5.0 : std::clamp(0.9 * std::pow(scale_err, -0.2), 0.2, 5.0);
            if (scale_err <= 1.0) {
                t += hs;
                if (t1 - t <= opts_.h_min) t = t1;
                y = y5;
                k1 = k7;  // FSAL
                // an endpoint-capped step must not throttle the next interval
                h = capped ? std::max(h, hs * factor) : hs * factor;
            } else {
                h = hs * factor;
                if (h < opts_.h_min)
                    throw NumericError("ode: step size underflow at t = " + std::to_string(t));
            }
        }
        return y;
    }

    /// Integrates and records the state at every grid point (grid increasing,
    /// grid.front() = t0 carries y0).
    std::vector<Mat> integrate_grid(const Rhs& f, const std::vector<double>& grid, const Mat& y0) const {
        if (grid.empty()) throw ValidationError("ode: empty sample grid");
        std::vector<Mat> out;
        out.reserve(grid.size());
        out.push_back(y0);
        Mat y = y0;
        for (size_t i = 1; i < grid.size(); ++i) {
            y = integrate(f, grid[i - 1], grid[i], y);
            out.push_back(y);
        }
        return out;
    }

private:
    OdeOptions opts_;

    // Dormand-Prince coefficients.
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    // 5th-minus-4th-order error weights.
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
};

}  // namespace hymor
