#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "hymor/ode.hpp"
#include "hymor/signal.hpp"
#include "hymor/systems.hpp"

namespace hymor {

/// Exogenous input: u_c drives the flow, u_d is consumed by jump maps.
struct InputSignal {
    std::function<Vec(double)> u_c;
    std::function<Vec(double)> u_d;

    static InputSignal zero(Eigen::Index m) {
        auto z = [m](double) { return Vec::Zero(m).eval(); };
        return InputSignal{z, z};
    }
};

struct SampleSpec {
    int min_points_per_interval = 50;
    std::vector<double> extra_times;  // merged into the grid of the interval containing them
};

/// Uniform grid over one flow interval (endpoints included) merged with any
/// requested extra sample times. Shared by simulation and steady-state solvers
/// so interconnected signals land on identical grids.
inline std::vector<double> build_interval_grid(const HybridTimeDomain::Interval& iv, const SampleSpec& spec) {
    const int n = std::max(2, spec.min_points_per_interval);
    std::vector<double> grid;
    grid.reserve(static_cast<size_t>(n) + spec.extra_times.size());
    for (int i = 0; i < n; ++i)
        grid.push_back(iv.t_begin + (iv.t_end - iv.t_begin) * static_cast<double>(i) / (n - 1));
    grid.back() = iv.t_end;
    for (double t : spec.extra_times)
        if (t > iv.t_begin + 1e-12 && t < iv.t_end - 1e-12) grid.push_back(t);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               grid.end());
    return grid;
}

struct SimulationResult {
    HybridSignal state;
    HybridSignal output;
};

/// Integrates the plant over the hybrid time domain: adaptive flow integration
/// interval by interval, jump map applied exactly at each jump instant using
/// the pre-jump state.
inline SimulationResult simulate(const LinearHybridSystem& sys, const HybridTimeDomain& domain,
                                 const InputSignal& input, const Vec& x0, const SampleSpec& spec = {},
                                 const OdeOptions& ode = {}) {
    if (x0.size() != sys.n()) throw DimensionError("simulate: x0 length must match state dimension");
    DormandPrince54 integrator(ode);

    std::vector<HybridSignal::Segment> segs;
    std::optional<Mat> final_jump;
    Vec x = x0;
    for (const auto& iv : domain.intervals()) {
        const auto grid = build_interval_grid(iv, spec);
        auto rhs = [&](double t, const Mat& y) -> Mat { return sys.A_c * y + sys.B_c * input.u_c(t); };
        std::vector<Mat> vals;
        try {
            vals = integrator.integrate_grid(rhs, grid, x);
        } catch (const std::exception& e) {
            throw NumericError("simulate: failure on interval j=" + std::to_string(iv.j) + ", t in [" +
                               std::to_string(iv.t_begin) + ", " + std::to_string(iv.t_end) + "]: " + e.what());
        }
        segs.push_back(HybridSignal::Segment{iv.j, grid, vals});
        x = vals.back();
        if (iv.ends_with_jump) x = sys.A_d * x + sys.B_d * input.u_d(iv.t_end);
    }
    if (domain.intervals().back().ends_with_jump) final_jump = x;

    HybridSignal state("x", std::move(segs), std::move(final_jump));
    HybridSignal output =
        transform_signal(state, "y", [&](double, int, const Mat& v) -> Mat { return sys.C * v; });
    return SimulationResult{std::move(state), std::move(output)};
}

struct DirectInterconnectionResult {
    HybridSignal y;      // plant output
    HybridSignal omega;  // generator state
    HybridSignal x;      // plant state
};

/// Direct interconnection: the generator drives the plant (u_c = L_c omega
/// during flow, u_d = L_d omega at jumps, pre-jump omega). Realized as one
/// augmented autonomous hybrid system so both trajectories share a grid.
inline DirectInterconnectionResult simulate_interconnection_direct(const LinearHybridSystem& sys,
                                                                   const SignalGenerator& gen,
                                                                   const HybridTimeDomain& domain, const Vec& x0,
                                                                   const SampleSpec& spec = {},
                                                                   const OdeOptions& ode = {}) {
    if (gen.m() != sys.m())
        throw DimensionError("direct interconnection: generator output count must match plant input count");
    const Eigen::Index n = sys.n(), nu = gen.nu();

    Mat ac = Mat::Zero(n + nu, n + nu), ad = Mat::Zero(n + nu, n + nu);
    ac.topLeftCorner(n, n) = sys.A_c;
    ac.topRightCorner(n, nu) = sys.B_c * gen.L_c;
    ac.bottomRightCorner(nu, nu) = gen.S;
    ad.topLeftCorner(n, n) = sys.A_d;
    ad.topRightCorner(n, nu) = sys.B_d * gen.L_d;
    ad.bottomRightCorner(nu, nu) = gen.J;
    LinearHybridSystem aug(ac, ad, Mat::Zero(n + nu, 0), Mat::Zero(n + nu, 0), Mat::Zero(0, n + nu));

    Vec z0(n + nu);
    z0 << x0, gen.omega0;
    auto res = simulate(aug, domain, InputSignal::zero(0), z0, spec, ode);

    auto x_sig = transform_signal(res.state, "x",
                                  [&](double, int, const Mat& v) -> Mat { return v.topRows(n); });
    auto om_sig = transform_signal(res.state, "omega",
                                   [&](double, int, const Mat& v) -> Mat { return v.bottomRows(nu); });
    auto y_sig = transform_signal(x_sig, "y", [&](double, int, const Mat& v) -> Mat { return sys.C * v; });
    return DirectInterconnectionResult{std::move(y_sig), std::move(om_sig), std::move(x_sig)};
}

struct SwappedInterconnectionResult {
    HybridSignal varpi;  // filter state
    HybridSignal y;      // plant output driving the filter
    HybridSignal x;      // plant state
};

/// Swapped interconnection: the plant drives the filter (eta_c = y during
/// flow; at jumps the filter consumes the pre-jump output, eta_d = y(t_{j+1}, j)).
inline SwappedInterconnectionResult simulate_interconnection_swapped(
    const LinearHybridSystem& sys, const HybridFilter& filt, const HybridTimeDomain& domain, const Vec& x0,
    const Vec& varpi0, const InputSignal& input, const SampleSpec& spec = {}, const OdeOptions& ode = {},
    std::vector<std::string>* warnings = nullptr) {
    if (filt.p() != sys.p())
        throw DimensionError("swapped interconnection: filter input count must match plant output count");
    const Eigen::Index n = sys.n(), nu = filt.nu(), m = sys.m();

    if (warnings) {
        const Vec u_a = input.u_c(domain.t_start());
        const Vec u_b = input.u_c(domain.t_end());
        if (u_b.norm() > u_a.norm())
            warnings->push_back("swapped interconnection: input norm grows over the window; the steady-state "
                                "characterisation assumes exponentially decaying inputs");
    }

    Mat ac = Mat::Zero(n + nu, n + nu), ad = Mat::Zero(n + nu, n + nu);
    ac.topLeftCorner(n, n) = sys.A_c;
    ac.bottomLeftCorner(nu, n) = filt.R_c * sys.C;
    ac.bottomRightCorner(nu, nu) = filt.Q_c;
    ad.topLeftCorner(n, n) = sys.A_d;
    ad.bottomLeftCorner(nu, n) = filt.R_d * sys.C;  // consumes pre-jump y = C x
    ad.bottomRightCorner(nu, nu) = filt.Q_d;
    Mat bc = Mat::Zero(n + nu, m), bd = Mat::Zero(n + nu, m);
    bc.topRows(n) = sys.B_c;
    bd.topRows(n) = sys.B_d;
    LinearHybridSystem aug(ac, ad, bc, bd, Mat::Zero(0, n + nu));

    Vec z0(n + nu);
    z0 << x0, varpi0;
    auto res = simulate(aug, domain, input, z0, spec, ode);

    auto x_sig = transform_signal(res.state, "x",
                                  [&](double, int, const Mat& v) -> Mat { return v.topRows(n); });
    auto w_sig = transform_signal(res.state, "varpi",
                                  [&](double, int, const Mat& v) -> Mat { return v.bottomRows(nu); });
    auto y_sig = transform_signal(x_sig, "y", [&](double, int, const Mat& v) -> Mat { return sys.C * v; });
    return SwappedInterconnectionResult{std::move(w_sig), std::move(y_sig), std::move(x_sig)};
}

/// Hybrid system with state-dependent-free but time-varying flow/jump maps,
/// for trajectories whose coefficients are themselves hybrid signals (reduced
/// models with time-varying gains, auxiliary comparison dynamics, ...).
struct TvHybridSystem {
    Eigen::Index state_rows = 0;
    Eigen::Index state_cols = 1;
    std::function<Mat(double t, int j, const Mat& x)> flow_rhs;
    std::function<Mat(double t_jump, int j_pre, const Mat& x_pre)> jump_map;
};

inline HybridSignal simulate_tv(const TvHybridSystem& sys, const HybridTimeDomain& domain, const Mat& x0,
                                const std::string& name = "x", const SampleSpec& spec = {},
                                const OdeOptions& ode = {}) {
    if (x0.rows() != sys.state_rows || x0.cols() != sys.state_cols)
        throw DimensionError("simulate_tv: initial state has the wrong shape");
    DormandPrince54 integrator(ode);
    std::vector<HybridSignal::Segment> segs;
    std::optional<Mat> final_jump;
    Mat x = x0;
    for (const auto& iv : domain.intervals()) {
        const auto grid = build_interval_grid(iv, spec);
        auto rhs = [&](double t, const Mat& y) -> Mat { return sys.flow_rhs(t, iv.j, y); };
        std::vector<Mat> vals;
        try {
            vals = integrator.integrate_grid(rhs, grid, x);
        } catch (const std::exception& e) {
            throw NumericError("simulate_tv: failure on interval j=" + std::to_string(iv.j) + ": " + e.what());
        }
        segs.push_back(HybridSignal::Segment{iv.j, grid, vals});
        x = vals.back();
        if (iv.ends_with_jump) x = sys.jump_map(iv.t_end, iv.j, x);
    }
    if (domain.intervals().back().ends_with_jump) final_jump = x;
    return HybridSignal(name, std::move(segs), std::move(final_jump));
}

/// Closed-form generator trajectory over a domain: omega per interval plus the
/// emitted inputs theta_c (flow) and theta_d (pre-jump, consumed by jump maps).
class GeneratorTrajectory {
public:
    GeneratorTrajectory(SignalGenerator gen, const HybridTimeDomain& domain)
        : gen_(std::move(gen)), domain_(&domain) {
        // anchor omega0 at t = 0 when the domain contains it, else at t_start
        const double t_anchor =
            (domain.t_start() <= 0.0 && domain.t_end() >= 0.0) ? 0.0 : domain.t_start();
        const auto& ivs = domain.intervals();
        starts_.resize(ivs.size());
        size_t k_anchor = 0;  // the interval starting at the anchor when the anchor is a jump instant
        while (k_anchor + 1 < ivs.size() && ivs[k_anchor].t_end <= t_anchor + 1e-12) ++k_anchor;
        starts_[k_anchor] = gen_.flow_state(gen_.omega0, ivs[k_anchor].t_begin - t_anchor);
        for (size_t k = k_anchor + 1; k < ivs.size(); ++k)
            starts_[k] = gen_.jump_state(
                gen_.flow_state(starts_[k - 1], ivs[k - 1].t_end - ivs[k - 1].t_begin));
        for (size_t k = k_anchor; k-- > 0;) {
            const Mat j_inv = gen_.J.inverse();
            starts_[k] = gen_.flow_state(j_inv * starts_[k + 1], ivs[k].t_begin - ivs[k].t_end);
        }
    }

    Vec omega(double t, int j) const {
        const auto& iv = domain_->interval_by_j(j);
        return gen_.flow_state(starts_[size_t(j - domain_->first_j())], t - iv.t_begin);
    }

    Vec theta_c(double t, int j) const { return gen_.L_c * omega(t, j); }

    /// Generator output consumed by jump maps at the jump ending interval j.
    Vec theta_d(int j_pre) const {
        const auto& iv = domain_->interval_by_j(j_pre);
        return gen_.L_d * omega(iv.t_end, j_pre);
    }

    InputSignal as_input() const {
        return InputSignal{[this](double t) { return theta_c(t, domain_->interval_at(t).j); },
                           [this](double t) {
                               // jump instants are interval ends: locate the pre-jump interval
                               for (const auto& iv : domain_->intervals())
                                   if (std::abs(iv.t_end - t) <= 1e-9) return theta_d(iv.j);
                               throw ValidationError("generator input requested at a non-jump time");
                           }};
    }

private:
    SignalGenerator gen_;
    const HybridTimeDomain* domain_;
    std::vector<Vec> starts_;
};

/// Least-squares slope of log(norm) against t. Samples at or below the floor
/// are ignored; returns NaN when fewer than two usable samples remain (e.g.
/// an identically zero error signal).
inline double log_norm_slope(const std::vector<std::pair<double, double>>& t_norm, double floor = 1e-280) {
    double st = 0, sl = 0, stt = 0, stl = 0;
    size_t k = 0;
    for (const auto& [t, v] : t_norm) {
        if (!(v > floor) || !std::isfinite(v)) continue;
        const double l = std::log(v);
        st += t;
        sl += l;
        stt += t * t;
        stl += t * l;
        ++k;
    }
    if (k < 2) return std::numeric_limits<double>::quiet_NaN();
    const double denom = k * stt - st * st;
    if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (k * stl - st * sl) / denom;
}

struct StabilityReport {
    double fitted_slope = std::numeric_limits<double>::quiet_NaN();
    double threshold = -1e-3;
    bool pass = false;
    int runs = 0;
};

/// Free-response stability estimate: simulate from a seeded random orthonormal
/// basis of initial conditions, fit log|x| against t per run, report the worst
/// fitted slope. Pass when the worst slope is below -eps_stab.
inline StabilityReport estimate_stability(const LinearHybridSystem& sys, const HybridTimeDomain& domain,
                                          unsigned seed = 42, double eps_stab = 1e-3,
                                          const SampleSpec& spec = {}, const OdeOptions& ode = {}) {
    const Eigen::Index n = sys.n();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Mat basis(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) basis(r, c) = unif(rng);
    basis = Eigen::HouseholderQR<Mat>(basis).householderQ() * Mat::Identity(n, n);

    StabilityReport rep;
    rep.threshold = -eps_stab;
    rep.runs = static_cast<int>(n);
    double worst = -std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < n; ++k) {
        auto res = simulate(sys, domain, InputSignal::zero(sys.m()), basis.col(k), spec, ode);
        std::vector<std::pair<double, double>> t_norm;
        for (const auto& s : res.state.segments())
            for (size_t i = 0; i < s.t.size(); ++i) t_norm.emplace_back(s.t[i], s.v[i].norm());
        worst = std::max(worst, log_norm_slope(t_norm));
    }
    rep.fitted_slope = worst;
    rep.pass = std::isfinite(worst) && worst < rep.threshold;
    return rep;
}

}  // namespace hymor
