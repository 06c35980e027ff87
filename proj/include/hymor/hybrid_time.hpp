#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "hymor/types.hpp"

namespace hymor {

/// Triangular wave (2/pi) int_0^t sign(sin(v)) dv - 1: period 2*pi, range [-1, 1],
/// value -1 at t = 0, peak +1 at t = pi.
inline double triangular_wave(double t) {
    if (!std::isfinite(t)) throw ValidationError("triangular_wave: t must be finite");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double tau = std::fmod(t, two_pi);
    if (tau < 0.0) tau += two_pi;
    const double integral = (tau <= std::numbers::pi) ? tau : two_pi - tau;
    return (2.0 / std::numbers::pi) * integral - 1.0;
}

/// Scalar flow-set boundary b(t) = offset + sin_amp*sin(sin_freq*(t-sin_phase))
///                                + tri_amp*tri(tri_freq*(t-tri_phase)).
struct Boundary {
    double offset = 0.0;
    double sin_amp = 0.0, sin_freq = 1.0, sin_phase = 0.0;
    double tri_amp = 0.0, tri_freq = 1.0, tri_phase = 0.0;

    double operator()(double t) const {
        double v = offset;
        if (sin_amp != 0.0) v += sin_amp * std::sin(sin_freq * (t - sin_phase));
        if (tri_amp != 0.0) v += tri_amp * triangular_wave(tri_freq * (t - tri_phase));
        if (!std::isfinite(v)) throw ValidationError("boundary evaluation produced a non-finite value");
        return v;
    }

    static Boundary constant(double level) {
        Boundary b;
        b.offset = level;
        return b;
    }
};

/// Jump condition: the selected trigger variable hits the boundary from below.
struct Guard {
    Boundary boundary;
    int trigger_index = 0;  // which component of the triggering state is compared
};

struct TimeWindow {
    double t_start = 0.0;
    double t_end = 0.0;

    double length() const { return t_end - t_start; }
};

struct DwellLimits {
    double delta_lower = 1e-6;
    double delta_upper = std::numeric_limits<double>::infinity();  // default: window length
};

struct ExplicitRule {
    std::vector<double> instants;
};
struct PeriodicRule {
    double period = 1.0;
    double phase = 0.0;
};
struct StateTriggeredRule {
    Guard guard;
};
using DomainRule = std::variant<ExplicitRule, PeriodicRule, StateTriggeredRule>;

inline constexpr double kEventTol = 1e-9;  // absolute time tolerance for jump location

/// Locates the first t* in [t_now, t_end] where trigger(t*) crosses boundary(t*)
/// from below, by dt_max-stepped bracketing plus bisection down to kEventTol.
/// Returns nullopt when no crossing occurs before t_end.
inline std::optional<double> detect_next_jump(const Boundary& boundary,
                                              const std::function<double(double)>& trigger, double t_now,
                                              double t_end, double dt_max,
                                              std::vector<std::string>* warnings = nullptr) {
    if (dt_max <= 0.0) throw ValidationError("detect_next_jump: dt_max must be positive");
    auto gap = [&](double t) { return trigger(t) - boundary(t); };
    if (gap(t_now) >= 0.0)
        throw ValidationError("detect_next_jump: trigger not strictly inside the flow set at t = " +
                              std::to_string(t_now));

    double lo = t_now;
    while (lo < t_end) {
        const double hi = std::min(lo + dt_max, t_end);
        if (gap(hi) >= 0.0) {
            if (hi - lo <= kEventTol) {
                if (warnings)
                    warnings->push_back("event bracket narrower than event tolerance near t = " +
                                        std::to_string(hi));
                return hi;
            }
            double a = lo, b = hi;
            while (b - a > kEventTol) {
                const double mid = 0.5 * (a + b);
                (gap(mid) < 0.0 ? a : b) = mid;
            }
            return 0.5 * (a + b);
        }
        lo = hi;
    }
    return std::nullopt;  // end of window, not an error
}

/// Hybrid time domain restricted to a finite window: the ordered jump instants
/// plus the interval/j bookkeeping every signal shares.
class HybridTimeDomain {
public:
    struct Interval {
        int j;
        double t_begin;
        double t_end;
        bool ends_with_jump;
    };

    HybridTimeDomain(TimeWindow window, std::vector<double> instants, DwellLimits limits = {},
                     std::optional<double> period = std::nullopt)
        : window_(window), instants_(std::move(instants)), period_(period) {
        if (!(window_.t_end > window_.t_start)) throw ValidationError("domain window is empty");
        double upper = std::isfinite(limits.delta_upper) ? limits.delta_upper : window_.length();
        for (size_t i = 0; i < instants_.size(); ++i) {
            const double t = instants_[i];
            if (!std::isfinite(t)) throw ValidationError("jump instant is not finite");
            if (t < window_.t_start - 1e-12 || t > window_.t_end + 1e-12)
                throw ValidationError("jump instant " + std::to_string(t) + " outside window");
            if (i > 0) {
                const double d = t - instants_[i - 1];
                if (d <= 0.0)
                    throw ValidationError("jump instants must be strictly increasing (violated at t = " +
                                          std::to_string(t) + ")");
                if (d < limits.delta_lower || d > upper)
                    throw ValidationError("jump spacing " + std::to_string(d) + " at t = " + std::to_string(t) +
                                          " violates the dwell-time bounds [" +
                                          std::to_string(limits.delta_lower) + ", " + std::to_string(upper) +
                                          "]");
            }
        }

        // Instants coinciding with the window start fire no map (the initial
        // condition is already the post-jump value there).
        std::vector<double> fires;
        for (double t : instants_)
            if (t > window_.t_start + 1e-12) fires.push_back(t);
        const bool jump_at_end = !fires.empty() && std::abs(fires.back() - window_.t_end) <= 1e-12;

        std::vector<double> bounds{window_.t_start};
        bounds.insert(bounds.end(), fires.begin(), fires.end());
        if (!jump_at_end) bounds.push_back(window_.t_end);

        // j of the interval containing t = 0 is 0, so negative-time warm-up
        // extensions get negative indices.
        int fires_nonpos = 0;
        for (double t : fires)
            if (t <= 0.0) ++fires_nonpos;
        const int j_first = -fires_nonpos;

        for (size_t i = 0; i + 1 < bounds.size(); ++i) {
            const bool last = (i + 2 == bounds.size());
            intervals_.push_back(
                Interval{j_first + static_cast<int>(i), bounds[i], bounds[i + 1], last ? jump_at_end : true});
        }
    }

    const TimeWindow& window() const { return window_; }
    double t_start() const { return window_.t_start; }
    double t_end() const { return window_.t_end; }
    const std::vector<double>& jump_instants() const { return instants_; }
    const std::vector<Interval>& intervals() const { return intervals_; }
    bool is_periodic() const { return period_.has_value(); }
    double period() const { return period_.value(); }

    int first_j() const { return intervals_.front().j; }
    int last_j() const { return intervals_.back().j; }

    const Interval& interval_by_j(int j) const {
        const int idx = j - intervals_.front().j;
        if (idx < 0 || idx >= static_cast<int>(intervals_.size()))
            throw ValidationError("no interval with jump index " + std::to_string(j));
        return intervals_[static_cast<size_t>(idx)];
    }

    /// Interval whose [t_begin, t_end) contains t (the final interval is closed).
    const Interval& interval_at(double t) const {
        if (t < window_.t_start - 1e-9 || t > window_.t_end + 1e-9)
            throw ValidationError("time " + std::to_string(t) + " outside domain window");
        for (const auto& iv : intervals_)
            if (t < iv.t_end) return iv;
        return intervals_.back();
    }

    /// min/max spacing between consecutive jump instants (nullopt if < 2 jumps).
    std::optional<std::pair<double, double>> dwell_range() const {
        if (instants_.size() < 2) return std::nullopt;
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (size_t i = 1; i < instants_.size(); ++i) {
            const double d = instants_[i] - instants_[i - 1];
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
        return std::make_pair(lo, hi);
    }

private:
    TimeWindow window_;
    std::vector<double> instants_;
    std::optional<double> period_;
    std::vector<Interval> intervals_;
};

/// Trigger-system context for state-triggered domain construction: closed-form
/// flow and jump maps of the system whose state is compared against the guard.
struct TriggerContext {
    Vec anchor_state;       // state at t_anchor, inside the flow set
    double t_anchor = 0.0;  // where the anchor state holds
    std::function<Vec(const Vec&, double)> flow;  // state after flowing dt (dt may be < 0)
    std::function<Vec(const Vec&)> jump;          // post-jump state
    int trigger_index = 0;
};

struct DomainBuildOptions {
    DwellLimits limits;
    double dt_max = 0.01;  // bracketing step for event detection
    int max_reentry_nudges = 8;
};

/// Builds the hybrid time domain for a rule over a window. StateTriggered rules
/// need the trigger context; the anchor must lie inside the window. The segment
/// before the anchor is the flow-only backward extension of the trigger
/// trajectory, which must stay strictly inside the flow set (otherwise the
/// backward reconstruction is ambiguous and an error is raised).
inline HybridTimeDomain build_domain(const DomainRule& rule, TimeWindow window,
                                     const TriggerContext* ctx = nullptr, DomainBuildOptions opts = {},
                                     std::vector<std::string>* warnings = nullptr) {
    if (!(window.t_end > window.t_start)) throw ValidationError("build_domain: window is empty");

    if (const auto* ex = std::get_if<ExplicitRule>(&rule)) {
        return HybridTimeDomain(window, ex->instants, opts.limits);
    }
    if (const auto* pr = std::get_if<PeriodicRule>(&rule)) {
        if (!(pr->period > 0.0)) throw ValidationError("build_domain: periodic rule requires T > 0");
        std::vector<double> instants;
        const double k0 = std::ceil((window.t_start - pr->phase) / pr->period - 1e-12);
        for (double k = k0;; k += 1.0) {
            const double t = pr->phase + k * pr->period;
            if (t > window.t_end + 1e-12) break;
            instants.push_back(t);
        }
        return HybridTimeDomain(window, std::move(instants), opts.limits, pr->period);
    }

    const auto& st = std::get<StateTriggeredRule>(rule);
    if (ctx == nullptr) throw ValidationError("build_domain: state-triggered rule needs a trigger context");
    if (ctx->t_anchor < window.t_start - 1e-12 || ctx->t_anchor > window.t_end + 1e-12)
        throw ValidationError("build_domain: trigger anchor time outside the window");
    const auto& g = st.guard;
    auto trig_of = [&](const Vec& s) {
        if (g.trigger_index < 0 || g.trigger_index >= s.size())
            throw ValidationError("guard trigger index out of range");
        return s(g.trigger_index);
    };

    // Backward extension: flow only, verified to stay strictly inside the flow set.
    if (window.t_start < ctx->t_anchor - 1e-12) {
        double t = ctx->t_anchor;
        while (t > window.t_start) {
            const double tb = std::max(t - opts.dt_max, window.t_start);
            const Vec s = ctx->flow(ctx->anchor_state, tb - ctx->t_anchor);
            if (trig_of(s) >= g.boundary(tb))
                throw ValidationError(
                    "build_domain: backward flow extension exits the flow set at t = " + std::to_string(tb) +
                    "; the negative-time domain cannot be reconstructed unambiguously");
            t = tb;
        }
    }

    std::vector<double> instants;
    Vec state = ctx->anchor_state;
    double t_seg = ctx->t_anchor;
    while (true) {
        auto trig_traj = [&](double t) { return trig_of(ctx->flow(state, t - t_seg)); };
        const auto hit = detect_next_jump(g.boundary, trig_traj, t_seg, window.t_end, opts.dt_max, warnings);
        if (!hit) break;
        const double t_jump = *hit;
        if (!instants.empty() && t_jump - instants.back() < opts.limits.delta_lower)
            throw ValidationError("build_domain: state-triggered spacing " +
                                  std::to_string(t_jump - instants.back()) +
                                  " fell below delta_lower (dwell-time assumption violated)");
        instants.push_back(t_jump);
        state = ctx->jump(ctx->flow(state, t_jump - t_seg));
        t_seg = t_jump;
        // Re-arm only strictly inside the flow set; nudge past grazing contact.
        int nudges = 0;
        while (trig_of(state) >= g.boundary(t_seg)) {
            if (++nudges > opts.max_reentry_nudges)
                throw ValidationError("build_domain: trigger failed to re-enter the flow set after jump at t = " +
                                      std::to_string(t_jump));
            state = ctx->flow(state, kEventTol);
            t_seg += kEventTol;
        }
        if (t_seg >= window.t_end) break;
    }
    return HybridTimeDomain(window, std::move(instants), opts.limits);
}

}  // namespace hymor
