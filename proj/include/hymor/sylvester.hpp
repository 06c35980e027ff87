#pragma once

#include <functional>
#include <random>
#include <sstream>

#include "hymor/linalg.hpp"
#include "hymor/signal.hpp"
#include "hymor/simulate.hpp"
#include "hymor/systems.hpp"

namespace hymor {

enum class SolveMethod { series, forward_attraction, backward_attraction, periodic_exact };

inline const char* to_string(SolveMethod m) {
    switch (m) {
        case SolveMethod::series: return "series";
        case SolveMethod::forward_attraction: return "forward_attraction";
        case SolveMethod::backward_attraction: return "backward_attraction";
        case SolveMethod::periodic_exact: return "periodic_exact";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Interval closed forms and jump maps
// ---------------------------------------------------------------------------

/// Pi(t, j) from the interval-start value Pi_j at t_j:
///   (e^{A_c (t-t_j)} Pi_j + int_{t_j}^t e^{A_c(t-v)} B_c L_c e^{S(v-t_j)} dv) e^{-S (t-t_j)}.
inline Mat pi_flow_closed_form(const Mat& pi_j, const LinearHybridSystem& sys, const SignalGenerator& gen,
                               double t, double t_j) {
    if (t < t_j - 1e-12) throw ValidationError("pi_flow_closed_form: t precedes the interval start");
    const double dt = std::max(0.0, t - t_j);
    if (dt == 0.0) return pi_j;
    const Mat integral = expm_cross_integral(sys.A_c, sys.B_c * gen.L_c, gen.S, dt);
    return (expm(sys.A_c, dt) * pi_j + integral) * expm(gen.S, -dt);
}

/// Post-jump boundary value: Pi_{j+1} = (A_d Pi + B_d L_d) J^{-1}.
inline Mat pi_jump(const Mat& pi_pre, const LinearHybridSystem& sys, const SignalGenerator& gen) {
    if (!is_invertible(gen.J))
        throw SingularityError("pi_jump: J is singular (standing assumption violated)");
    return (sys.A_d * pi_pre + sys.B_d * gen.L_d) * gen.J.inverse();
}

/// Upsilon(t, j) from the interval-end value Upsilon(t_{j+1}, j):
///   e^{-Q_c tau} (U_end e^{A_c tau} + int_0^tau e^{Q_c(tau-s)} R_c C e^{A_c s} ds), tau = t_{j+1} - t.
inline Mat upsilon_flow_closed_form(const Mat& ups_end, const LinearHybridSystem& sys, const HybridFilter& filt,
                                    double t, double t_j1) {
    if (t > t_j1 + 1e-12) throw ValidationError("upsilon_flow_closed_form: t exceeds the interval end");
    const double tau = std::max(0.0, t_j1 - t);
    if (tau == 0.0) return ups_end;
    const Mat integral = expm_cross_integral(filt.Q_c, filt.R_c * sys.C, sys.A_c, tau);
    return expm(filt.Q_c, -tau) * (ups_end * expm(sys.A_c, tau) + integral);
}

/// Backward jump map: given the post-jump boundary value Upsilon_{j+1}, recover
/// the pre-jump-side value Upsilon(t_{j+1}, j) = Q_d^{-1} (Upsilon_{j+1} A_d + R_d C)
/// (signs as in the jump equation Upsilon^+ A_d = Q_d Upsilon - R_d C).
inline Mat upsilon_jump_backward(const Mat& ups_post, const LinearHybridSystem& sys, const HybridFilter& filt) {
    if (!is_invertible(filt.Q_d))
        throw SingularityError("upsilon_jump_backward: Q_d is singular (standing assumption violated)");
    return filt.Q_d.inverse() * (ups_post * sys.A_d + filt.R_d * sys.C);
}

/// Forward jump map (consistency checks): Upsilon_{j+1} = (Q_d Upsilon - R_d C) A_d^{-1}.
inline Mat upsilon_jump_forward(const Mat& ups_pre, const LinearHybridSystem& sys, const HybridFilter& filt) {
    if (!sys.invertible_Ad)
        throw SingularityError("upsilon_jump_forward: A_d is singular, the forward jump map is undefined");
    return (filt.Q_d * ups_pre - filt.R_d * sys.C) * sys.A_d.inverse();
}

// ---------------------------------------------------------------------------
// Truncated boundary series
// ---------------------------------------------------------------------------

struct SeriesOptions {
    double tail_rel_tol = 1e-10;  // stop when |term| < tol * |partial sum|
    int max_terms = 200;
    int min_terms_before_decay_check = 8;
};

namespace detail {

/// Per-interval forcing term of the Pi boundary recursion:
///   M_i = (B_d L_d + A_d [int_0^d e^{A_c(d-s)} B_c L_c e^{Ss} ds] e^{-Sd}) J^{-1}, d = t_i - t_{i-1}.
inline Mat pi_recursion_forcing(const LinearHybridSystem& sys, const SignalGenerator& gen, double delta,
                                const Mat& j_inv) {
    const Mat integral = expm_cross_integral(sys.A_c, sys.B_c * gen.L_c, gen.S, delta);
    return (sys.B_d * gen.L_d + sys.A_d * integral * expm(gen.S, -delta)) * j_inv;
}

/// Per-interval forcing term of the Upsilon boundary recursion:
///   N_i = e^{-Q_c d} ([int_0^d e^{Q_c(d-s)} R_c C e^{A_c s} ds] + Q_d^{-1} R_d C e^{A_c d}), d = t_{i+1} - t_i.
inline Mat upsilon_recursion_forcing(const LinearHybridSystem& sys, const HybridFilter& filt, double delta,
                                     const Mat& qd_inv) {
    const Mat integral = expm_cross_integral(filt.Q_c, filt.R_c * sys.C, sys.A_c, delta);
    return expm(filt.Q_c, -delta) * (integral + qd_inv * filt.R_d * sys.C * expm(sys.A_c, delta));
}

inline void check_term_decay(const std::vector<double>& term_norms, int min_terms, const char* what) {
    const int k = static_cast<int>(term_norms.size());
    if (k <= min_terms) return;
    // Require the recent terms to trend down; persistent growth means the
    // exponential-stability hypothesis does not hold on this domain.
    int growing = 0;
    for (int i = k - 5; i < k; ++i)
        if (i >= 1 && term_norms[size_t(i)] > term_norms[size_t(i - 1)] * (1.0 + 1e-9)) ++growing;
    if (growing >= 5)
        throw NumericError(std::string(what) +
                           ": series terms stopped decaying; the stability assumption appears violated");
}

}  // namespace detail

/// Truncated boundary series for Pi_hat at jump index j: the partial sum over
/// the n_trunc most recent intervals before t_j (adaptive when n_trunc is not
/// given). Requires the domain to extend n_trunc intervals before t_j.
inline Mat pi_boundary_series(const LinearHybridSystem& sys, const SignalGenerator& gen,
                              const HybridTimeDomain& domain, int j, std::optional<int> n_trunc = std::nullopt,
                              const SeriesOptions& opts = {}) {
    if (n_trunc && *n_trunc < 1) throw ValidationError("pi_boundary_series: N_trunc must be >= 1");
    const Mat j_inv = gen.J.inverse();
    const int max_terms = n_trunc ? *n_trunc : opts.max_terms;
    const int first_avail = domain.first_j();
    if (j - 1 < first_avail)
        throw ValidationError("pi_boundary_series: domain has no interval before jump index " + std::to_string(j));

    Mat left = Mat::Identity(sys.n(), sys.n());
    Mat right = Mat::Identity(gen.nu(), gen.nu());
    Mat sum = Mat::Zero(sys.n(), gen.nu());
    std::vector<double> term_norms;

    for (int i = j; i > j - max_terms; --i) {
        if (i - 1 < first_avail) {
            if (n_trunc)
                throw ValidationError("pi_boundary_series: domain extends only " + std::to_string(j - i) +
                                      " intervals before t_j, need " + std::to_string(*n_trunc));
            break;  // adaptive mode: use what the domain offers
        }
        const auto& prev = domain.interval_by_j(i - 1);  // [t_{i-1}, t_i]
        const Mat m_i = detail::pi_recursion_forcing(sys, gen, prev.t_end - prev.t_begin, j_inv);
        const Mat term = left * m_i * right;
        sum += term;
        term_norms.push_back(term.norm());
        detail::check_term_decay(term_norms, opts.min_terms_before_decay_check, "pi_boundary_series");
        if (!n_trunc && term_norms.size() > 1 && term.norm() < opts.tail_rel_tol * sum.norm()) break;
        left = left * (sys.A_d * expm(sys.A_c, prev.t_end - prev.t_begin));
        right = (expm(gen.S, -(prev.t_end - prev.t_begin)) * j_inv) * right;
    }
    return sum;
}

/// Truncated boundary series for Upsilon_hat at jump index j: partial sum over
/// the n_trunc intervals from t_j onwards.
inline Mat upsilon_boundary_series(const LinearHybridSystem& sys, const HybridFilter& filt,
                                   const HybridTimeDomain& domain, int j,
                                   std::optional<int> n_trunc = std::nullopt, const SeriesOptions& opts = {}) {
    if (n_trunc && *n_trunc < 1) throw ValidationError("upsilon_boundary_series: N_trunc must be >= 1");
    if (!sys.invertible_Ad)
        throw SingularityError("upsilon_boundary_series: A_d must be invertible");
    const Mat qd_inv = filt.Q_d.inverse();
    const int max_terms = n_trunc ? *n_trunc : opts.max_terms;
    const int last_avail = domain.last_j();

    Mat left = Mat::Identity(filt.nu(), filt.nu());
    Mat right = Mat::Identity(sys.n(), sys.n());
    Mat sum = Mat::Zero(filt.nu(), sys.n());
    std::vector<double> term_norms;

    for (int i = j; i < j + max_terms; ++i) {
        if (i > last_avail) {
            if (n_trunc)
                throw ValidationError("upsilon_boundary_series: domain extends only " + std::to_string(i - j) +
                                      " intervals after t_j, need " + std::to_string(*n_trunc));
            break;
        }
        const auto& iv = domain.interval_by_j(i);  // [t_i, t_{i+1}]
        const double delta = iv.t_end - iv.t_begin;
        const Mat n_i = detail::upsilon_recursion_forcing(sys, filt, delta, qd_inv);
        const Mat term = left * n_i * right;
        sum += term;
        term_norms.push_back(term.norm());
        detail::check_term_decay(term_norms, opts.min_terms_before_decay_check, "upsilon_boundary_series");
        if (!n_trunc && term_norms.size() > 1 && term.norm() < opts.tail_rel_tol * sum.norm()) break;
        left = left * (expm(filt.Q_c, -delta) * qd_inv);
        right = (sys.A_d * expm(sys.A_c, delta)) * right;
    }
    return sum;
}

// ---------------------------------------------------------------------------
// Steady-state solutions as evaluable trajectories
// ---------------------------------------------------------------------------

/// Steady-state solution Pi_hat of the hybrid Pi-equation: per-interval start
/// values plus the closed-form interval propagation, evaluable anywhere on the
/// domain.
class PiSolution {
public:
    PiSolution(HybridTimeDomain domain, std::vector<Mat> start_values, LinearHybridSystem sys,
               SignalGenerator gen, SolveMethod method)
        : domain_(std::move(domain)), start_values_(std::move(start_values)), sys_(std::move(sys)),
          gen_(std::move(gen)), method_(method) {
        if (start_values_.size() != domain_.intervals().size())
            throw ValidationError("PiSolution: one start value per interval required");
    }

    const HybridTimeDomain& domain() const { return domain_; }
    SolveMethod method() const { return method_; }

    const Mat& start_value(int j) const { return start_values_[index_of(j)]; }

    /// Value inside interval j (pre-jump at t = t_{j+1}); also resolves the
    /// post-jump point (t_end, last_j + 1) when the domain ends with a jump.
    Mat at(double t, int j) const {
        if (j == domain_.last_j() + 1 && domain_.intervals().back().ends_with_jump &&
            std::abs(t - domain_.t_end()) <= 1e-9)
            return post_jump_value(domain_.last_j());
        const auto& iv = domain_.interval_by_j(j);
        if (t > iv.t_end + 1e-9) throw ValidationError("PiSolution::at: t beyond interval end");
        return pi_flow_closed_form(start_values_[index_of(j)], sys_, gen_, t, iv.t_begin);
    }

    /// Value at (t, interval containing t); at jump instants this is the
    /// post-jump side.
    Mat at(double t) const { return at(t, domain_.interval_at(t).j); }

    Mat pre_jump_value(int j) const {
        const auto& iv = domain_.interval_by_j(j);
        return at(iv.t_end, j);
    }

    /// Post-jump value after the jump ending interval j.
    Mat post_jump_value(int j) const { return pi_jump(pre_jump_value(j), sys_, gen_); }

    HybridSignal sample(const SampleSpec& spec, double from_t = -std::numeric_limits<double>::infinity(),
                        const std::string& name = "Pi") const {
        std::vector<HybridSignal::Segment> segs;
        for (const auto& iv : domain_.intervals()) {
            if (iv.t_end < from_t - 1e-12) continue;
            HybridSignal::Segment s{iv.j, {}, {}};
            for (double t : build_interval_grid(iv, spec)) {
                if (t < from_t - 1e-12) continue;
                s.t.push_back(t);
                s.v.push_back(at(t, iv.j));
            }
            if (!s.t.empty()) segs.push_back(std::move(s));
        }
        std::optional<Mat> fin;
        if (domain_.intervals().back().ends_with_jump) fin = post_jump_value(domain_.last_j());
        return HybridSignal(name, std::move(segs), std::move(fin));
    }

    const LinearHybridSystem& system() const { return sys_; }
    const SignalGenerator& generator() const { return gen_; }

private:
    size_t index_of(int j) const {
        const int idx = j - domain_.first_j();
        if (idx < 0 || idx >= static_cast<int>(start_values_.size()))
            throw ValidationError("PiSolution: jump index out of range");
        return static_cast<size_t>(idx);
    }

    HybridTimeDomain domain_;
    std::vector<Mat> start_values_;
    LinearHybridSystem sys_;
    SignalGenerator gen_;
    SolveMethod method_;
};

/// Steady-state solution Upsilon_hat of the hybrid Upsilon-equation: stored by
/// per-interval end values (the natural boundary data of the backward flow).
class UpsilonSolution {
public:
    UpsilonSolution(HybridTimeDomain domain, std::vector<Mat> end_values, LinearHybridSystem sys,
                    HybridFilter filt, SolveMethod method)
        : domain_(std::move(domain)), end_values_(std::move(end_values)), sys_(std::move(sys)),
          filt_(std::move(filt)), method_(method) {
        if (end_values_.size() != domain_.intervals().size())
            throw ValidationError("UpsilonSolution: one end value per interval required");
    }

    const HybridTimeDomain& domain() const { return domain_; }
    SolveMethod method() const { return method_; }

    /// Value at (t_{j+1}, j): the pre-jump side of the boundary.
    const Mat& end_value(int j) const { return end_values_[index_of(j)]; }

    Mat at(double t, int j) const {
        if (j == domain_.last_j() + 1 && domain_.intervals().back().ends_with_jump &&
            std::abs(t - domain_.t_end()) <= 1e-9)
            return post_jump_value(domain_.last_j());
        const auto& iv = domain_.interval_by_j(j);
        if (t < iv.t_begin - 1e-9) throw ValidationError("UpsilonSolution::at: t precedes interval start");
        return upsilon_flow_closed_form(end_values_[index_of(j)], sys_, filt_, t, iv.t_end);
    }

    Mat at(double t) const { return at(t, domain_.interval_at(t).j); }

    Mat start_value(int j) const {
        const auto& iv = domain_.interval_by_j(j);
        return at(iv.t_begin, j);
    }

    /// Post-jump boundary value Upsilon_{j+1} after the jump ending interval j.
    Mat post_jump_value(int j) const {
        if (j < domain_.last_j()) return start_value(j + 1);
        return upsilon_jump_forward(end_value(j), sys_, filt_);
    }

    HybridSignal sample(const SampleSpec& spec, double from_t = -std::numeric_limits<double>::infinity(),
                        const std::string& name = "Upsilon") const {
        std::vector<HybridSignal::Segment> segs;
        for (const auto& iv : domain_.intervals()) {
            if (iv.t_end < from_t - 1e-12) continue;
            HybridSignal::Segment s{iv.j, {}, {}};
            for (double t : build_interval_grid(iv, spec)) {
                if (t < from_t - 1e-12) continue;
                s.t.push_back(t);
                s.v.push_back(at(t, iv.j));
            }
            if (!s.t.empty()) segs.push_back(std::move(s));
        }
        std::optional<Mat> fin;
        if (domain_.intervals().back().ends_with_jump) fin = post_jump_value(domain_.last_j());
        return HybridSignal(name, std::move(segs), std::move(fin));
    }

    const LinearHybridSystem& system() const { return sys_; }
    const HybridFilter& filter() const { return filt_; }

private:
    size_t index_of(int j) const {
        const int idx = j - domain_.first_j();
        if (idx < 0 || idx >= static_cast<int>(end_values_.size()))
            throw ValidationError("UpsilonSolution: jump index out of range");
        return static_cast<size_t>(idx);
    }

    HybridTimeDomain domain_;
    std::vector<Mat> end_values_;
    LinearHybridSystem sys_;
    HybridFilter filt_;
    SolveMethod method_;
};

// ---------------------------------------------------------------------------
// Attraction-based solvers
// ---------------------------------------------------------------------------

struct AttractOptions {
    double tol_attract = 1e-6;
    unsigned seed = 42;
    SampleSpec spec;
    double divergence_guard = 1e12;
};

namespace detail {

inline Mat random_uniform(Eigen::Index rows, Eigen::Index cols, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Mat m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = unif(rng);
    return m;
}

inline std::vector<Mat> propagate_pi_forward(const LinearHybridSystem& sys, const SignalGenerator& gen,
                                             const HybridTimeDomain& domain, const Mat& pi_init,
                                             double guard) {
    std::vector<Mat> starts;
    starts.reserve(domain.intervals().size());
    Mat cur = pi_init;
    for (const auto& iv : domain.intervals()) {
        starts.push_back(cur);
        if (cur.norm() > guard)
            throw NumericError("steady_state_pi: trajectory diverged; the system is not exponentially "
                               "stable on this domain");
        if (iv.ends_with_jump)
            cur = pi_jump(pi_flow_closed_form(cur, sys, gen, iv.t_end, iv.t_begin), sys, gen);
    }
    return starts;
}

inline std::vector<Mat> propagate_upsilon_backward(const LinearHybridSystem& sys, const HybridFilter& filt,
                                                   const HybridTimeDomain& domain, const Mat& ups_final,
                                                   double guard) {
    const auto& ivs = domain.intervals();
    std::vector<Mat> ends(ivs.size());
    Mat cur = ups_final;  // value at the end of the last interval
    if (ivs.back().ends_with_jump)
        // the random final condition is placed after the terminal jump
        cur = upsilon_jump_backward(cur, sys, filt);
    for (size_t k = ivs.size(); k-- > 0;) {
        ends[k] = cur;
        if (cur.norm() > guard)
            throw NumericError("steady_state_upsilon: backward trajectory diverged; the system is not "
                               "exponentially stable on this domain");
        if (k > 0) {
            const Mat start_k = upsilon_flow_closed_form(cur, sys, filt, ivs[k].t_begin, ivs[k].t_end);
            cur = upsilon_jump_backward(start_k, sys, filt);
        }
    }
    return ends;
}

inline double max_componentwise_diff(const std::vector<Mat>& a, const std::vector<Mat>& b, size_t from) {
    double d = 0.0;
    for (size_t k = from; k < a.size(); ++k) d = std::max(d, (a[k] - b[k]).cwiseAbs().maxCoeff());
    return d;
}

}  // namespace detail

/// Forward-attraction route for Pi_hat: propagate the flow/jump recursion from
/// two seeded random initial values at the domain start (the warm-up region is
/// everything before report_t_start) and require agreement within tol_attract
/// on the reporting window.
inline PiSolution steady_state_pi(const LinearHybridSystem& sys, const SignalGenerator& gen,
                                  const HybridTimeDomain& domain, double report_t_start = 0.0,
                                  const AttractOptions& opts = {}) {
    if (domain.t_start() > report_t_start)
        throw ValidationError("steady_state_pi: domain must cover the warm-up region before the report start");
    const Mat init_a = detail::random_uniform(sys.n(), gen.nu(), opts.seed);
    const Mat init_b = detail::random_uniform(sys.n(), gen.nu(), opts.seed + 1);
    const auto run_a = detail::propagate_pi_forward(sys, gen, domain, init_a, opts.divergence_guard);
    const auto run_b = detail::propagate_pi_forward(sys, gen, domain, init_b, opts.divergence_guard);

    size_t first_report = 0;
    const auto& ivs = domain.intervals();
    while (first_report + 1 < ivs.size() && ivs[first_report].t_end < report_t_start - 1e-12) ++first_report;
    double disagreement = detail::max_componentwise_diff(run_a, run_b, first_report);
    for (size_t k = first_report; k < ivs.size(); ++k) {
        const Mat ea = pi_flow_closed_form(run_a[k], sys, gen, ivs[k].t_end, ivs[k].t_begin);
        const Mat eb = pi_flow_closed_form(run_b[k], sys, gen, ivs[k].t_end, ivs[k].t_begin);
        disagreement = std::max(disagreement, (ea - eb).cwiseAbs().maxCoeff());
    }
    if (!(disagreement <= opts.tol_attract)) {
        const double initial = detail::max_componentwise_diff(run_a, run_b, 0);
        std::ostringstream os;
        os << "steady_state_pi: warm-up too short, residual disagreement " << disagreement
           << " > tol_attract " << opts.tol_attract << " (contraction over the warm-up: " << disagreement / initial
           << ")";
        throw NumericError(os.str());
    }
    return PiSolution(domain, run_a, sys, gen, SolveMethod::forward_attraction);
}

/// Backward-attraction route for Upsilon_hat: integrate the Upsilon recursion
/// backward from two seeded random final values at the domain end (horizon)
/// and require agreement within tol_attract up to report_t_end.
inline UpsilonSolution steady_state_upsilon(const LinearHybridSystem& sys, const HybridFilter& filt,
                                            const HybridTimeDomain& domain, double report_t_end,
                                            const AttractOptions& opts = {}) {
    if (!sys.invertible_Ad)
        throw SingularityError("steady_state_upsilon: A_d must be invertible");
    if (domain.t_end() < report_t_end)
        throw ValidationError("steady_state_upsilon: domain must extend to the backward horizon");
    const Mat fin_a = detail::random_uniform(filt.nu(), sys.n(), opts.seed + 2);
    const Mat fin_b = detail::random_uniform(filt.nu(), sys.n(), opts.seed + 3);
    const auto run_a = detail::propagate_upsilon_backward(sys, filt, domain, fin_a, opts.divergence_guard);
    const auto run_b = detail::propagate_upsilon_backward(sys, filt, domain, fin_b, opts.divergence_guard);

    const auto& ivs = domain.intervals();
    double disagreement = 0.0;
    for (size_t k = 0; k < ivs.size(); ++k) {
        if (ivs[k].t_begin > report_t_end + 1e-12) break;
        disagreement = std::max(disagreement, (run_a[k] - run_b[k]).cwiseAbs().maxCoeff());
        const Mat sa = upsilon_flow_closed_form(run_a[k], sys, filt, ivs[k].t_begin, ivs[k].t_end);
        const Mat sb = upsilon_flow_closed_form(run_b[k], sys, filt, ivs[k].t_begin, ivs[k].t_end);
        disagreement = std::max(disagreement, (sa - sb).cwiseAbs().maxCoeff());
    }
    if (!(disagreement <= opts.tol_attract)) {
        const double initial = detail::max_componentwise_diff(run_a, run_b, 0);
        std::ostringstream os;
        os << "steady_state_upsilon: horizon too short, residual disagreement " << disagreement
           << " > tol_attract " << opts.tol_attract << " (contraction over the horizon: "
           << disagreement / std::max(initial, 1e-300) << ")";
        throw NumericError(os.str());
    }
    return UpsilonSolution(domain, run_a, sys, filt, SolveMethod::backward_attraction);
}

/// Retry wrapper: doubles the warm-up (rebuilding the domain through the
/// factory) when the insensitivity check fails, at most max_doublings times.
inline PiSolution steady_state_pi_auto(const LinearHybridSystem& sys, const SignalGenerator& gen,
                                       const std::function<HybridTimeDomain(double)>& domain_for_warmup,
                                       double warmup, double report_t_start = 0.0, AttractOptions opts = {},
                                       int max_doublings = 3, std::vector<std::string>* notes = nullptr) {
    for (int k = 0;; ++k) {
        try {
            return steady_state_pi(sys, gen, domain_for_warmup(warmup), report_t_start, opts);
        } catch (const NumericError& e) {
            if (k >= max_doublings) throw;
            if (notes) notes->push_back(std::string(e.what()) + "; doubling warm-up to " + std::to_string(2 * warmup));
            warmup *= 2.0;
        }
    }
}

inline UpsilonSolution steady_state_upsilon_auto(
    const LinearHybridSystem& sys, const HybridFilter& filt,
    const std::function<HybridTimeDomain(double)>& domain_for_horizon, double horizon, double report_t_end,
    AttractOptions opts = {}, int max_doublings = 3, std::vector<std::string>* notes = nullptr) {
    for (int k = 0;; ++k) {
        try {
            return steady_state_upsilon(sys, filt, domain_for_horizon(horizon), report_t_end, opts);
        } catch (const NumericError& e) {
            if (k >= max_doublings) throw;
            if (notes) notes->push_back(std::string(e.what()) + "; doubling horizon to " + std::to_string(2 * horizon));
            horizon *= 2.0;
        }
    }
}

// ---------------------------------------------------------------------------
// Periodic exact solves
// ---------------------------------------------------------------------------

/// Periodic-jump case: Pi_hat_j solves the algebraic Sylvester equation
///   X (J e^{ST}) - (A_d e^{A_c T}) X = B_d L_d e^{ST} + A_d int_0^T e^{A_c(T-v)} B_c L_c e^{Sv} dv.
inline Mat periodic_pi(const LinearHybridSystem& sys, const SignalGenerator& gen, double period) {
    if (!(period > 0.0)) throw ValidationError("periodic_pi: period must be positive");
    const Mat l = sys.A_d * expm(sys.A_c, period);
    const Mat r = gen.J * expm(gen.S, period);
    const double rho = spectral_radius(l);
    if (!(rho < 1.0))
        throw ValidationError("periodic_pi: spectral radius of A_d e^{A_c T} is " + std::to_string(rho) +
                              ", the periodic hybrid system is not exponentially stable");
    const CVec ev = eigenvalues(r);
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (std::abs(std::abs(ev(i)) - 1.0) > 1e-6)
            throw ValidationError("periodic_pi: J e^{ST} has an eigenvalue of modulus " +
                                  std::to_string(std::abs(ev(i))) + ", the generator is not neutrally stable");
    const Mat m = sys.B_d * gen.L_d * expm(gen.S, period) +
                  sys.A_d * expm_cross_integral(sys.A_c, sys.B_c * gen.L_c, gen.S, period);
    return solve_sylvester(l, r, m);
}

/// Periodic-jump case: Upsilon_hat_j solves
///   (Q_d e^{Q_c T}) X - X (A_d e^{A_c T}) = R_d C e^{A_c T} + Q_d int_0^T e^{Q_c(T-v)} R_c C e^{A_c v} dv
/// (signs consistent with the jump equation Upsilon^+ A_d = Q_d Upsilon - R_d C).
inline Mat periodic_upsilon(const LinearHybridSystem& sys, const HybridFilter& filt, double period) {
    if (!(period > 0.0)) throw ValidationError("periodic_upsilon: period must be positive");
    const Mat r = sys.A_d * expm(sys.A_c, period);
    const Mat l = filt.Q_d * expm(filt.Q_c, period);
    const double rho = spectral_radius(r);
    if (!(rho < 1.0))
        throw ValidationError("periodic_upsilon: spectral radius of A_d e^{A_c T} is " + std::to_string(rho) +
                              ", the periodic hybrid system is not exponentially stable");
    const CVec ev = eigenvalues(l);
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (std::abs(std::abs(ev(i)) - 1.0) > 1e-6)
            throw ValidationError("periodic_upsilon: Q_d e^{Q_c T} has an eigenvalue of modulus " +
                                  std::to_string(std::abs(ev(i))) + ", the filter is not neutrally stable");
    const Mat m = filt.R_d * sys.C * expm(sys.A_c, period) +
                  filt.Q_d * expm_cross_integral(filt.Q_c, filt.R_c * sys.C, sys.A_c, period);
    // solve_sylvester solves X R - L X = M; here L X - X R = m.
    return solve_sylvester(l, r, (-m).eval());
}

}  // namespace hymor
