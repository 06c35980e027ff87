#pragma once

#include <functional>
#include <sstream>
#include <utility>

#include "hymor/sylvester.hpp"

namespace hymor {

enum class RomKind { direct, swapped, two_sided_i, two_sided_ii };

inline const char* to_string(RomKind k) {
    switch (k) {
        case RomKind::direct: return "direct";
        case RomKind::swapped: return "swapped";
        case RomKind::two_sided_i: return "two_sided_i";
        case RomKind::two_sided_ii: return "two_sided_ii";
    }
    return "?";
}

/// Reduced-model coefficient: a constant matrix or a matrix-valued hybrid
/// signal evaluated at (t, j).
class Coefficient {
public:
    Coefficient() = default;
    Coefficient(Mat constant) : constant_(std::move(constant)) {}  // NOLINT(google-explicit-constructor)
    Coefficient(std::function<Mat(double, int)> fn) : fn_(std::move(fn)) {}

    bool is_constant() const { return constant_.has_value(); }
    const Mat& constant() const {
        if (!constant_) throw ValidationError("coefficient is time-varying, no constant value");
        return *constant_;
    }
    Mat operator()(double t, int j) const { return constant_ ? *constant_ : fn_(t, j); }

private:
    std::optional<Mat> constant_;
    std::function<Mat(double, int)> fn_;
};

/// Jump-side coefficient, evaluated at the jump ending interval j_pre.
class JumpCoefficient {
public:
    JumpCoefficient() = default;
    JumpCoefficient(Mat constant) : constant_(std::move(constant)) {}  // NOLINT(google-explicit-constructor)
    JumpCoefficient(std::function<Mat(double, int)> fn) : fn_(std::move(fn)) {}

    bool is_constant() const { return constant_.has_value(); }
    const Mat& constant() const {
        if (!constant_) throw ValidationError("jump coefficient is time-varying, no constant value");
        return *constant_;
    }
    Mat operator()(double t_jump, int j_pre) const { return constant_ ? *constant_ : fn_(t_jump, j_pre); }

private:
    std::optional<Mat> constant_;
    std::function<Mat(double, int)> fn_;
};

/// Reduced-order hybrid model: flow xi' = F_c xi + G_c u_c, jump
/// xi+ = F_d xi + G_d u_d, output psi = H xi. Any coefficient may be constant
/// or a hybrid-matrix signal derived from the steady-state solutions.
struct ReducedModel {
    RomKind kind;
    Eigen::Index nu = 0, m = 0, p = 0;
    Coefficient F_c, G_c, H;
    JumpCoefficient F_d, G_d;
    bool constant_dynamics = false;  // F_c and F_d constant (H/G may still vary)
};

/// Direct-interconnection family: F_c = S - G_c L_c, F_d = J - G_d L_d,
/// output map C Pi_hat(t, j) xi.
inline ReducedModel build_direct_rom(const SignalGenerator& gen, const PiSolution& pi_hat, const Mat& c,
                                     const Mat& g_c, const Mat& g_d) {
    const Eigen::Index nu = gen.nu(), m = gen.m();
    require_shape(g_c, nu, m, "G_c");
    require_shape(g_d, nu, m, "G_d");
    if (c.cols() != pi_hat.system().n()) throw DimensionError("build_direct_rom: C column count mismatch");
    ReducedModel rom;
    rom.kind = RomKind::direct;
    rom.nu = nu;
    rom.m = m;
    rom.p = c.rows();
    rom.F_c = Coefficient((gen.S - g_c * gen.L_c).eval());
    rom.F_d = JumpCoefficient((gen.J - g_d * gen.L_d).eval());
    rom.G_c = Coefficient(g_c);
    rom.G_d = JumpCoefficient(g_d);
    rom.H = Coefficient(std::function<Mat(double, int)>(
        [c, pi_hat](double t, int j) -> Mat { return c * pi_hat.at(t, j); }));
    rom.constant_dynamics = true;
    return rom;
}

/// Swapped-interconnection family: F_c = Q_c - R_c H, F_d = Q_d - R_d H
/// (which must be invertible), inputs routed through the swapped moment
/// (Upsilon_hat B_c, Upsilon_hat^+ B_d).
inline ReducedModel build_swapped_rom(const HybridFilter& filt, const UpsilonSolution& ups_hat, const Mat& b_c,
                                      const Mat& b_d, const Mat& h) {
    const Eigen::Index nu = filt.nu(), p = filt.p();
    require_shape(h, p, nu, "H");
    if (b_c.rows() != ups_hat.system().n() || b_d.rows() != ups_hat.system().n())
        throw DimensionError("build_swapped_rom: input matrix row count mismatch");
    const Mat f_d = filt.Q_d - filt.R_d * h;
    if (!is_invertible(f_d))
        throw SingularityError("build_swapped_rom: Q_d - R_d H is singular, pick a different H");
    ReducedModel rom;
    rom.kind = RomKind::swapped;
    rom.nu = nu;
    rom.m = b_c.cols();
    rom.p = p;
    rom.F_c = Coefficient((filt.Q_c - filt.R_c * h).eval());
    rom.F_d = JumpCoefficient(f_d);
    rom.G_c = Coefficient(std::function<Mat(double, int)>(
        [ups_hat, b_c](double t, int j) -> Mat { return ups_hat.at(t, j) * b_c; }));
    rom.G_d = JumpCoefficient(std::function<Mat(double, int)>(
        [ups_hat, b_d](double, int j_pre) -> Mat { return ups_hat.post_jump_value(j_pre) * b_d; }));
    rom.H = Coefficient(h);
    rom.constant_dynamics = true;
    return rom;
}

enum class TwoSidedVariant { i, ii };

struct TwoSidedOptions {
    double cond_threshold = 1e10;
    double check_t_start = 0.0;  // window over which Assumption-4 style checks run
    double check_t_end = std::numeric_limits<double>::infinity();
    int samples_per_interval = 25;
};

namespace detail {

/// Verifies that W = Upsilon_hat Pi_hat stays invertible along the trajectory.
/// Two failure modes are caught: a scale-aware conditioning breach
/// (|Ups||Pi| / sigma_min(W) above the threshold) at any sample, and a sign
/// change of det W between adjacent samples (an exact crossing in between).
inline void check_cross_product_invertible(const PiSolution& pi, const UpsilonSolution& ups,
                                           const TwoSidedOptions& opts) {
    double worst_ratio = 0.0, worst_t = 0.0;
    int worst_j = 0;
    for (const auto& iv : pi.domain().intervals()) {
        if (iv.t_end < opts.check_t_start || iv.t_begin > opts.check_t_end) continue;
        if (iv.t_begin < ups.domain().t_start() - 1e-9 || iv.t_end > ups.domain().t_end() + 1e-9) continue;
        double prev_det = 0.0;
        bool have_prev = false;
        for (int s = 0; s <= opts.samples_per_interval; ++s) {
            const double t = iv.t_begin + (iv.t_end - iv.t_begin) * s / opts.samples_per_interval;
            if (t < opts.check_t_start - 1e-12 || t > opts.check_t_end + 1e-12) continue;
            const Mat u = ups.at(t, iv.j);
            const Mat p = pi.at(t, iv.j);
            const Mat w = u * p;
            Eigen::JacobiSVD<Mat> svd(w);
            const double smin = svd.singularValues().minCoeff();
            const double scale = u.norm() * p.norm() + 1e-300;
            const double ratio = smin > 0.0 ? scale / smin : std::numeric_limits<double>::infinity();
            if (ratio > worst_ratio) {
                worst_ratio = ratio;
                worst_t = t;
                worst_j = iv.j;
            }
            const double det = w.determinant();
            if (have_prev && det * prev_det < 0.0) {
                std::ostringstream os;
                os << "two-sided build: det(Upsilon_hat Pi_hat) changes sign near t = " << t
                   << ", j = " << iv.j << "; the cross product is singular inside this interval";
                throw SingularityError(os.str());
            }
            prev_det = det;
            have_prev = true;
        }
    }
    if (!(worst_ratio < opts.cond_threshold)) {
        std::ostringstream os;
        os << "two-sided build: Upsilon_hat Pi_hat is numerically singular along the trajectory "
           << "(conditioning ratio " << worst_ratio << " at t = " << worst_t << ", j = " << worst_j << ")";
        throw SingularityError(os.str());
    }
}

inline Mat solve_against(const Mat& w, const Mat& rhs) { return w.partialPivLu().solve(rhs); }

}  // namespace detail

/// Two-sided moment matching. Variant i equips the direct family with
/// G_c = (Ups Pi)^{-1} Ups B_c and G_d = (Ups+ Pi+)^{-1} Ups+ B_d; variant ii
/// equips the swapped family with H = C Pi (Ups Pi)^{-1}. All gains are
/// time-varying; the per-jump matrices are checked for invertibility lazily at
/// the instants the simulation realises.
inline ReducedModel build_two_sided_rom(TwoSidedVariant variant, const LinearHybridSystem& sys,
                                        const SignalGenerator& gen, const HybridFilter& filt,
                                        const PiSolution& pi_hat, const UpsilonSolution& ups_hat,
                                        const TwoSidedOptions& opts = {}) {
    if (gen.nu() != filt.nu())
        throw DimensionError("two-sided build: generator and filter orders must agree");
    detail::check_cross_product_invertible(pi_hat, ups_hat, opts);

    ReducedModel rom;
    rom.nu = gen.nu();
    rom.m = sys.m();
    rom.p = sys.p();
    rom.constant_dynamics = false;

    const Mat b_c = sys.B_c, b_d = sys.B_d, c = sys.C;
    auto gain_c = [pi_hat, ups_hat, b_c](double t, int j) -> Mat {
        const Mat w = ups_hat.at(t, j) * pi_hat.at(t, j);
        return detail::solve_against(w, ups_hat.at(t, j) * b_c);
    };

    if (variant == TwoSidedVariant::i) {
        rom.kind = RomKind::two_sided_i;
        auto gain_d = [pi_hat, ups_hat, b_d](double, int j_pre) -> Mat {
            const Mat up = ups_hat.post_jump_value(j_pre);
            const Mat pp = pi_hat.post_jump_value(j_pre);
            return detail::solve_against((up * pp).eval(), up * b_d);
        };
        const Mat s = gen.S, j_mat = gen.J, l_c = gen.L_c, l_d = gen.L_d;
        rom.F_c = Coefficient(std::function<Mat(double, int)>(
            [s, l_c, gain_c](double t, int j) -> Mat { return s - gain_c(t, j) * l_c; }));
        rom.F_d = JumpCoefficient(std::function<Mat(double, int)>([j_mat, l_d, gain_d](double t, int j_pre) -> Mat {
            const Mat f_d = j_mat - gain_d(t, j_pre) * l_d;
            if (!is_invertible(f_d))
                throw SingularityError("two-sided variant i: J - G_d L_d singular at t = " + std::to_string(t));
            return f_d;
        }));
        rom.G_c = Coefficient(std::function<Mat(double, int)>(gain_c));
        rom.G_d = JumpCoefficient(std::function<Mat(double, int)>(gain_d));
        rom.H = Coefficient(std::function<Mat(double, int)>(
            [c, pi_hat](double t, int j) -> Mat { return c * pi_hat.at(t, j); }));
    } else {
        rom.kind = RomKind::two_sided_ii;
        auto h_fn = [c, pi_hat, ups_hat](double t, int j) -> Mat {
            const Mat pi = pi_hat.at(t, j);
            const Mat w = ups_hat.at(t, j) * pi;
            // H = C Pi W^{-1}  via  W^T X^T = (C Pi)^T
            return detail::solve_against(w.transpose().eval(), (c * pi).transpose().eval()).transpose();
        };
        const Mat q_c = filt.Q_c, q_d = filt.Q_d, r_c = filt.R_c, r_d = filt.R_d;
        rom.F_c = Coefficient(std::function<Mat(double, int)>(
            [q_c, r_c, h_fn](double t, int j) -> Mat { return q_c - r_c * h_fn(t, j); }));
        rom.F_d = JumpCoefficient(std::function<Mat(double, int)>([q_d, r_d, h_fn](double t, int j_pre) -> Mat {
            const Mat f_d = q_d - r_d * h_fn(t, j_pre);  // H at the pre-jump instant
            if (!is_invertible(f_d))
                throw SingularityError("two-sided variant ii: Q_d - R_d H singular at t = " + std::to_string(t));
            return f_d;
        }));
        rom.G_c = Coefficient(std::function<Mat(double, int)>(
            [ups_hat, b_c](double t, int j) -> Mat { return ups_hat.at(t, j) * b_c; }));
        rom.G_d = JumpCoefficient(std::function<Mat(double, int)>(
            [ups_hat, b_d](double, int j_pre) -> Mat { return ups_hat.post_jump_value(j_pre) * b_d; }));
        rom.H = Coefficient(std::function<Mat(double, int)>(h_fn));
    }
    return rom;
}

/// Moment of the plant in the direct interconnection: the time-varying output
/// map C Pi_hat(t, j).
inline Coefficient moment_direct(const PiSolution& pi_hat, const Mat& c) {
    if (c.cols() != pi_hat.system().n()) throw DimensionError("moment_direct: C column count mismatch");
    return Coefficient(std::function<Mat(double, int)>(
        [c, pi_hat](double t, int j) -> Mat { return c * pi_hat.at(t, j); }));
}

/// Moment of the plant in the swapped interconnection: the pair
/// (Upsilon_hat B_c, Upsilon_hat^+ B_d).
inline std::pair<Coefficient, JumpCoefficient> moment_swapped(const UpsilonSolution& ups_hat, const Mat& b_c,
                                                              const Mat& b_d) {
    if (b_c.rows() != ups_hat.system().n() || b_d.rows() != ups_hat.system().n())
        throw DimensionError("moment_swapped: input matrix row count mismatch");
    Coefficient flow(std::function<Mat(double, int)>(
        [ups_hat, b_c](double t, int j) -> Mat { return ups_hat.at(t, j) * b_c; }));
    JumpCoefficient jump(std::function<Mat(double, int)>(
        [ups_hat, b_d](double, int j_pre) -> Mat { return ups_hat.post_jump_value(j_pre) * b_d; }));
    return {std::move(flow), std::move(jump)};
}

struct RomSimulationResult {
    HybridSignal xi;
    HybridSignal psi;
};

/// Simulates the reduced model under exogenous inputs.
inline RomSimulationResult simulate_rom(const ReducedModel& rom, const HybridTimeDomain& domain,
                                        const InputSignal& input, const Vec& xi0, const SampleSpec& spec = {},
                                        const OdeOptions& ode = {}) {
    if (xi0.size() != rom.nu) throw DimensionError("simulate_rom: xi0 length must match model order");
    TvHybridSystem tv;
    tv.state_rows = rom.nu;
    tv.state_cols = 1;
    tv.flow_rhs = [&rom, &input](double t, int j, const Mat& x) -> Mat {
        return rom.F_c(t, j) * x + rom.G_c(t, j) * input.u_c(t);
    };
    tv.jump_map = [&rom, &input](double t, int j_pre, const Mat& x) -> Mat {
        return rom.F_d(t, j_pre) * x + rom.G_d(t, j_pre) * input.u_d(t);
    };
    HybridSignal xi = simulate_tv(tv, domain, xi0, "xi", spec, ode);
    HybridSignal psi = transform_signal(xi, "psi", [&rom](double t, int j, const Mat& v) -> Mat {
        return rom.H(t, j) * v;
    });
    return RomSimulationResult{std::move(xi), std::move(psi)};
}

/// Reduced model driven by the signal generator (direct interconnection side).
inline RomSimulationResult simulate_rom_direct(const ReducedModel& rom, const SignalGenerator& gen,
                                               const HybridTimeDomain& domain, const Vec& xi0,
                                               const SampleSpec& spec = {}, const OdeOptions& ode = {}) {
    GeneratorTrajectory traj(gen, domain);
    TvHybridSystem tv;
    tv.state_rows = rom.nu;
    tv.state_cols = 1;
    tv.flow_rhs = [&rom, &traj](double t, int j, const Mat& x) -> Mat {
        return rom.F_c(t, j) * x + rom.G_c(t, j) * traj.theta_c(t, j);
    };
    tv.jump_map = [&rom, &traj](double t, int j_pre, const Mat& x) -> Mat {
        return rom.F_d(t, j_pre) * x + rom.G_d(t, j_pre) * traj.theta_d(j_pre);
    };
    HybridSignal xi = simulate_tv(tv, domain, xi0, "xi", spec, ode);
    HybridSignal psi = transform_signal(xi, "psi", [&rom](double t, int j, const Mat& v) -> Mat {
        return rom.H(t, j) * v;
    });
    return RomSimulationResult{std::move(xi), std::move(psi)};
}

/// Filter driven by the reduced model's output (swapped interconnection side):
/// the coupled (xi, varpi) dynamics with eta_d taken pre-jump.
inline HybridSignal simulate_rom_swapped(const ReducedModel& rom, const HybridFilter& filt,
                                         const HybridTimeDomain& domain, const InputSignal& input,
                                         const Vec& xi0, const Vec& varpi0, const SampleSpec& spec = {},
                                         const OdeOptions& ode = {}) {
    if (filt.p() != rom.p) throw DimensionError("simulate_rom_swapped: filter input count mismatch");
    const Eigen::Index nu_r = rom.nu, nu_f = filt.nu();
    TvHybridSystem tv;
    tv.state_rows = nu_r + nu_f;
    tv.state_cols = 1;
    tv.flow_rhs = [&rom, &filt, &input, nu_r, nu_f](double t, int j, const Mat& z) -> Mat {
        const Mat xi = z.topRows(nu_r);
        const Mat w = z.bottomRows(nu_f);
        Mat dz(nu_r + nu_f, 1);
        dz.topRows(nu_r) = rom.F_c(t, j) * xi + rom.G_c(t, j) * input.u_c(t);
        dz.bottomRows(nu_f) = filt.Q_c * w + filt.R_c * (rom.H(t, j) * xi);
        return dz;
    };
    tv.jump_map = [&rom, &filt, &input, nu_r, nu_f](double t, int j_pre, const Mat& z) -> Mat {
        const Mat xi = z.topRows(nu_r);
        const Mat w = z.bottomRows(nu_f);
        const Mat psi_pre = rom.H(t, j_pre) * xi;
        Mat zn(nu_r + nu_f, 1);
        zn.topRows(nu_r) = rom.F_d(t, j_pre) * xi + rom.G_d(t, j_pre) * input.u_d(t);
        zn.bottomRows(nu_f) = filt.Q_d * w + filt.R_d * psi_pre;
        return zn;
    };
    Vec z0(nu_r + nu_f);
    z0 << xi0, varpi0;
    HybridSignal z = simulate_tv(tv, domain, z0, "xi_varpi", spec, ode);
    return transform_signal(z, "varpi_r",
                            [nu_r, nu_f](double, int, const Mat& v) -> Mat { return v.bottomRows(nu_f); });
}

struct RomStabilityReport {
    double fitted_slope = std::numeric_limits<double>::quiet_NaN();
    double threshold = -1e-3;
    bool pass = false;
    std::optional<double> periodic_spectral_radius;  // rho(F_d e^{F_c T}) when applicable
};

/// A-posteriori stability check of a reduced model: free responses from a
/// seeded random orthonormal basis, worst fitted log-norm slope, plus the
/// exact spectral-radius test in the constant-coefficient periodic case.
inline RomStabilityReport check_rom_stability(const ReducedModel& rom, const HybridTimeDomain& domain,
                                              unsigned seed = 42, double eps_stab = 1e-3,
                                              const SampleSpec& spec = {}, const OdeOptions& ode = {}) {
    TvHybridSystem tv;
    tv.state_rows = rom.nu;
    tv.state_cols = 1;
    tv.flow_rhs = [&rom](double t, int j, const Mat& x) -> Mat { return rom.F_c(t, j) * x; };
    tv.jump_map = [&rom](double t, int j_pre, const Mat& x) -> Mat { return rom.F_d(t, j_pre) * x; };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Mat basis(rom.nu, rom.nu);
    for (Eigen::Index r = 0; r < rom.nu; ++r)
        for (Eigen::Index c = 0; c < rom.nu; ++c) basis(r, c) = unif(rng);
    basis = Eigen::HouseholderQR<Mat>(basis).householderQ() * Mat::Identity(rom.nu, rom.nu);

    RomStabilityReport rep;
    rep.threshold = -eps_stab;
    double worst = -std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < rom.nu; ++k) {
        HybridSignal xi = simulate_tv(tv, domain, basis.col(k), "xi", spec, ode);
        std::vector<std::pair<double, double>> t_norm;
        for (const auto& s : xi.segments())
            for (size_t i = 0; i < s.t.size(); ++i) t_norm.emplace_back(s.t[i], s.v[i].norm());
        worst = std::max(worst, log_norm_slope(t_norm));
    }
    rep.fitted_slope = worst;
    rep.pass = std::isfinite(worst) && worst < rep.threshold;

    if (rom.constant_dynamics && rom.F_c.is_constant() && rom.F_d.is_constant() && domain.is_periodic())
        rep.periodic_spectral_radius = spectral_radius(rom.F_d.constant() * expm(rom.F_c.constant(), domain.period()));
    return rep;
}

// ---------------------------------------------------------------------------
// Constant-gain selection for the periodic case
// ---------------------------------------------------------------------------

namespace detail {

/// Ackermann pole placement for sigma(A - G B) with A nu x nu and B m x nu,
/// reduced to a single synthetic input via a seeded random combination vector.
inline Mat place_dual_gain(const Mat& a, const Mat& b, const std::vector<double>& targets, unsigned seed) {
    const Eigen::Index nu = a.rows();
    if (static_cast<Eigen::Index>(targets.size()) != nu)
        throw ValidationError("place_dual_gain: one target per state required");
    const Mat at = a.transpose();
    const Mat bt = b.transpose();  // nu x m
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int attempt = 0; attempt < 64; ++attempt) {
        Vec v(bt.cols());
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = unif(rng);
        const Vec bv = bt * v;
        Mat ctrl(nu, nu);
        Mat col = bv;
        for (Eigen::Index i = 0; i < nu; ++i) {
            ctrl.col(i) = col;
            col = at * col;
        }
        if (rank_of(ctrl) != nu) continue;
        // Ackermann: k = e_nu^T C^{-1} phi(A^T), phi the target characteristic polynomial
        Mat phi = Mat::Identity(nu, nu);
        for (double lam : targets) phi = phi * (at - lam * Mat::Identity(nu, nu));
        Vec e_last = Vec::Zero(nu);
        e_last(nu - 1) = 1.0;
        const Mat k = ctrl.transpose().partialPivLu().solve(e_last).transpose() * phi;  // 1 x nu
        return (v * k).transpose();  // K = v k is m x nu; G = K^T is nu x m
    }
    throw NumericError("place_dual_gain: no controllable input combination found");
}

}  // namespace detail

/// Searches constant gains (G_c, G_d) making the direct ROM exponentially
/// stable on a periodic domain: flow poles placed in the left half plane, jump
/// poles inside the unit disc, verified through rho((J - G_d L_d) e^{(S - G_c L_c) T}).
inline std::pair<Mat, Mat> stabilizing_direct_gains(const SignalGenerator& gen, double period,
                                                    unsigned seed = 42) {
    const Eigen::Index nu = gen.nu();
    double flow_depth = 1.0;
    for (int attempt = 0; attempt < 8; ++attempt, flow_depth *= 1.6) {
        std::vector<double> flow_targets, jump_targets;
        for (Eigen::Index i = 0; i < nu; ++i) {
            flow_targets.push_back(-flow_depth * (1.0 + 0.3 * static_cast<double>(i)));
            jump_targets.push_back(0.2 + 0.1 * static_cast<double>(i));
        }
        const Mat g_c = detail::place_dual_gain(gen.S, gen.L_c, flow_targets, seed + attempt);
        const Mat g_d = detail::place_dual_gain(gen.J, gen.L_d, jump_targets, seed + 100 + attempt);
        const Mat f_c = gen.S - g_c * gen.L_c;
        const Mat f_d = gen.J - g_d * gen.L_d;
        if (spectral_radius(f_d * expm(f_c, period)) < 0.8) return {g_c, g_d};
    }
    throw NumericError("stabilizing_direct_gains: search failed to stabilise the reduced model");
}

/// Searches a constant H making the swapped ROM exponentially stable on a
/// periodic domain with Q_d - R_d H invertible.
inline Mat stabilizing_swapped_gain(const HybridFilter& filt, double period, unsigned seed = 42) {
    const Eigen::Index nu = filt.nu();
    double flow_depth = 1.0;
    for (int attempt = 0; attempt < 8; ++attempt, flow_depth *= 1.6) {
        std::vector<double> flow_targets, jump_targets;
        for (Eigen::Index i = 0; i < nu; ++i) {
            flow_targets.push_back(-flow_depth * (1.0 + 0.3 * static_cast<double>(i)));
            jump_targets.push_back(0.2 + 0.1 * static_cast<double>(i));
        }
        // sigma(Q_c - R_c H): dual placement with A = Q_c, "B" = H acting through R_c
        const Mat h_flow =
            detail::place_dual_gain(filt.Q_c.transpose(), filt.R_c.transpose(), flow_targets, seed + attempt)
                .transpose();
        const Mat h_jump =
            detail::place_dual_gain(filt.Q_d.transpose(), filt.R_d.transpose(), jump_targets, seed + 50 + attempt)
                .transpose();
        for (const Mat& h : {h_flow, h_jump, Mat(0.5 * (h_flow + h_jump))}) {
            const Mat f_c = filt.Q_c - filt.R_c * h;
            const Mat f_d = filt.Q_d - filt.R_d * h;
            if (!is_invertible(f_d)) continue;
            if (spectral_radius(f_d * expm(f_c, period)) < 0.8) return h;
        }
    }
    throw NumericError("stabilizing_swapped_gain: search failed to stabilise the reduced model");
}

}  // namespace hymor
