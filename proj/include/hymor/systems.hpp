#pragma once

#include "hymor/hybrid_time.hpp"
#include "hymor/linalg.hpp"
#include "hymor/types.hpp"

namespace hymor {

/// Linear hybrid plant: flows xdot = A_c x + B_c u_c, jumps x+ = A_d x + B_d u_d,
/// output y = C x.
struct LinearHybridSystem {
    Mat A_c, A_d, B_c, B_d, C;
    bool invertible_Ad = false;

    LinearHybridSystem(Mat a_c, Mat a_d, Mat b_c, Mat b_d, Mat c)
        : A_c(std::move(a_c)), A_d(std::move(a_d)), B_c(std::move(b_c)), B_d(std::move(b_d)), C(std::move(c)) {
        require_square(A_c, "A_c");
        require_shape(A_d, A_c.rows(), A_c.cols(), "A_d");
        if (B_c.rows() != A_c.rows()) throw DimensionError("B_c row count must match state dimension");
        require_shape(B_d, B_c.rows(), B_c.cols(), "B_d");
        if (C.cols() != A_c.rows()) throw DimensionError("C column count must match state dimension");
        for (const auto* m : {&A_c, &A_d, &B_c, &B_d, &C}) require_finite(*m, "system matrix");
        invertible_Ad = is_invertible(A_d);
    }

    Eigen::Index n() const { return A_c.rows(); }
    Eigen::Index m() const { return B_c.cols(); }
    Eigen::Index p() const { return C.rows(); }
};

/// Autonomous hybrid signal generator: omega flows with S, jumps with J, and
/// emits theta_c = L_c omega / theta_d = L_d omega.
struct SignalGenerator {
    Mat S, J, L_c, L_d;
    Vec omega0;

    SignalGenerator(Mat s, Mat j, Mat l_c, Mat l_d, Vec omega0_in)
        : S(std::move(s)), J(std::move(j)), L_c(std::move(l_c)), L_d(std::move(l_d)), omega0(std::move(omega0_in)) {
        require_square(S, "S");
        require_shape(J, S.rows(), S.cols(), "J");
        if (L_c.cols() != S.rows()) throw DimensionError("L_c column count must match generator dimension");
        require_shape(L_d, L_c.rows(), L_c.cols(), "L_d");
        if (omega0.size() != S.rows()) throw DimensionError("omega0 length must match generator dimension");
        for (const auto* m : {&S, &J, &L_c, &L_d}) require_finite(*m, "generator matrix");
        require_finite(omega0, "omega0");
        if (!is_invertible(J))
            throw ValidationError("generator assumption violated: J must be invertible");
        observable_flow = is_observable(S, L_c);
        observable_jump = is_observable(J, L_d);
    }

    Eigen::Index nu() const { return S.rows(); }
    Eigen::Index m() const { return L_c.rows(); }

    bool observable_flow = false;  // (S, L_c) observable
    bool observable_jump = false;  // (J, L_d) observable

    std::vector<std::string> assumption_violations() const {
        std::vector<std::string> v;
        if (!observable_flow) v.push_back("generator assumption violated: (S, L_c) is not observable");
        if (!observable_jump) v.push_back("generator assumption violated: (J, L_d) is not observable");
        return v;
    }

    Vec flow_state(const Vec& omega, double dt) const { return expm(S, dt) * omega; }
    Vec jump_state(const Vec& omega) const { return J * omega; }

    /// Trigger context for state-triggered domains, anchored at (t_anchor, omega0).
    TriggerContext trigger_context(double t_anchor = 0.0, int trigger_index = 0) const {
        TriggerContext ctx;
        ctx.anchor_state = omega0;
        ctx.t_anchor = t_anchor;
        ctx.trigger_index = trigger_index;
        ctx.flow = [this](const Vec& s, double dt) { return flow_state(s, dt); };
        ctx.jump = [this](const Vec& s) { return jump_state(s); };
        return ctx;
    }
};

/// Hybrid filter driven by the plant output in the swapped interconnection.
struct HybridFilter {
    Mat Q_c, Q_d, R_c, R_d;
    Vec varpi0;

    HybridFilter(Mat q_c, Mat q_d, Mat r_c, Mat r_d, Vec varpi0_in)
        : Q_c(std::move(q_c)), Q_d(std::move(q_d)), R_c(std::move(r_c)), R_d(std::move(r_d)),
          varpi0(std::move(varpi0_in)) {
        require_square(Q_c, "Q_c");
        require_shape(Q_d, Q_c.rows(), Q_c.cols(), "Q_d");
        if (R_c.rows() != Q_c.rows()) throw DimensionError("R_c row count must match filter dimension");
        require_shape(R_d, R_c.rows(), R_c.cols(), "R_d");
        if (varpi0.size() != Q_c.rows()) throw DimensionError("varpi0 length must match filter dimension");
        for (const auto* m : {&Q_c, &Q_d, &R_c, &R_d}) require_finite(*m, "filter matrix");
        require_finite(varpi0, "varpi0");
        if (!is_invertible(Q_d))
            throw ValidationError("filter assumption violated: Q_d must be invertible");
        reachable_flow = is_reachable(Q_c, R_c);
        reachable_jump = is_reachable(Q_d, R_d);
    }

    Eigen::Index nu() const { return Q_c.rows(); }
    Eigen::Index p() const { return R_c.cols(); }

    bool reachable_flow = false;  // (Q_c, R_c) reachable
    bool reachable_jump = false;  // (Q_d, R_d) reachable

    std::vector<std::string> assumption_violations() const {
        std::vector<std::string> v;
        if (!reachable_flow) v.push_back("filter assumption violated: (Q_c, R_c) is not reachable");
        if (!reachable_jump) v.push_back("filter assumption violated: (Q_d, R_d) is not reachable");
        return v;
    }
};

}  // namespace hymor
