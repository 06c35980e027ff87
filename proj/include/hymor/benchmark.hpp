#pragma once

// Built-in benchmark: a 6th-order MIMO linear hybrid system with a scalar
// exponential generator whose state-triggered jumps are governed by a moving
// sine-plus-triangle boundary. Shipped so the CLI and the acceptance suite
// can run the reference pipeline without external files.

#include <cmath>

#include "hymor/hybrid_time.hpp"
#include "hymor/systems.hpp"

namespace hymor::benchmark {

inline LinearHybridSystem plant() {
    Mat a_c(6, 6);
    a_c << -1.280, 0.953, 0.080, 0.646, 1.207, 1.152,   //
        0.124, -1.635, -0.007, 0.369, 1.077, 1.529,     //
        -0.037, 0.179, -0.891, -0.046, 0.243, 0.758,    //
        -1.146, -0.634, -0.591, -0.490, 1.255, 0.706,   //
        -0.796, -1.232, -0.533, -1.315, -0.980, -0.754, //
        -1.467, -0.889, -0.172, -1.359, 0.695, -0.953;
    Mat a_d(6, 6);
    a_d << 0.141, -0.488, -0.317, -0.137, 0.372, 0.100, //
        -0.242, 0.427, 0.106, 0.321, 0.492, -0.256,     //
        -0.515, 0.187, -0.107, -0.294, 0.254, 0.501,    //
        0.289, 0.324, -0.437, 0.004, 0.073, 0.222,      //
        0.209, 0.262, 0.492, -0.322, 0.336, 0.019,      //
        0.234, -0.182, 0.396, 0.350, 0.095, 0.724;
    Mat b_c(6, 2);
    b_c << 1.087, 0.275, 0.958, -0.122, 0.000, -1.952, -1.740, -0.652, -0.191, -1.351, 0.761, 1.177;
    Mat b_d(6, 2);
    b_d << 1.523, -0.755, -0.261, 0.114, 0.000, -1.337, 0.670, 0.408, -0.618, -0.948, -1.014, 0.616;
    Mat c(2, 6);
    c << 0.672, 1.604, 1.222, 0.454, -0.552, -0.283, //
        0.757, 0.993, -0.198, -1.665, -1.084, 1.653;
    return LinearHybridSystem(a_c, a_d, b_c, b_d, c);
}

inline SignalGenerator generator() {
    Mat s(1, 1), j(1, 1), l(2, 1);
    s << 2.0;
    j << 0.01;
    l << 0.2, 0.15;
    return SignalGenerator(s, j, l, l, Vec::Constant(1, 0.2739));
}

inline HybridFilter filter() {
    Mat q_c(1, 1), q_d(1, 1), r(1, 2);
    q_c << 1.0;
    q_d << 0.1;
    r << 0.2, 0.16;
    return HybridFilter(q_c, q_d, r, r, Vec::Zero(1));
}

/// Flow-set boundary: sin(sqrt(3)/2 t) + 0.8 tri(sqrt(5)(t-1)) + 3.
inline Guard guard() {
    Boundary b;
    b.offset = 3.0;
    b.sin_amp = 1.0;
    b.sin_freq = std::sqrt(3.0) / 2.0;
    b.tri_amp = 0.8;
    b.tri_freq = std::sqrt(5.0);
    b.tri_phase = 1.0;
    return Guard{b, 0};
}

inline Vec x0() {
    Vec x(6);
    x << 4.3532, 4.8615, 0.5849, 2.5416, 3.7778, 0.5499;
    return x;
}

/// Initial value used for the forward warm-up of the Pi recursion.
inline Mat pi_warmup_init() {
    Mat p(6, 1);
    p << 0.3377, 0.9001, 0.3692, 0.1112, 0.7803, 0.3897;
    return p;
}

/// Final value used for the backward pass of the Upsilon recursion.
inline Mat upsilon_final() {
    Mat u(1, 6);
    u << 0.1504, -0.8804, -0.5304, -0.2937, 0.6424, -0.9692;
    return u;
}

/// Decaying test input [e^{-t}, e^{-2t}] for the swapped interconnection.
inline Vec decaying_input(double t) {
    Vec u(2);
    u << std::exp(-t), std::exp(-2.0 * t);
    return u;
}

/// State-triggered domain of the benchmark over [t_start, t_end], anchored at
/// the generator's omega0 at t = 0.
inline HybridTimeDomain domain(const SignalGenerator& gen, double t_start, double t_end) {
    const TriggerContext ctx = gen.trigger_context(0.0, 0);
    return build_domain(StateTriggeredRule{guard()}, TimeWindow{t_start, t_end}, &ctx);
}

}  // namespace hymor::benchmark
