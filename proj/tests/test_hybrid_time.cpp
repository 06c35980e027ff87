#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "hymor/hybrid_time.hpp"
#include "test_oracles.hpp"

using namespace hymor;
using Catch::Approx;
namespace {
constexpr double pi = std::numbers::pi;

// The benchmark guard boundary: sin(sqrt(3)/2 t) + 0.8 tri(sqrt(5)(t-1)) + 3.
Boundary bench_boundary() {
    Boundary b;
    b.offset = 3.0;
    b.sin_amp = 1.0;
    b.sin_freq = std::sqrt(3.0) / 2.0;
    b.tri_amp = 0.8;
    b.tri_freq = std::sqrt(5.0);
    b.tri_phase = 1.0;
    return b;
}
}  // namespace

TEST_CASE("triangular wave closed form") {
    CHECK(triangular_wave(0.0) == Approx(-1.0));
    CHECK(triangular_wave(pi) == Approx(1.0));
    CHECK(triangular_wave(pi / 2.0) == Approx(0.0).margin(1e-15));

    // quadrature oracle for the defining integral at t = 2*pi
    double integral = 0.0;
    const int steps = 400000;
    for (int i = 0; i < steps; ++i) {
        const double v = (i + 0.5) * (2.0 * pi / steps);
        integral += (std::sin(v) >= 0.0 ? 1.0 : -1.0) * (2.0 * pi / steps);
    }
    CHECK(triangular_wave(2.0 * pi) == Approx(2.0 / pi * integral - 1.0).margin(1e-10));
    CHECK(triangular_wave(2.0 * pi) == Approx(-1.0).margin(1e-10));

    // periodicity and evenness
    CHECK(triangular_wave(1.3) == Approx(triangular_wave(1.3 + 2.0 * pi)).margin(1e-12));
    CHECK(triangular_wave(-2.2360679) == Approx(triangular_wave(2.2360679)).margin(1e-12));
}

TEST_CASE("detect_next_jump on the scalar exponential benchmark") {
    // trigger 0.2739 e^{2t} against the constant boundary 3: analytic root.
    const double omega0 = 0.2739;
    auto trig = [&](double t) { return omega0 * std::exp(2.0 * t); };
    auto hit = detect_next_jump(Boundary::constant(3.0), trig, 0.0, 5.0, 0.01);
    REQUIRE(hit.has_value());
    CHECK(*hit == Approx(std::log(3.0 / omega0) / 2.0).margin(2e-9));
}

TEST_CASE("detect_next_jump end-of-window and precondition") {
    auto zero = [](double) { return 0.0; };
    CHECK_FALSE(detect_next_jump(Boundary::constant(3.0), zero, 0.0, 10.0, 0.1).has_value());
    auto outside = [](double) { return 5.0; };
    CHECK_THROWS_AS(detect_next_jump(Boundary::constant(3.0), outside, 0.0, 10.0, 0.1), ValidationError);
}

TEST_CASE("bisection agrees with a dense-sampling oracle on the benchmark guard") {
    const Boundary b = bench_boundary();
    const double omega0 = 0.2739;
    auto trig = [&](double t) { return omega0 * std::exp(2.0 * t); };
    auto hit = detect_next_jump(b, trig, 0.0, 10.0, 0.01);
    REQUIRE(hit.has_value());

    // dense sampling at step 1e-4, refined linearly within the bracketing step
    double t_dense = -1.0;
    for (double t = 0.0; t < 10.0; t += 1e-4) {
        const double f0 = trig(t) - b(t);
        const double f1 = trig(t + 1e-4) - b(t + 1e-4);
        if (f0 < 0.0 && f1 >= 0.0) {
            t_dense = t + 1e-4 * f0 / (f0 - f1);
            break;
        }
    }
    REQUIRE(t_dense > 0.0);
    CHECK(*hit == Approx(t_dense).margin(1e-6));
}

TEST_CASE("build_domain periodic and explicit rules") {
    auto dom = build_domain(PeriodicRule{1.0, 0.0}, TimeWindow{0.0, 5.0});
    REQUIRE(dom.jump_instants().size() == 6);
    for (int k = 0; k <= 5; ++k) CHECK(dom.jump_instants()[size_t(k)] == Approx(double(k)).margin(1e-12));
    CHECK(dom.intervals().size() == 5);  // the instant at t_start fires no map
    CHECK(dom.intervals().front().j == 0);
    CHECK(dom.intervals().back().ends_with_jump);
    CHECK(dom.is_periodic());

    auto ex = build_domain(ExplicitRule{{0.0, 0.7, 1.9}}, TimeWindow{0.0, 1.9});
    auto dw = ex.dwell_range();
    REQUIRE(dw.has_value());
    CHECK(dw->first == Approx(0.7));
    CHECK(dw->second == Approx(1.2));

    CHECK_THROWS_AS(build_domain(ExplicitRule{{0.0, 1.0, 1.0}}, TimeWindow{0.0, 2.0}), ValidationError);
    CHECK_THROWS_AS(build_domain(PeriodicRule{-1.0, 0.0}, TimeWindow{0.0, 2.0}), ValidationError);
}

TEST_CASE("state-triggered domain: growth resets and dwell times") {
    // scalar generator-like trigger: s' = 2s, jump s+ = 0.01 s
    TriggerContext ctx;
    ctx.anchor_state = Vec::Constant(1, 0.2739);
    ctx.t_anchor = 0.0;
    ctx.flow = [](const Vec& s, double dt) { return (s * std::exp(2.0 * dt)).eval(); };
    ctx.jump = [](const Vec& s) { return (0.01 * s).eval(); };

    StateTriggeredRule rule{Guard{bench_boundary(), 0}};
    auto dom = build_domain(rule, TimeWindow{0.0, 30.0}, &ctx);
    REQUIRE(dom.jump_instants().size() >= 10);
    auto dw = dom.dwell_range();
    REQUIRE(dw.has_value());
    CHECK(dw->first > 1.0);
    CHECK(dw->second < 3.0);

    // reproducible: rebuilding gives the same instants within the event tolerance
    auto dom2 = build_domain(rule, TimeWindow{0.0, 30.0}, &ctx);
    REQUIRE(dom2.jump_instants().size() == dom.jump_instants().size());
    for (size_t i = 0; i < dom.jump_instants().size(); ++i)
        CHECK(dom.jump_instants()[i] == Approx(dom2.jump_instants()[i]).margin(1e-9));

    // warm-up extension: no jumps in [-10, 0] since the trigger decays backward
    auto dom3 = build_domain(rule, TimeWindow{-10.0, 30.0}, &ctx);
    CHECK(dom3.jump_instants().size() == dom.jump_instants().size());
    CHECK(dom3.intervals().front().j == 0);  // interval containing t = 0
    CHECK(dom3.interval_at(0.0).t_begin == Approx(-10.0));
}

TEST_CASE("negative j indexing for warm-up windows with jumps before zero") {
    auto dom = build_domain(PeriodicRule{1.0, 0.5}, TimeWindow{-2.0, 2.0});
    // instants: -1.5, -0.5, 0.5, 1.5
    REQUIRE(dom.jump_instants().size() == 4);
    CHECK(dom.intervals().front().j == -2);
    CHECK(dom.interval_at(0.0).j == 0);
    CHECK(dom.interval_by_j(0).t_begin == Approx(-0.5));
}

TEST_CASE("dwell-time bounds are enforced") {
    DomainBuildOptions opts;
    opts.limits.delta_lower = 0.5;
    CHECK_THROWS_AS(build_domain(ExplicitRule{{0.0, 0.3, 1.0}}, TimeWindow{0.0, 1.0}, nullptr, opts),
                    ValidationError);
}
