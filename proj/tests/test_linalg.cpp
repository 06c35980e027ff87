#include <catch2/catch_amalgamated.hpp>

#include "hymor/linalg.hpp"
#include "test_oracles.hpp"

using namespace hymor;
using Catch::Approx;

TEST_CASE("expm identity and scalar cases") {
    std::mt19937_64 rng(1);
    Mat a = oracles::random_mat(3, 3, rng);
    CHECK((expm(a, 0.0) - Mat::Identity(3, 3)).norm() == 0.0);

    Mat z = Mat::Zero(2, 2);
    CHECK((expm(z, 1.7) - Mat::Identity(2, 2)).norm() == 0.0);

    Mat s(1, 1);
    s << -1.0;
    CHECK(expm(s, 1.0)(0, 0) == Approx(0.367879441171442).epsilon(1e-12));

    Mat rect(2, 3);
    rect.setZero();
    CHECK_THROWS_AS(expm(rect, 1.0), DimensionError);
}

TEST_CASE("expm semigroup property against repeated-squaring oracle") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        Mat a = oracles::random_mat(4, 4, rng);
        if (a.norm() > 2.0) a *= 2.0 / a.norm();
        const double t = 0.3 + 0.2 * trial / 50.0;

        const Mat two_step = expm(a, 2.0 * t);
        const Mat squared = expm(a, t) * expm(a, t);
        CHECK((two_step - squared).cwiseAbs().maxCoeff() < 1e-10);

        const Mat reference = oracles::expm_taylor_squaring(a, 2.0 * t);
        CHECK((two_step - reference).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("expm semigroup at larger arguments") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        Mat a = oracles::random_mat(4, 4, rng);
        const double budget = 10.0 / a.norm();
        const double s = 0.37 * budget, t = 0.63 * budget;
        const Mat lhs = expm(a, s + t);
        const Mat rhs = expm(a, s) * expm(a, t);
        CHECK((lhs - rhs).norm() < 1e-9 * std::max(1.0, lhs.norm()));
    }
}

TEST_CASE("solve_sylvester degenerate and scalar cases") {
    std::mt19937_64 rng(3);
    Mat m0 = oracles::random_mat(3, 3, rng);
    // L = 0, R = I: X I - 0 X = M  =>  X = M.
    CHECK((solve_sylvester(Mat::Zero(3, 3), Mat::Identity(3, 3), m0) - m0).norm() < 1e-12);

    Mat a(1, 1), b(1, 1), m(1, 1);
    a << 2.0;
    b << 5.0;
    m << 1.2;
    CHECK(solve_sylvester(a, b, m)(0, 0) == Approx(1.2 / (5.0 - 2.0)).epsilon(1e-13));
}

TEST_CASE("solve_sylvester against a constructed solution") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        Mat l = oracles::random_mat(3, 3, rng);
        Mat r = oracles::random_mat(3, 3, rng) + 6.0 * Mat::Identity(3, 3);  // spectra pushed apart
        Mat x_true = oracles::random_mat(3, 3, rng);
        Mat m = x_true * r - l * x_true;
        Mat x = solve_sylvester(l, r, m);
        CHECK((x - x_true).cwiseAbs().maxCoeff() < 1e-9);
        const double residual = (x * r - l * x - m).norm();
        CHECK(residual <= 1e-10 * (m.norm() + x.norm() * (l.norm() + r.norm()) + 1.0));
    }
}

TEST_CASE("solve_sylvester rejects overlapping spectra") {
    Mat l = Mat::Identity(2, 2);
    Mat r = Mat::Identity(2, 2);
    Mat m = Mat::Ones(2, 2);
    CHECK_THROWS_AS(solve_sylvester(l, r, m), SingularityError);
    CHECK_THROWS_WITH(solve_sylvester(l, r, m), Catch::Matchers::ContainsSubstring("eigenvalue"));
}

TEST_CASE("spectral radius basics and characteristic-polynomial oracle") {
    CHECK(spectral_radius(Mat::Identity(3, 3)) == Approx(1.0));

    Mat d(2, 2);
    d << 0.5, 0.0, 0.0, -0.25;
    CHECK(spectral_radius(d) == Approx(0.5));

    Mat rect(2, 3);
    rect.setZero();
    CHECK_THROWS_AS(spectral_radius(rect), DimensionError);

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 25; ++trial) {
        Mat a = oracles::random_mat(5, 5, rng);
        CHECK(spectral_radius(a) == Approx(oracles::spectral_radius_charpoly(a)).margin(1e-8));
    }
}

TEST_CASE("spectral radius of expm matches dominant eigenvalue growth") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        // Diagonalizable by construction: V diag(lambda) V^{-1}.
        Mat v = oracles::random_mat(4, 4, rng) + 3.0 * Mat::Identity(4, 4);
        Vec lambda = oracles::random_mat(4, 1, rng);
        Mat a = v * lambda.asDiagonal() * v.inverse();
        const double t = 0.8;
        CHECK(spectral_radius(expm(a, t)) ==
              Approx(std::exp(t * lambda.maxCoeff())).epsilon(1e-8));
    }
}

TEST_CASE("cross integral matches quadrature and the scalar closed form") {
    // scalar: int_0^1 e^{-(1-s)} * 1 * e^{0} ds = 1 - e^{-1}
    Mat a(1, 1), b(1, 1), c(1, 1);
    a << -1.0;
    b << 1.0;
    c << 0.0;
    CHECK(expm_cross_integral(a, b, c, 1.0)(0, 0) == Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));

    std::mt19937_64 rng(23);
    Mat am = oracles::random_mat(3, 3, rng), bm = oracles::random_mat(3, 2, rng),
        cm = oracles::random_mat(2, 2, rng);
    const double dt = 0.9;
    const Mat via_block = expm_cross_integral(am, bm, cm, dt);
    const Mat via_quad = oracles::simpson(
        [&](double s) -> Mat { return (expm(am, dt - s) * bm * expm(cm, s)).eval(); }, 0.0, dt);
    CHECK((via_block - via_quad).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("observability and reachability rank checks") {
    Mat s(2, 2);
    s << 0.0, 1.0, -1.0, 0.0;
    Mat l(1, 2);
    l << 1.0, 0.0;
    CHECK(is_observable(s, l));
    CHECK_FALSE(is_observable(Mat::Identity(2, 2), Mat::Zero(1, 2)));

    Mat q = Mat::Identity(2, 2);
    Mat r(2, 1);
    r << 1.0, 0.0;
    CHECK_FALSE(is_reachable(q, r));  // identity cannot spread a single direction
    Mat q2(2, 2);
    q2 << 0.0, 1.0, 0.0, 0.0;
    CHECK(is_reachable(q2, (Mat(2, 1) << 0.0, 1.0).finished()));
}
