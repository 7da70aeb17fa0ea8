#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>

#include "grinprop/errors.hpp"
#include "grinprop/hermite.hpp"
#include "grinprop/quadrature.hpp"

using grinprop::build_quadrature;
using grinprop::integrate;

TEST_CASE("plain Gaussian integrals") {
    auto rule = build_quadrature(-120.0, 120.0, 2048);
    double g = integrate(rule, [](double x) { return std::exp(-x * x / 25.0); });
    CHECK(g == Catch::Approx(5.0 * std::sqrt(M_PI)).epsilon(1e-13));
    CHECK(g == Catch::Approx(8.8622692545).epsilon(1e-9));
    double odd = integrate(rule, [](double x) { return x * std::exp(-x * x / 25.0); });
    CHECK(std::abs(odd) < 1e-13);
}

TEST_CASE("unit mass across the working scales") {
    // s from the Fig. 5 source decomposition up to the waveguide mode scale
    for (double s : {0.05, 0.2449489742783178, 0.26420787338332055, 1.0}) {
        double W = 14.0 / s;
        auto rule = build_quadrature(-W, W, 4096);
        double v = integrate(rule, [&](double x) { return std::exp(-x * x * s * s) * s / std::sqrt(M_PI); });
        CHECK(v == Catch::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("sigma sweep 1..20 um with +-12 sigma window") {
    for (double sigma = 1.0; sigma <= 20.0; sigma += 1.0) {
        auto rule = build_quadrature(-12.0 * sigma, 12.0 * sigma, 4096);
        double v = integrate(rule, [&](double x) { return std::exp(-(x / sigma) * (x / sigma)); });
        CHECK(v == Catch::Approx(sigma * std::sqrt(M_PI)).epsilon(1e-12));
    }
}

TEST_CASE("normalization of the n = 3 mode") {
    auto rule = build_quadrature(-80.0, 80.0, 4096);
    double norm = integrate(rule, [](double x) {
        double v = grinprop::hg_eval(3, 0.2, 0.0, x);
        return v * v;
    });
    CHECK(norm == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("doubling the point count is inert") {
    auto r1 = build_quadrature(-100.0, 100.0, 2048);
    auto r2 = build_quadrature(-100.0, 100.0, 4096);
    auto f = [](double x) { return std::cos(1.7 * x) * std::exp(-x * x / 4.0); };
    double want = 2.0 * std::sqrt(M_PI) * std::exp(-1.7 * 1.7);  // a sqrt(pi) exp(-a^2 q^2 / 4)
    CHECK(integrate(r1, f) == Catch::Approx(integrate(r2, f)).epsilon(1e-12));
    CHECK(integrate(r2, f) == Catch::Approx(want).epsilon(1e-12));
}

TEST_CASE("orthonormality at the waveguide scale up to m, n = 200") {
    double s = std::sqrt(2.0 * M_PI / 0.63 * 0.007);
    int M = 201;
    double W = (std::sqrt(2.0 * M - 1.0) + 8.0) / s;
    double q = 2.0 * s * std::sqrt(2.0 * M - 1.0);  // mode-pair product
    auto rule = build_quadrature(-W, W, grinprop::points_for_oscillation(W, q));

    int N = rule.points();
    Eigen::MatrixXd Psi(M, N);
    std::vector<double> col(M);
    for (int i = 0; i < N; ++i) {
        grinprop::hg_eval_row(M - 1, s, 0.0, rule.nodes[i], col.data());
        for (int m = 0; m < M; ++m) Psi(m, i) = col[m];
    }
    Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), N);
    Eigen::MatrixXd gram = Psi * w.asDiagonal() * Psi.transpose();
    double worst = (gram - Eigen::MatrixXd::Identity(M, M)).cwiseAbs().maxCoeff();
    CHECK(worst < 1e-10);
}

TEST_CASE("window guard") {
    auto rule = build_quadrature(-50.0, 50.0, 256);
    CHECK_NOTHROW(grinprop::require_window(rule, -50.0, 50.0, "test"));
    CHECK_THROWS_AS(grinprop::require_window(rule, -50.0, 50.1, "test"), grinprop::NumericalGuardError);
    CHECK_THROWS_AS(grinprop::require_window(rule, -60.0, 0.0, "test"), grinprop::NumericalGuardError);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(build_quadrature(1.0, 1.0, 64), grinprop::ConfigError);
    CHECK_THROWS_AS(build_quadrature(2.0, 1.0, 64), grinprop::ConfigError);
    CHECK_THROWS_AS(build_quadrature(-1.0, 1.0, 8), grinprop::ConfigError);
}

TEST_CASE("weights sum to the window length") {
    auto rule = build_quadrature(-3.0, 17.0, 160);
    double sum = 0.0;
    for (double w : rule.weights) sum += w;
    CHECK(sum == Catch::Approx(20.0).epsilon(1e-14));
    CHECK(rule.points() == 160);
}
