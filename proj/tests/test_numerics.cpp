#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "phaseprice/numerics.hpp"

using namespace phaseprice;
using namespace phaseprice::numerics;

TEST_CASE("integrate: constants and polynomials") {
    CHECK(integrate([](double) { return 1.0; }, 0.0, 1.0) == doctest::Approx(1.0));
    CHECK(integrate([](double x) { return x; }, 0.0, 2.0) == doctest::Approx(2.0));
    CHECK(integrate([](double) { return 1.0; }, 3.0, 3.0) == 0.0);
}

TEST_CASE("integrate: standard normal mass matches the error function") {
    auto pdf = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); };
    const double expected = std::erf(8.0 / std::sqrt(2.0));
    const double got = integrate(pdf, -8.0, 8.0, {1e-12, 1e-14, 200});
    CHECK(std::abs(got - expected) < 1e-10);
}

TEST_CASE("integrate: additive over subintervals") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto f = [](double x) { return std::sin(3 * x) + x * x; };
    for (int rep = 0; rep < 20; ++rep) {
        const double a = -2 + 4 * unif(rng);
        const double b = a + 3 * unif(rng);
        const double c = b + 3 * unif(rng);
        const QuadratureSpec spec{1e-10, 1e-13, 200};
        const double whole = integrate(f, a, c, spec);
        const double split = integrate(f, a, b, spec) + integrate(f, b, c, spec);
        CHECK(std::abs(whole - split) < 1e-9);
    }
}

TEST_CASE("integrate: reports non-convergence with its best estimate") {
    // integrand too spiky for a 3-subdivision budget
    auto spike = [](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3141) + 1e-12); };
    CHECK_THROWS_AS(integrate(spike, 0.0, 1.0, {1e-12, 1e-14, 3}), integration_error);
    try {
        integrate(spike, 0.0, 1.0, {1e-12, 1e-14, 3});
    } catch (const integration_error& e) {
        CHECK(std::isfinite(e.estimate));
        CHECK(e.error_bound > 0.0);
    }
}

TEST_CASE("integrate: rejects invalid input") {
    CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 1.0, 0.0), validation_error);
    QuadratureSpec bad;
    bad.rel_tol = -1.0;
    CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0.0, 1.0, bad),
                    validation_error);
}

TEST_CASE("solve_ivp: exponentials and quadratics") {
    auto grow = [](double, double y) { return y; };
    CHECK(solve_ivp(grow, 0.0, 1.0, {1.0}).at(0) ==
          doctest::Approx(std::exp(1.0)).epsilon(1e-8));

    auto decay = [](double, double y) { return -y; };
    CHECK(solve_ivp(decay, 0.0, 2.0, {std::log(2.0)}).at(0) ==
          doctest::Approx(1.0).epsilon(1e-8));

    auto ramp = [](double t, double) { return t; };
    CHECK(solve_ivp(ramp, 0.0, 0.0, {3.0}).at(0) == doctest::Approx(4.5).epsilon(1e-8));
}

TEST_CASE("solve_ivp: dense output on linear problems matches the closed form") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        const double a = -2.0 + 4.0 * unif(rng);
        const double y0 = 0.5 + unif(rng);
        std::vector<double> grid;
        double t = 0.0;
        for (int k = 0; k < 7; ++k) {
            t += 0.1 + unif(rng);
            grid.push_back(t);
        }
        const auto got = solve_ivp([a](double, double y) { return a * y; }, 0.0, y0, grid,
                                   {1e-3, 1e-10, 1e-12, 100000});
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double expected = y0 * std::exp(a * grid[k]);
            CHECK(std::abs(got[k] - expected) <=
                  1e-8 * std::max(1.0, std::abs(expected)));
        }
    }
}

TEST_CASE("solve_ivp: rejects malformed grids and reports blow-ups") {
    auto grow = [](double, double y) { return y; };
    CHECK_THROWS_AS(solve_ivp(grow, 1.0, 1.0, {0.5}), validation_error);
    CHECK_THROWS_AS(solve_ivp(grow, 0.0, 1.0, {1.0, 1.0}), validation_error);

    auto blowup = [](double, double y) { return y * y; };  // escapes at t = 1
    CHECK_THROWS_AS(solve_ivp(blowup, 0.0, 1.0, {2.0}, {1e-3, 1e-10, 1e-12, 100000}),
                    ode_error);
}

TEST_CASE("matrix_exp_action: scalar cases") {
    Eigen::MatrixXd zero(1, 1);
    zero << 0.0;
    Eigen::RowVectorXd v(1);
    v << 1.0;
    CHECK(matrix_exp_action(zero, 5.0, v)(0) == doctest::Approx(1.0));

    Eigen::MatrixXd decay(1, 1);
    decay << -1.0;
    CHECK(matrix_exp_action(decay, 1.0, v)(0) == doctest::Approx(std::exp(-1.0)));
}

namespace {

// independent truncated-series oracle: v * exp(S t) by explicit Taylor sums
Eigen::RowVectorXd taylor_exp_action(const Eigen::MatrixXd& S, double t,
                                     const Eigen::RowVectorXd& v) {
    Eigen::RowVectorXd sum = v;
    Eigen::RowVectorXd term = v;
    for (int k = 1; k < 200; ++k) {
        term = term * S * (t / k);
        sum += term;
        if (term.norm() < 1e-16 * sum.norm()) break;
    }
    return sum;
}

}  // namespace

TEST_CASE("matrix_exp_action: random bidiagonal matrices match a Taylor oracle") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(0.1, 2.0);
    for (int rep = 0; rep < 25; ++rep) {
        Eigen::MatrixXd S = Eigen::MatrixXd::Zero(4, 4);
        for (int i = 0; i < 4; ++i) {
            const double lambda = i < 3 ? unif(rng) : 0.0;
            S(i, i) = -(unif(rng) + lambda);
            if (i < 3) S(i, i + 1) = lambda;
        }
        Eigen::RowVectorXd v(4);
        for (int i = 0; i < 4; ++i) v(i) = unif(rng);
        const Eigen::RowVectorXd got = matrix_exp_action(S, 2.0, v);
        const Eigen::RowVectorXd expected = taylor_exp_action(S, 2.0, v);
        CHECK((got - expected).norm() < 1e-9 * expected.norm());
    }
}

TEST_CASE("matrix_exp_action: semigroup property") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unif(0.1, 2.0);
    for (int rep = 0; rep < 20; ++rep) {
        Eigen::MatrixXd S = Eigen::MatrixXd::Zero(3, 3);
        for (int i = 0; i < 3; ++i) {
            const double lambda = i < 2 ? unif(rng) : 0.0;
            S(i, i) = -(unif(rng) + lambda);
            if (i < 2) S(i, i + 1) = lambda;
        }
        Eigen::RowVectorXd v(3);
        for (int i = 0; i < 3; ++i) v(i) = unif(rng);
        const double t1 = unif(rng), t2 = unif(rng);
        const Eigen::RowVectorXd once = matrix_exp_action(S, t1 + t2, v);
        const Eigen::RowVectorXd twice =
            matrix_exp_action(S, t2, matrix_exp_action(S, t1, v));
        CHECK((once - twice).norm() < 1e-8 * std::max(1.0, once.norm()));
    }
}

TEST_CASE("minimize: quadratic bowls") {
    OptimizerSpec spec;
    spec.seed = 42;
    auto r1 = minimize([](const std::vector<double>& x) { return (x[0] - 3) * (x[0] - 3); },
                       {0.0}, spec);
    CHECK(std::abs(r1.x[0] - 3.0) < 1e-5);
    CHECK(r1.improved_over_start);

    auto r2 = minimize(
        [](const std::vector<double>& x) { return x[0] * x[0] + x[1] * x[1]; },
        {1.0, 1.0}, spec);
    CHECK(std::abs(r2.x[0]) < 1e-5);
    CHECK(std::abs(r2.x[1]) < 1e-5);
}

TEST_CASE("minimize: Rosenbrock from the standard start") {
    OptimizerSpec spec;
    spec.seed = 1;
    spec.max_iterations = 4000;
    auto rosen = [](const std::vector<double>& x) {
        const double a = 1 - x[0];
        const double b = x[1] - x[0] * x[0];
        return a * a + 100 * b * b;
    };
    auto r = minimize(rosen, {-1.2, 1.0}, spec);
    CHECK(std::abs(r.x[0] - 1.0) < 1e-3);
    CHECK(std::abs(r.x[1] - 1.0) < 1e-3);
}

TEST_CASE("minimize: never returns a point worse than the start") {
    OptimizerSpec spec;
    spec.seed = 9;
    spec.max_iterations = 60;
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<double> x0{unif(rng), unif(rng), unif(rng)};
        auto wiggly = [](const std::vector<double>& x) {
            double s = 0.0;
            for (double xi : x) s += std::cos(5 * xi) + 0.1 * xi * xi;
            return s;
        };
        const double f0 = wiggly(x0);
        auto r = minimize(wiggly, x0, spec);
        CHECK(r.f <= f0 + 1e-14);
    }
}

TEST_CASE("minimize: flat objective returns the start with the warning flag") {
    OptimizerSpec spec;
    spec.seed = 2;
    spec.max_iterations = 50;
    auto r = minimize([](const std::vector<double>&) { return 1.0; }, {0.5, -0.5}, spec);
    CHECK_FALSE(r.improved_over_start);
    CHECK(r.x[0] == 0.5);
    CHECK(r.x[1] == -0.5);
}

TEST_CASE("minimize: deterministic given the seed") {
    OptimizerSpec spec;
    spec.seed = 123;
    auto f = [](const std::vector<double>& x) {
        return std::pow(x[0] - 0.7, 4) + std::abs(x[1] + 0.2);
    };
    auto a = minimize(f, {2.0, 2.0}, spec);
    auto b = minimize(f, {2.0, 2.0}, spec);
    CHECK(a.x == b.x);
    CHECK(a.f == b.f);
    CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("normal_quantile: inverse of the normal CDF to high precision") {
    CHECK(std::abs(normal_quantile(0.5)) < 1e-15);
    CHECK(normal_quantile(0.8413447460685429) == doctest::Approx(1.0).epsilon(1e-12));
    for (double p : {1e-9, 1e-4, 0.02, 0.3, 0.5, 0.77, 0.9995, 1 - 1e-9}) {
        CHECK(std::abs(normal_cdf(normal_quantile(p)) - p) < 1e-14 * std::max(p, 1 - p) + 1e-16);
    }
    CHECK_THROWS_AS(normal_quantile(0.0), validation_error);
    CHECK_THROWS_AS(normal_quantile(1.0), validation_error);
}

TEST_CASE("stream_seed: distinct indexed streams") {
    CHECK(stream_seed(1, 0) != stream_seed(1, 1));
    CHECK(stream_seed(1, 0) != stream_seed(2, 0));
    CHECK(stream_seed(5, 7) == stream_seed(5, 7));
}
