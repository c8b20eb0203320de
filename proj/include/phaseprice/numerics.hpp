#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "phaseprice/errors.hpp"

namespace phaseprice::numerics {

struct QuadratureSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_subdivisions = 200;
    void validate() const;
};

struct OdeSpec {
    double initial_step = 1e-3;
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    long max_steps = 1000000;
    void validate() const;
};

struct OptimizerSpec {
    int max_iterations = 2000;
    double tolerance = 1e-8;   // objective-spread convergence tolerance
    int restarts = 3;
    std::uint64_t seed = 0;
    void validate() const;
};

// Adaptive Gauss-Kronrod 15(7) on [a, b]. Throws integration_error (carrying
// the best estimate and error bound) if the subdivision budget is exhausted
// before the tolerance is met. Semi-infinite integrals are the caller's
// responsibility: truncate at a model quantile.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec = {});

// Scalar Dormand-Prince 5(4) with dense output at the requested grid points.
// t_grid must be ascending with t_grid.front() >= t0. Throws ode_error with
// the last accepted (t, y) on step underflow or non-finite state.
std::vector<double> solve_ivp(const std::function<double(double, double)>& rhs,
                              double t0, double y0,
                              const std::vector<double>& t_grid,
                              const OdeSpec& spec = {});

// Row-vector action v * exp(S t).
Eigen::RowVectorXd matrix_exp_action(const Eigen::MatrixXd& S, double t,
                                     const Eigen::RowVectorXd& v);

struct MinimizeResult {
    std::vector<double> x;
    double f = 0.0;
    bool improved_over_start = false;  // false => x is the start point verbatim
    bool converged = false;
    int evaluations = 0;
    int restarts_used = 0;
};

// Multi-start Nelder-Mead with a short central-difference descent polish.
// Deterministic given spec.seed; the returned point is the best over every
// objective evaluation made.
MinimizeResult minimize(const std::function<double(const std::vector<double>&)>& objective,
                        const std::vector<double>& x0, const OptimizerSpec& spec = {});

// -- shared scalar kernels ---------------------------------------------------

double normal_cdf(double x);
// Inverse standard-normal CDF, polished to near machine precision.
double normal_quantile(double p);

// Regularized incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a), a > 0, x >= 0.
double gamma_q(double a, double x);

// SplitMix64-style avalanche; used to derive independent RNG streams.
std::uint64_t mix64(std::uint64_t z);
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace phaseprice::numerics
