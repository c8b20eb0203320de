#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace phaseprice {

// Invalid parameters, malformed inputs, contract violations by the caller.
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical routine failed to meet its tolerance contract.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Quadrature did not converge within the subdivision budget.
// Carries the best estimate so callers can decide whether to proceed.
struct integration_error : numeric_error {
    integration_error(const std::string& msg, double estimate_, double error_bound_)
        : numeric_error(msg), estimate(estimate_), error_bound(error_bound_) {}
    double estimate;
    double error_bound;
};

// ODE step underflow or state blow-up; carries the last accepted point.
struct ode_error : numeric_error {
    ode_error(const std::string& msg, double t_, std::vector<double> y_)
        : numeric_error(msg), t(t_), y(std::move(y_)) {}
    double t;
    std::vector<double> y;
};

struct io_error : std::runtime_error {
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace phaseprice
