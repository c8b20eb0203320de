#pragma once

#include "phaseprice/errors.hpp"

namespace phaseprice {

// Log-normal parameters of the admission-time charge density.
struct LognormalParams {
    double mu = 0.0;     // log-dollars
    double sigma = 1.0;  // log-dollars, > 0
    void validate() const;
};

// The growth specialization used throughout: conditional mean growth rate
// equal to the current charge, so the potential charge follows y0 * e^t and
// its density is the log-normal pushforward.
struct GrowthModel {
    LognormalParams initial;
};

double initial_pdf(const LognormalParams& lp, double y);
double log_initial_pdf(const LognormalParams& lp, double y);

// Quantile of the initial charge distribution.
double lognormal_quantile(const LognormalParams& lp, double p);
double lognormal_cdf(const LognormalParams& lp, double y);

// Density of the potential charge at time t: initial_pdf(y e^{-t}) e^{-t}.
double potential_pdf(const GrowthModel& gm, double y, double t);
double log_potential_pdf(const GrowthModel& gm, double y, double t);

// Backward characteristic: charge s time units back along the growth flow.
double flow(const GrowthModel& gm, double y, double t, double s);

// Forward flow: charge after growing for s time units.
double flow_inverse(const GrowthModel& gm, double x, double s);

}  // namespace phaseprice
