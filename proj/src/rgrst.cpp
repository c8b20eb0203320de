#include "phaseprice/rgrst.hpp"

#include <cmath>

#include "phaseprice/numerics.hpp"

namespace phaseprice {

namespace {
constexpr double kLogSqrt2Pi = 0.9189385332046727;  // ln sqrt(2 pi)
}

void LognormalParams::validate() const {
    if (!(sigma > 0.0)) throw validation_error("LognormalParams: sigma must be > 0");
    if (!std::isfinite(mu)) throw validation_error("LognormalParams: mu must be finite");
}

double log_initial_pdf(const LognormalParams& lp, double y) {
    if (!(y > 0.0)) throw validation_error("initial_pdf: charge must be > 0");
    const double z = (std::log(y) - lp.mu) / lp.sigma;
    return -kLogSqrt2Pi - std::log(lp.sigma) - std::log(y) - 0.5 * z * z;
}

double initial_pdf(const LognormalParams& lp, double y) {
    return std::exp(log_initial_pdf(lp, y));
}

double lognormal_quantile(const LognormalParams& lp, double p) {
    return std::exp(lp.mu + lp.sigma * numerics::normal_quantile(p));
}

double lognormal_cdf(const LognormalParams& lp, double y) {
    if (!(y > 0.0)) return 0.0;
    return numerics::normal_cdf((std::log(y) - lp.mu) / lp.sigma);
}

double log_potential_pdf(const GrowthModel& gm, double y, double t) {
    if (!(t >= 0.0)) throw validation_error("potential_pdf: t must be >= 0");
    return log_initial_pdf(gm.initial, y * std::exp(-t)) - t;
}

double potential_pdf(const GrowthModel& gm, double y, double t) {
    return std::exp(log_potential_pdf(gm, y, t));
}

double flow(const GrowthModel&, double y, double t, double s) {
    if (!(s >= 0.0) || !(s <= t))
        throw validation_error("flow: lookback s must satisfy 0 <= s <= t");
    return y * std::exp(-s);
}

double flow_inverse(const GrowthModel&, double x, double s) {
    if (!(s >= 0.0)) throw validation_error("flow_inverse: s must be >= 0");
    return x * std::exp(s);
}

}  // namespace phaseprice
