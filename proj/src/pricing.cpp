#include "phaseprice/pricing.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace phaseprice {

namespace {

struct PriceParts {
    double numerator = 0.0;
    double denominator = 0.0;
    bool vacuous = true;
    double value() const { return numerator / denominator; }
};

PriceParts price_parts(const FittedModel& m, int band, double t,
                       const numerics::QuadratureSpec& quad) {
    const int n = m.params.n();
    if (band < 1 || band > n) throw validation_error("price: band out of range");
    if (!(t >= 0.0)) throw validation_error("price: t must be >= 0");

    const double lo = m.curves->value(band - 1, t);
    const double hi =
        band == n ? std::max(m.charge_cutoff(t), lo) : m.curves->value(band, t);

    PriceParts parts;
    if (!(hi > lo)) return parts;
    auto weight = [&](double x) {
        return std::exp(log_potential_pdf(m.growth(), x, t) + m.rho.log_band(band, x, t));
    };
    parts.denominator = numerics::integrate(weight, lo, hi, quad);
    parts.numerator =
        numerics::integrate([&](double x) { return (x - lo) * weight(x); }, lo, hi, quad);
    parts.vacuous =
        !(parts.denominator > kVacuousOccupancy) || !std::isfinite(parts.numerator);
    return parts;
}

}  // namespace

double price(const FittedModel& m, int band, double t,
             const numerics::QuadratureSpec& quad) {
    const PriceParts parts = price_parts(m, band, t, quad);
    if (parts.vacuous)
        throw numeric_error("price: band " + std::to_string(band) +
                            " is vacuous at t=" + std::to_string(t) +
                            " (occupancy " + std::to_string(parts.denominator) + ")");
    return parts.value();
}

std::vector<PriceCurve> price_table(const FittedModel& m,
                                    const std::vector<double>& t_grid,
                                    const numerics::QuadratureSpec& quad) {
    std::vector<PriceCurve> table;
    table.reserve(static_cast<std::size_t>(m.params.n()));
    for (int band = 1; band <= m.params.n(); ++band) {
        PriceCurve curve;
        curve.band = band;
        for (double t : t_grid) {
            const PriceParts parts = price_parts(m, band, t, quad);
            curve.t.push_back(t);
            curve.numerator.push_back(parts.numerator);
            curve.denominator.push_back(parts.denominator);
            curve.price.push_back(parts.vacuous
                                      ? std::numeric_limits<double>::quiet_NaN()
                                      : parts.value());
        }
        table.push_back(std::move(curve));
    }
    return table;
}

}  // namespace phaseprice
