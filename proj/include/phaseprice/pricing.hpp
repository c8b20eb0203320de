#pragma once

#include <vector>

#include "phaseprice/converter.hpp"

namespace phaseprice {

// Expected excess charge over the band floor, conditional on sitting in the
// band and still being admitted. Retains the raw integrals for diagnostics.
struct PriceCurve {
    int band = 0;
    std::vector<double> t;
    std::vector<double> price;      // NaN marks a vacuous cell
    std::vector<double> numerator;
    std::vector<double> denominator;
};

// Occupancy below this is treated as "band unoccupied" (vacuous).
inline constexpr double kVacuousOccupancy = 1e-250;

double price(const FittedModel& m, int band, double t,
             const numerics::QuadratureSpec& quad = {1e-8, 1e-200, 200});

std::vector<PriceCurve> price_table(const FittedModel& m,
                                    const std::vector<double>& t_grid,
                                    const numerics::QuadratureSpec& quad = {1e-8, 1e-200,
                                                                            200});

}  // namespace phaseprice
