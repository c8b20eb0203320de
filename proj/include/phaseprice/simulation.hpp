#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "phaseprice/converter.hpp"

namespace phaseprice {

// One simulated patient: initial charge, LOS, total charge y0 e^t, and the
// visited bands with entry times.
struct CohortRecord {
    double y0 = 0.0;
    double t = 0.0;
    double y = 0.0;
    std::vector<std::pair<int, double>> path;  // (band 1..n, entry time)
};

struct Cohort {
    std::vector<CohortRecord> records;
    long horizon_extensions = 0;  // LOS draws resolved beyond the curve horizon
};

// Times at which the trajectory y0 e^s crosses successive partition curves,
// strictly increasing; empty when the trajectory never catches a curve.
std::vector<double> crossing_times(const FittedModel& m, double y0);

// Inverse-transform LOS draw for a fixed initial charge. u in (0, 1];
// the last band's hazard continues beyond the horizon (sets *extrapolated).
double discharge_time(const FittedModel& m, double y0, double u, bool* extrapolated);

CohortRecord simulate_patient(const FittedModel& m, std::mt19937_64& rng,
                              bool* extrapolated = nullptr);

// Deterministic given seed; patients draw from streams derived from
// (seed, patient index), so results do not depend on evaluation order.
Cohort simulate_cohort(const FittedModel& m, long size, std::uint64_t seed);

}  // namespace phaseprice
