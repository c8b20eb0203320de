#include "phaseprice/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "phaseprice/random.hpp"

namespace phaseprice {

namespace {

// First s >= s_min with y0 e^s = curve(s), or a negative value when the
// trajectory stays below the curve through the horizon. The log gap
// h(s) = ln y0 + s - ln C(s) is non-decreasing, so a grid binary search
// brackets the root.
double forward_crossing(const Curve& curve, double y0, double s_min, double horizon) {
    const double log_y0 = std::log(y0);
    auto h = [&](double s) { return log_y0 + s - std::log(curve(s)); };
    if (h(horizon) < 0.0) return -1.0;
    if (h(s_min) >= 0.0) return s_min;

    const std::vector<double>& grid = curve.grid();
    std::size_t a = 0, b = grid.size() - 1;
    while (b - a > 1) {
        const std::size_t m = (a + b) / 2;
        if (grid[m] <= s_min) {
            a = m;
            continue;
        }
        (h(grid[m]) < 0.0 ? a : b) = m;
    }
    double lo = std::max(s_min, grid[a]);
    double hi = grid[b];

    double s = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        const double val = h(s);
        (val < 0.0 ? lo : hi) = s;
        const double deriv = 1.0 - curve.derivative(s) / curve(s);
        double next = deriv > 0.0 ? s - val / deriv : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - s) <= 1e-13 * std::max(1.0, s)) return next;
        s = next;
    }
    return s;
}

}  // namespace

std::vector<double> crossing_times(const FittedModel& m, double y0) {
    if (!(y0 > 0.0)) throw validation_error("crossing_times: y0 must be > 0");
    const int n = m.params.n();
    std::vector<double> times;
    int band = band_of(m, y0, 0.0);
    double s = 0.0;
    while (band < n) {
        const Curve& curve = m.curves->curves[static_cast<std::size_t>(band) - 1];
        const double cross = forward_crossing(curve, y0, s, m.horizon());
        if (cross < 0.0) break;
        times.push_back(cross);
        s = cross;
        ++band;
    }
    return times;
}

namespace {

double discharge_given(const FittedModel& m, int first_band,
                       const std::vector<double>& crossings, double u,
                       bool* extrapolated) {
    const double target = -std::log(u);  // cumulative hazard to spend

    double spent = 0.0, s = 0.0;
    int band = first_band;
    for (double cross : crossings) {
        const double rate = m.params.c[static_cast<std::size_t>(band) - 1];
        const double segment = rate * (cross - s);
        if (spent + segment >= target) {
            if (extrapolated) *extrapolated = false;
            return s + (target - spent) / rate;
        }
        spent += segment;
        s = cross;
        ++band;
    }
    const double rate = m.params.c[static_cast<std::size_t>(band) - 1];
    const double t = s + (target - spent) / rate;
    if (extrapolated) *extrapolated = t > m.horizon();
    return t;
}

}  // namespace

double discharge_time(const FittedModel& m, double y0, double u, bool* extrapolated) {
    if (!(u > 0.0 && u <= 1.0))
        throw validation_error("discharge_time: u must be in (0, 1]");
    return discharge_given(m, band_of(m, y0, 0.0), crossing_times(m, y0), u,
                           extrapolated);
}

CohortRecord simulate_patient(const FittedModel& m, std::mt19937_64& rng,
                              bool* extrapolated) {
    // one normal for y0 (inverse CDF), one uniform for the LOS draw
    const double u_y = std::clamp(uniform01(rng), 1e-17, 1.0 - 1e-17);
    const double y0 = std::exp(m.initial.mu +
                               m.initial.sigma * numerics::normal_quantile(u_y));
    const double u_t = uniform01_open(rng);

    const int first_band = band_of(m, y0, 0.0);
    const std::vector<double> crossings = crossing_times(m, y0);

    CohortRecord rec;
    rec.y0 = y0;
    rec.t = discharge_given(m, first_band, crossings, u_t, extrapolated);
    rec.y = y0 * std::exp(rec.t);

    int band = first_band;
    rec.path.emplace_back(band, 0.0);
    for (double cross : crossings) {
        if (cross >= rec.t) break;
        rec.path.emplace_back(++band, cross);
    }
    return rec;
}

Cohort simulate_cohort(const FittedModel& m, long size, std::uint64_t seed) {
    if (size < 1) throw validation_error("simulate_cohort: size must be >= 1");
    Cohort cohort;
    cohort.records.reserve(static_cast<std::size_t>(size));
    for (long i = 0; i < size; ++i) {
        std::mt19937_64 rng(numerics::stream_seed(seed, static_cast<std::uint64_t>(i)));
        bool extrapolated = false;
        cohort.records.push_back(simulate_patient(m, rng, &extrapolated));
        if (extrapolated) ++cohort.horizon_extensions;
    }
    return cohort;
}

}  // namespace phaseprice
