#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "phaseprice/phase_type.hpp"
#include "phaseprice/rgrst.hpp"

namespace ppt {

// Four-phase parameter set estimated from a hospital charge study; used as
// the standing realistic fixture (the near-zero forward rate is clamped).
inline phaseprice::CphParams reference_params() {
    phaseprice::CphParams p;
    p.alpha = {0.99972043, 0.0000001, 0.0000001, 0.00027937};
    p.lambda = {1e-6, 6.45, 0.83};
    p.c = {2.09, 9.05, 0.91, 0.14};
    return p;
}

inline phaseprice::LognormalParams reference_initial() {
    return phaseprice::LognormalParams{-0.5715, 0.7149};
}

// A four-phase model with every phase carrying visible mass; recovers fast.
inline phaseprice::CphParams balanced_params() {
    phaseprice::CphParams p;
    p.alpha = {0.4, 0.3, 0.2, 0.1};
    p.lambda = {1.5, 1.0, 0.6};
    p.c = {0.8, 0.5, 0.4, 0.3};
    return p;
}

// Random well-conditioned parameter set (n phases <= max_n).
inline phaseprice::CphParams random_params(std::mt19937_64& rng, int max_n = 4) {
    std::uniform_int_distribution<int> pick_n(1, max_n);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int n = pick_n(rng);
    phaseprice::CphParams p;
    p.alpha.resize(n);
    double total = 0.0;
    for (double& a : p.alpha) {
        a = 0.05 + unif(rng);
        total += a;
    }
    for (double& a : p.alpha) a /= total;
    // pin the simplex sum exactly
    double partial = 0.0;
    for (int i = 0; i + 1 < n; ++i) partial += p.alpha[i];
    p.alpha[n - 1] = 1.0 - partial;
    for (int i = 0; i + 1 < n; ++i) p.lambda.push_back(0.2 + unif(rng));
    for (int i = 0; i < n; ++i) p.c.push_back(0.3 + 1.7 * unif(rng));
    return p;
}

inline phaseprice::LognormalParams random_initial(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    return phaseprice::LognormalParams{-1.0 + 2.0 * unif(rng), 0.4 + 0.8 * unif(rng)};
}

// Kolmogorov-Smirnov distance between a sample and a model CDF.
template <typename Cdf>
double ks_distance(std::vector<double> sample, Cdf&& cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double dist = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        dist = std::max(dist, std::abs(f - static_cast<double>(i) / n));
        dist = std::max(dist, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return dist;
}

// Critical KS distance at significance level a.
inline double ks_threshold(double a, std::size_t n) {
    return std::sqrt(-0.5 * std::log(a / 2.0)) / std::sqrt(static_cast<double>(n));
}

}  // namespace ppt
