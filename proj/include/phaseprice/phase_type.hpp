#pragma once

#include <Eigen/Dense>
#include <random>
#include <utility>
#include <vector>

#include "phaseprice/errors.hpp"

namespace phaseprice {

// Coxian phase-type parameters: initial mass alpha over n ordered transient
// phases, forward rates lambda (phase i -> i+1) and absorption rates c.
struct CphParams {
    std::vector<double> alpha;   // size n, simplex
    std::vector<double> lambda;  // size n-1, all > 0
    std::vector<double> c;       // size n, all > 0

    int n() const { return static_cast<int>(alpha.size()); }
    void validate() const;
};

// Transient block of the full generator plus the absorption column.
struct SubGenerator {
    Eigen::MatrixXd S;     // n x n upper bidiagonal
    Eigen::VectorXd exit;  // absorption rates, = c
};

SubGenerator build_generator(const CphParams& p);

// Absorption-time density alpha * exp(S t) * exit.
double cph_pdf(const CphParams& p, double t);

// 1 - alpha * exp(S t) * 1.
double cph_cdf(const CphParams& p, double t);

// First n entries: probability of sitting in phase i at time t (still in
// hospital); entry n+1: probability of having been absorbed.
std::vector<double> phase_occupancy(const CphParams& p, double t);

// Smallest t with cph_cdf(t) >= q, by bracketing + bisection.
double cph_quantile(const CphParams& p, double q);

struct CphSample {
    double time = 0.0;                           // absorption time
    std::vector<std::pair<int, double>> path;    // (phase 1..n, entry time)
};

// Exact continuous-time Markov chain simulation.
CphSample cph_sample(const CphParams& p, std::mt19937_64& rng);

// Precomputed absorption-time density for repeated evaluation (likelihoods).
// Uses the closed-form exponential mixture when the diagonal of S is well
// separated, verified against the matrix exponential; otherwise falls back
// to the matrix exponential per call.
class CphDensity {
  public:
    explicit CphDensity(const CphParams& p);
    double pdf(double t) const;
    double log_pdf(double t) const;
    bool spectral() const { return spectral_; }

  private:
    SubGenerator gen_;
    Eigen::RowVectorXd alpha_;
    bool spectral_ = false;
    std::vector<double> rates_;    // eigenvalues d_j (negative)
    std::vector<double> weights_;  // pdf(t) = sum_j weights_j exp(rates_j t)
};

}  // namespace phaseprice
