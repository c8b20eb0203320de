#pragma once

#include <utility>
#include <vector>

#include "phaseprice/converter.hpp"
#include "phaseprice/numerics.hpp"
#include "phaseprice/phase_type.hpp"

namespace phaseprice {

struct FitDiagnostics {
    int evaluations = 0;
    int restarts = 0;
    bool converged = false;
    bool improved_over_start = false;
};

struct Stage1Result {
    CphParams params;
    double log_likelihood = 0.0;
    FitDiagnostics diagnostics;
};

struct Stage2Result {
    LognormalParams params;
    double log_likelihood = 0.0;
    FitDiagnostics diagnostics;
    FittedModel model;  // rebuilt at fine tolerances at the optimum
};

struct TwoStageResult {
    Stage1Result stage1;
    Stage2Result stage2;
};

struct FitOptions {
    double horizon_override = 0.0;  // 0 => sized from the data and LOS quantile
};

// Unconstrained reparametrization: [ln(alpha_i/alpha_n) x(n-1), ln lambda x(n-1),
// ln c x(n)]. Round-trips are exact to rounding for strictly positive alpha.
std::vector<double> cph_to_unconstrained(const CphParams& p);
CphParams cph_from_unconstrained(const std::vector<double>& theta, int n);

// Maximizes the LOS log-likelihood over (alpha, lambda, c).
Stage1Result stage1_fit(const std::vector<double>& los, int n,
                        const numerics::OptimizerSpec& spec);

// Fixes the stage-1 parameters, rebuilds the partition construction per
// candidate (mu, sigma), and maximizes the joint log-likelihood.
Stage2Result stage2_fit(const std::vector<std::pair<double, double>>& data,
                        const Stage1Result& s1, const numerics::OptimizerSpec& spec,
                        const FitOptions& options = {});

TwoStageResult two_stage_fit(const std::vector<std::pair<double, double>>& data, int n,
                             const numerics::OptimizerSpec& spec,
                             const FitOptions& options = {});

}  // namespace phaseprice
