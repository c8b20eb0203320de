#include "phaseprice/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace phaseprice {

namespace {
constexpr double kHuge = 1e300;
}

std::vector<double> cph_to_unconstrained(const CphParams& p) {
    p.validate();
    const int n = p.n();
    std::vector<double> theta;
    theta.reserve(static_cast<std::size_t>(3 * n - 2));
    for (int i = 0; i + 1 < n; ++i) {
        if (!(p.alpha[i] > 0.0) || !(p.alpha[n - 1] > 0.0))
            throw validation_error(
                "cph_to_unconstrained: alpha must be strictly positive");
        theta.push_back(std::log(p.alpha[i] / p.alpha[n - 1]));
    }
    for (int i = 0; i + 1 < n; ++i) theta.push_back(std::log(p.lambda[i]));
    for (int i = 0; i < n; ++i) theta.push_back(std::log(p.c[i]));
    return theta;
}

CphParams cph_from_unconstrained(const std::vector<double>& theta, int n) {
    if (n < 1) throw validation_error("cph_from_unconstrained: n must be >= 1");
    if (static_cast<int>(theta.size()) != 3 * n - 2)
        throw validation_error("cph_from_unconstrained: expected 3n-2 coordinates");
    CphParams p;
    p.alpha.resize(n);
    p.lambda.resize(n - 1);
    p.c.resize(n);

    double w_max = 0.0;  // implicit w_n = 0
    for (int i = 0; i + 1 < n; ++i) w_max = std::max(w_max, theta[i]);
    double denom = std::exp(-w_max);
    for (int i = 0; i + 1 < n; ++i) denom += std::exp(theta[i] - w_max);
    for (int i = 0; i + 1 < n; ++i) p.alpha[i] = std::exp(theta[i] - w_max) / denom;
    p.alpha[n - 1] = std::exp(-w_max) / denom;

    for (int i = 0; i + 1 < n; ++i) p.lambda[i] = std::exp(theta[n - 1 + i]);
    for (int i = 0; i < n; ++i) p.c[i] = std::exp(theta[2 * (n - 1) + i]);
    return p;
}

// -- stage 1 ------------------------------------------------------------------

Stage1Result stage1_fit(const std::vector<double>& los, int n,
                        const numerics::OptimizerSpec& spec) {
    if (n < 1) throw validation_error("stage1_fit: n must be >= 1");
    const std::size_t floor_k = 10u * static_cast<std::size_t>(3 * n - 1);
    if (los.size() < floor_k)
        throw validation_error("stage1_fit: need at least " + std::to_string(floor_k) +
                               " observations for " + std::to_string(n) + " phases");
    for (double t : los)
        if (!(t > 0.0)) throw validation_error("stage1_fit: all LOS values must be > 0");
    spec.validate();

    auto objective = [&](const std::vector<double>& theta) {
        CphParams p;
        try {
            p = cph_from_unconstrained(theta, n);
        } catch (const std::exception&) {
            return kHuge;
        }
        const CphDensity density(p);
        double neg_ll = 0.0;
        for (double t : los) {
            const double lp = density.log_pdf(t);
            if (!std::isfinite(lp)) return kHuge;
            neg_ll -= lp;
        }
        return neg_ll;
    };

    // method-of-moments seed: uniform alpha, c_i ~ n / mean, lambda ~ c
    const double mean =
        std::accumulate(los.begin(), los.end(), 0.0) / static_cast<double>(los.size());
    CphParams seed;
    seed.alpha.assign(n, 1.0 / n);
    seed.lambda.assign(n - 1, n / mean);
    seed.c.assign(n, n / mean);
    const std::vector<double> theta0 = cph_to_unconstrained(seed);

    const numerics::MinimizeResult best = numerics::minimize(objective, theta0, spec);

    Stage1Result result;
    result.params = cph_from_unconstrained(best.x, n);
    result.log_likelihood = -best.f;
    result.diagnostics = {best.evaluations, best.restarts_used, best.converged,
                          best.improved_over_start};
    if (!std::isfinite(result.log_likelihood))
        throw numeric_error("stage1_fit: all restarts diverged (non-finite likelihood)");
    return result;
}

// -- stage 2 ------------------------------------------------------------------

namespace {

double joint_log_likelihood(const FittedModel& m,
                            const std::vector<std::pair<double, double>>& data) {
    double ll = 0.0;
    for (const auto& [y, t] : data) {
        const double lp = log_joint_pdf(m, y, t);
        if (!std::isfinite(lp)) return -kHuge;
        ll += lp;
    }
    return ll;
}

}  // namespace

Stage2Result stage2_fit(const std::vector<std::pair<double, double>>& data,
                        const Stage1Result& s1, const numerics::OptimizerSpec& spec,
                        const FitOptions& options) {
    if (data.empty()) throw validation_error("stage2_fit: empty data");
    if (!s1.diagnostics.converged)
        throw validation_error("stage2_fit: stage-1 result did not converge");
    spec.validate();

    double t_max = 0.0;
    std::size_t k = 0;
    for (const auto& [y, t] : data) {
        if (!(y > 0.0) || !(t > 0.0))
            throw validation_error("stage2_fit: record " + std::to_string(k) +
                                   " has a non-positive charge or LOS");
        t_max = std::max(t_max, t);
        ++k;
    }
    double horizon = options.horizon_override;
    if (horizon > 0.0) {
        k = 0;
        for (const auto& [y, t] : data) {
            if (t > horizon)
                throw validation_error("stage2_fit: record " + std::to_string(k) +
                                       " (los=" + std::to_string(t) +
                                       ") lies beyond the time horizon " +
                                       std::to_string(horizon));
            ++k;
        }
    } else {
        horizon = 1.02 * t_max;
    }

    ConstructOptions search_opt = ConstructOptions::coarse();
    search_opt.horizon = horizon;

    auto objective = [&](const std::vector<double>& theta) {
        const LognormalParams lp{theta[0], std::exp(theta[1])};
        try {
            const FittedModel m = construct_rho(s1.params, lp, search_opt);
            return -joint_log_likelihood(m, data);
        } catch (const std::exception&) {
            return kHuge;  // construction failed: reject the candidate
        }
    };

    // moment seed on ln y - t (exact for the single-band model)
    double mean = 0.0;
    for (const auto& [y, t] : data) mean += std::log(y) - t;
    mean /= static_cast<double>(data.size());
    double var = 0.0;
    for (const auto& [y, t] : data) {
        const double d = std::log(y) - t - mean;
        var += d * d;
    }
    var /= static_cast<double>(data.size());
    const std::vector<double> theta0{mean, 0.5 * std::log(std::max(var, 1e-12))};

    const numerics::MinimizeResult best = numerics::minimize(objective, theta0, spec);

    Stage2Result result;
    result.params = LognormalParams{best.x[0], std::exp(best.x[1])};
    result.diagnostics = {best.evaluations, best.restarts_used, best.converged,
                          best.improved_over_start};

    // re-verify at fine tolerances; the returned model covers at least the
    // default reporting horizon
    ConstructOptions fine_opt;
    fine_opt.horizon = std::max(horizon, cph_quantile(s1.params, 1.0 - 1e-8));
    result.model = construct_rho(s1.params, result.params, fine_opt);
    result.log_likelihood = joint_log_likelihood(result.model, data);
    if (!std::isfinite(result.log_likelihood))
        throw numeric_error("stage2_fit: non-finite likelihood at the optimum");
    return result;
}

TwoStageResult two_stage_fit(const std::vector<std::pair<double, double>>& data, int n,
                             const numerics::OptimizerSpec& spec,
                             const FitOptions& options) {
    std::vector<double> los;
    los.reserve(data.size());
    for (const auto& [y, t] : data) los.push_back(t);

    TwoStageResult result;
    try {
        result.stage1 = stage1_fit(los, n, spec);
    } catch (const numeric_error& e) {
        throw numeric_error("two_stage_fit: stage 1: " + std::string(e.what()));
    }
    try {
        result.stage2 = stage2_fit(data, result.stage1, spec, options);
    } catch (const numeric_error& e) {
        throw numeric_error("two_stage_fit: stage 2: " + std::string(e.what()));
    }
    return result;
}

}  // namespace phaseprice
