#include "phaseprice/gof.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace phaseprice::gof {

void BinningSpec::validate() const {
    if (bins < 2) throw validation_error("BinningSpec: bins must be >= 2");
    if (!(min_expected >= 1.0))
        throw validation_error("BinningSpec: min_expected must be >= 1");
}

namespace {

// next edge e with integral of pdf over [prev, e] equal to target
double advance_edge(const std::function<double(double)>& pdf, double prev,
                    double support_hi, double target,
                    const numerics::QuadratureSpec& quad, double step_hint) {
    auto mass_from_prev = [&](double e) {
        return numerics::integrate(pdf, prev, e, quad);
    };
    double lo = prev, hi = std::min(prev + step_hint, support_hi);
    while (mass_from_prev(hi) < target) {
        if (hi >= support_hi) return support_hi;
        lo = hi;
        hi = std::min(prev + 2 * (hi - prev), support_hi);
    }
    double e = 0.5 * (lo + hi);
    for (int iter = 0; iter < 100; ++iter) {
        const double val = mass_from_prev(e) - target;
        (val < 0.0 ? lo : hi) = e;
        const double deriv = pdf(e);
        double next = deriv > 0.0 ? e - val / deriv : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - e) <= 1e-12 * std::max(1.0, std::abs(e))) return next;
        e = next;
    }
    return e;
}

std::size_t bin_index(const std::vector<double>& edges, double x) {
    // interior edges partition the line; out-of-support samples land in the
    // end bins
    const auto it = std::upper_bound(edges.begin() + 1, edges.end() - 1, x);
    return static_cast<std::size_t>(it - edges.begin()) - 1;
}

GofReport finish_marginal(std::vector<double> observed, std::vector<double> expected,
                          std::vector<double> edges, const BinningSpec& spec) {
    // pool adjacent bins until every group meets the minimum expected count
    std::vector<double> obs, exp, pooled_edges;
    pooled_edges.push_back(edges.front());
    double o = 0.0, e = 0.0;
    for (std::size_t k = 0; k < observed.size(); ++k) {
        o += observed[k];
        e += expected[k];
        if (e >= spec.min_expected) {
            obs.push_back(o);
            exp.push_back(e);
            pooled_edges.push_back(edges[k + 1]);
            o = e = 0.0;
        }
    }
    if (e > 0.0 || o > 0.0) {  // trailing remainder merges into the last group
        if (obs.empty()) {
            obs.push_back(o);
            exp.push_back(e);
            pooled_edges.push_back(edges.back());
        } else {
            obs.back() += o;
            exp.back() += e;
            pooled_edges.back() = edges.back();
        }
    }
    if (obs.size() < 2)
        throw validation_error(
            "chi2: fewer than two bins remain after pooling; use fewer bins");
    for (double ek : exp)
        if (ek < spec.min_expected)
            throw validation_error(
                "chi2: expected count below the pooling threshold even after "
                "pooling; use fewer bins");

    GofReport report;
    report.observed = std::move(obs);
    report.expected = std::move(exp);
    report.edges1 = std::move(pooled_edges);
    for (std::size_t k = 0; k < report.observed.size(); ++k) {
        const double d = report.observed[k] - report.expected[k];
        report.statistic += d * d / report.expected[k];
    }
    report.df = static_cast<int>(report.observed.size()) - 1;
    report.p_value = numerics::gamma_q(0.5 * report.df, 0.5 * report.statistic);
    return report;
}

}  // namespace

MarginalBinning make_marginal_binning(const std::function<double(double)>& model_pdf,
                                      double support_lo, double support_hi,
                                      const BinningSpec& spec,
                                      const numerics::QuadratureSpec& quad) {
    spec.validate();
    if (!(support_hi > support_lo))
        throw validation_error("make_marginal_binning: empty support");

    MarginalBinning binning;
    binning.edges.reserve(static_cast<std::size_t>(spec.bins) + 1);
    binning.edges.push_back(support_lo);
    if (spec.mode == BinningSpec::Mode::EqualWidth) {
        for (int k = 1; k <= spec.bins; ++k)
            binning.edges.push_back(support_lo +
                                    (support_hi - support_lo) * k / spec.bins);
    } else {
        const double total = numerics::integrate(model_pdf, support_lo, support_hi, quad);
        const double target = total / spec.bins;
        const double hint = (support_hi - support_lo) / spec.bins;
        for (int k = 1; k < spec.bins; ++k)
            binning.edges.push_back(advance_edge(model_pdf, binning.edges.back(),
                                                 support_hi, target, quad, hint));
        binning.edges.push_back(support_hi);
    }

    double total = 0.0;
    for (int k = 0; k < spec.bins; ++k) {
        const double mass = numerics::integrate(model_pdf, binning.edges[k],
                                                binning.edges[k + 1], quad);
        binning.probs.push_back(mass);
        total += mass;
    }
    for (double& p : binning.probs) p /= total;  // condition on the truncated support
    return binning;
}

GofReport chi2_with(const MarginalBinning& binning, std::span<const double> data,
                    const BinningSpec& spec) {
    const double n = static_cast<double>(data.size());
    std::vector<double> observed(binning.probs.size(), 0.0);
    for (double x : data) observed[bin_index(binning.edges, x)] += 1.0;
    std::vector<double> expected(binning.probs.size());
    for (std::size_t k = 0; k < expected.size(); ++k) expected[k] = n * binning.probs[k];
    return finish_marginal(std::move(observed), std::move(expected), binning.edges, spec);
}

GofReport chi2_marginal(std::span<const double> data,
                        const std::function<double(double)>& model_pdf,
                        double support_lo, double support_hi, const BinningSpec& spec,
                        const numerics::QuadratureSpec& quad) {
    spec.validate();
    if (static_cast<int>(data.size()) < 5 * spec.bins)
        throw validation_error("chi2_marginal: need at least 5 observations per bin");
    const MarginalBinning binning =
        make_marginal_binning(model_pdf, support_lo, support_hi, spec, quad);
    return chi2_with(binning, data, spec);
}

// -- joint -----------------------------------------------------------------------

namespace {

// model mass of the rectangle [ylo, yhi] x [tlo, thi]
double cell_mass(const FittedModel& m, double ylo, double yhi, double tlo, double thi,
                 const numerics::QuadratureSpec& quad) {
    auto slice = [&](double t) {
        const int n = m.params.n();
        double inner = 0.0;
        for (int band = 1; band <= n; ++band) {
            const double lo = m.curves->value(band - 1, t);
            if (lo >= yhi) break;
            const double hi =
                band == n ? std::max(m.charge_cutoff(t), lo) : m.curves->value(band, t);
            inner += m.params.c[static_cast<std::size_t>(band) - 1] *
                     band_mass_between(m, band, std::max(lo, ylo), std::min(hi, yhi), t,
                                       quad);
        }
        return inner;
    };
    return numerics::integrate(slice, tlo, thi, quad);
}

}  // namespace

JointBinning make_joint_binning(const FittedModel& m, const BinningSpec& spec) {
    spec.validate();
    const numerics::QuadratureSpec quad{1e-7, 1e-200, 200};

    JointBinning binning;
    // LOS splits from the phase-type CDF (bisection; no quadrature needed)
    const double t_hi = cph_quantile(m.params, 1.0 - 1e-9);
    binning.los_edges.push_back(0.0);
    for (int k = 1; k < spec.bins; ++k) {
        const double q = cph_cdf(m.params, t_hi) * k / spec.bins;
        double lo = 0.0, hi = t_hi;
        for (int iter = 0; iter < 100; ++iter) {
            const double mid = 0.5 * (lo + hi);
            (cph_cdf(m.params, mid) < q ? lo : hi) = mid;
        }
        binning.los_edges.push_back(0.5 * (lo + hi));
    }
    binning.los_edges.push_back(t_hi);

    // charge splits from the model's charge marginal
    const double y_lo = std::exp(m.initial.mu - 8.0 * m.initial.sigma);
    const double y_hi = m.charge_cutoff(m.horizon());
    const double total_y = charge_marginal_cdf(m, y_hi);
    binning.charge_edges.push_back(y_lo);
    for (int k = 1; k < spec.bins; ++k) {
        const double q = total_y * k / spec.bins;
        double lo = y_lo, hi = y_hi;
        for (int iter = 0; iter < 60; ++iter) {
            const double mid = std::sqrt(lo * hi);  // bisect on the log scale
            (charge_marginal_cdf(m, mid) < q ? lo : hi) = mid;
            if (hi - lo <= 1e-9 * hi) break;
        }
        binning.charge_edges.push_back(std::sqrt(lo * hi));
    }
    binning.charge_edges.push_back(y_hi);

    double total = 0.0;
    binning.probs.resize(static_cast<std::size_t>(spec.bins) * spec.bins);
    for (int i = 0; i < spec.bins; ++i)
        for (int j = 0; j < spec.bins; ++j) {
            const double mass =
                cell_mass(m, binning.charge_edges[i], binning.charge_edges[i + 1],
                          binning.los_edges[j], binning.los_edges[j + 1], quad);
            binning.probs[static_cast<std::size_t>(i) * spec.bins + j] = mass;
            total += mass;
        }
    for (double& p : binning.probs) p /= total;
    return binning;
}

GofReport chi2_joint_with(const JointBinning& binning,
                          std::span<const std::pair<double, double>> data,
                          const BinningSpec& spec) {
    const std::size_t cells = binning.probs.size();
    const std::size_t nt = binning.los_edges.size() - 1;
    std::vector<double> observed(cells, 0.0);
    for (const auto& [y, t] : data) {
        const std::size_t i = bin_index(binning.charge_edges, y);
        const std::size_t j = bin_index(binning.los_edges, t);
        observed[i * nt + j] += 1.0;
    }
    const double n = static_cast<double>(data.size());

    // collapse sparse cells into one pooled group
    double o_pool = 0.0, e_pool = 0.0;
    std::vector<double> obs, exp;
    for (std::size_t k = 0; k < cells; ++k) {
        const double e = n * binning.probs[k];
        if (e < spec.min_expected) {
            o_pool += observed[k];
            e_pool += e;
        } else {
            obs.push_back(observed[k]);
            exp.push_back(e);
        }
    }
    if (e_pool > 0.0) {
        if (e_pool >= spec.min_expected) {
            obs.push_back(o_pool);
            exp.push_back(e_pool);
        } else if (!exp.empty()) {
            const std::size_t smallest =
                static_cast<std::size_t>(std::min_element(exp.begin(), exp.end()) -
                                         exp.begin());
            obs[smallest] += o_pool;
            exp[smallest] += e_pool;
        }
    }
    if (obs.size() < 2)
        throw validation_error("chi2_joint: fewer than two cells after pooling");

    GofReport report;
    report.observed = std::move(obs);
    report.expected = std::move(exp);
    report.edges1 = binning.charge_edges;
    report.edges2 = binning.los_edges;
    for (std::size_t k = 0; k < report.observed.size(); ++k) {
        const double d = report.observed[k] - report.expected[k];
        report.statistic += d * d / report.expected[k];
    }
    report.df = static_cast<int>(report.observed.size()) - 1;
    report.p_value = numerics::gamma_q(0.5 * report.df, 0.5 * report.statistic);
    return report;
}

GofReport chi2_joint(std::span<const std::pair<double, double>> data,
                     const FittedModel& m, const BinningSpec& spec) {
    spec.validate();
    if (static_cast<int>(data.size()) < 5 * spec.bins * spec.bins)
        throw validation_error("chi2_joint: need at least 5 observations per cell");
    const JointBinning binning = make_joint_binning(m, spec);
    return chi2_joint_with(binning, data, spec);
}

// -- KDE -------------------------------------------------------------------------

Kde2dGrid kde_2d(std::span<const std::pair<double, double>> data, double bandwidth_x,
                 double bandwidth_y, const std::vector<double>& grid_x,
                 const std::vector<double>& grid_y) {
    if (!(bandwidth_x > 0.0) || !(bandwidth_y > 0.0))
        throw validation_error("kde_2d: bandwidths must be > 0");
    if (grid_x.empty() || grid_y.empty())
        throw validation_error("kde_2d: empty evaluation grid");
    if (data.empty()) throw validation_error("kde_2d: empty data");

    Kde2dGrid grid;
    grid.x = grid_x;
    grid.y = grid_y;
    grid.density.assign(grid_x.size() * grid_y.size(), 0.0);

    const double norm =
        1.0 / (2.0 * M_PI * bandwidth_x * bandwidth_y * static_cast<double>(data.size()));
    std::vector<double> kx(grid_x.size()), ky(grid_y.size());
    for (const auto& [px, py] : data) {
        for (std::size_t i = 0; i < grid_x.size(); ++i) {
            const double z = (grid_x[i] - px) / bandwidth_x;
            kx[i] = std::exp(-0.5 * z * z);
        }
        for (std::size_t j = 0; j < grid_y.size(); ++j) {
            const double z = (grid_y[j] - py) / bandwidth_y;
            ky[j] = std::exp(-0.5 * z * z);
        }
        for (std::size_t i = 0; i < grid_x.size(); ++i) {
            double* row = grid.density.data() + i * grid_y.size();
            for (std::size_t j = 0; j < grid_y.size(); ++j) row[j] += kx[i] * ky[j];
        }
    }
    for (double& d : grid.density) d *= norm;
    return grid;
}

}  // namespace phaseprice::gof
