#include "phaseprice/converter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace phaseprice {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// -- Curve ----------------------------------------------------------------------

Curve::Curve(std::vector<double> t, std::vector<double> value)
    : t_(std::move(t)), v_(std::move(value)) {
    if (t_.size() != v_.size() || t_.size() < 2)
        throw validation_error("Curve: need matching grids with at least two nodes");
    for (std::size_t k = 1; k < t_.size(); ++k)
        if (!(t_[k] > t_[k - 1]))
            throw validation_error("Curve: time grid must be strictly increasing");
    const std::size_t n = t_.size();
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        h[k] = t_[k + 1] - t_[k];
        delta[k] = (v_[k + 1] - v_[k]) / h[k];
    }
    slope_.assign(n, 0.0);
    slope_[0] = delta[0];
    slope_[n - 1] = delta[n - 2];
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (delta[k - 1] * delta[k] <= 0.0) {
            slope_[k] = 0.0;  // local extremum: flat slope keeps the hull
        } else {
            const double w1 = 2 * h[k] + h[k - 1];
            const double w2 = h[k] + 2 * h[k - 1];
            slope_[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
    }
}

double Curve::operator()(double t) const {
    if (!(t >= t_.front()))
        throw validation_error("Curve: evaluation before the grid start");
    if (t >= t_.back()) return v_.back() * std::exp(t - t_.back());
    const auto it = std::upper_bound(t_.begin(), t_.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - t_.begin()) - 1;
    const double h = t_[k + 1] - t_[k];
    const double x = (t - t_[k]) / h;
    const double x2 = x * x, x3 = x2 * x;
    return v_[k] * (2 * x3 - 3 * x2 + 1) + h * slope_[k] * (x3 - 2 * x2 + x) +
           v_[k + 1] * (-2 * x3 + 3 * x2) + h * slope_[k + 1] * (x3 - x2);
}

double Curve::derivative(double t) const {
    if (!(t >= t_.front()))
        throw validation_error("Curve: evaluation before the grid start");
    if (t >= t_.back()) return v_.back() * std::exp(t - t_.back());
    const auto it = std::upper_bound(t_.begin(), t_.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - t_.begin()) - 1;
    const double h = t_[k + 1] - t_[k];
    const double x = (t - t_[k]) / h;
    const double x2 = x * x;
    return (v_[k] * (6 * x2 - 6 * x) + h * slope_[k] * (3 * x2 - 4 * x + 1) +
            v_[k + 1] * (-6 * x2 + 6 * x) + h * slope_[k + 1] * (3 * x2 - 2 * x)) /
           h;
}

// -- PartitionCurves --------------------------------------------------------------

double PartitionCurves::value(int i, double t) const {
    if (i <= 0) return 0.0;
    if (i >= bands()) return kInf;
    return curves[static_cast<std::size_t>(i) - 1](t);
}

void PartitionCurves::validate() const {
    for (std::size_t j = 0; j + 1 < curves.size(); ++j) {
        const auto& grid = curves[j + 1].grid();
        for (double t : grid) {
            if (!(curves[j + 1](t) > curves[j](t)))
                throw validation_error("PartitionCurves: ordering violated between curves " +
                                       std::to_string(j + 1) + " and " +
                                       std::to_string(j + 2) + " at t=" + std::to_string(t));
        }
    }
    for (const auto& curve : curves)
        for (double v : curve.values())
            if (!(v > 0.0) || !std::isfinite(v))
                throw validation_error("PartitionCurves: curve values must be finite and positive");
}

// -- boundary contact and the band evaluator --------------------------------------

namespace {

// First time (going backward along the characteristic from (y, t)) at which
// y e^{-(t-tau)} meets the curve. Returns 0 when the characteristic reaches
// the t=0 axis above the curve's start. Works on the log gap
//   g(tau) = ln y - (t - tau) - ln C(tau),
// which is non-decreasing in tau under the sub-characteristic curve slope.
double contact_time(const Curve& curve, double y, double t) {
    const double log_y = std::log(y);
    auto g = [&](double tau) { return log_y - (t - tau) - std::log(curve(tau)); };

    if (g(t) < 0.0) return t;  // on/below the curve within rounding: contact now
    if (g(0.0) >= 0.0) return 0.0;

    // bracket on the curve grid restricted to [0, t]
    const std::vector<double>& grid = curve.grid();
    std::size_t a = 0, b = grid.size() - 1;
    while (b - a > 1) {
        const std::size_t m = (a + b) / 2;
        if (grid[m] >= t) {
            b = m;
            continue;
        }
        (g(grid[m]) < 0.0 ? a : b) = m;
    }
    double lo = grid[a];
    double hi = std::min(t, grid[b]);

    // safeguarded Newton on the log gap
    double tau = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        const double val = g(tau);
        (val < 0.0 ? lo : hi) = tau;
        const double deriv = 1.0 - curve.derivative(tau) / curve(tau);
        double next = deriv > 0.0 ? tau - val / deriv : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - tau) <= 1e-15 * std::max(1.0, tau)) return next;
        tau = next;
    }
    return tau;
}

}  // namespace

double log_rho_band(const PartitionCurves& curves, const std::vector<double>& c,
                    int band, double y, double t) {
    if (band < 1 || band > curves.bands())
        throw validation_error("log_rho_band: band out of range");
    if (!(y > 0.0) || !(t >= 0.0))
        throw validation_error("log_rho_band: requires y > 0 and t >= 0");
    double acc = 0.0;
    int b = band;
    double yy = y, tt = t;
    while (b > 1) {
        const Curve& lower = curves.curves[static_cast<std::size_t>(b) - 2];
        const double tb = contact_time(lower, yy, tt);
        acc -= c[static_cast<std::size_t>(b) - 1] * (tt - tb);
        if (tb <= 0.0) return acc;  // axis boundary carries value 1
        yy = lower(tb);
        tt = tb;
        --b;
    }
    return acc - c[0] * tt;
}

PiecewiseRho::PiecewiseRho(std::shared_ptr<const PartitionCurves> curves,
                           std::vector<double> c)
    : curves_(std::move(curves)), c_(std::move(c)) {
    if (static_cast<int>(c_.size()) != curves_->bands())
        throw validation_error("PiecewiseRho: need one rate per band");
}

double PiecewiseRho::log_band(int band, double y, double t) const {
    return log_rho_band(*curves_, c_, band, y, t);
}

double PiecewiseRho::band_value(int band, double y, double t) const {
    return std::exp(log_band(band, y, t));
}

namespace {

int band_of_curves(const PartitionCurves& curves, double y, double t) {
    // smallest band whose upper curve lies strictly above y; binary search
    int lo = 1, hi = curves.bands();
    while (lo < hi) {
        const int mid = (lo + hi) / 2;
        if (y < curves.value(mid, t))
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

}  // namespace

double PiecewiseRho::log_value(double y, double t) const {
    return log_band(band_of_curves(*curves_, y, t), y, t);
}

double PiecewiseRho::value(double y, double t) const { return std::exp(log_value(y, t)); }

// -- cut points --------------------------------------------------------------------

std::vector<double> initial_cutpoints(const std::vector<double>& alpha,
                                      const LognormalParams& lp) {
    lp.validate();
    const int n = static_cast<int>(alpha.size());
    if (n < 1) throw validation_error("initial_cutpoints: alpha is empty");
    std::vector<double> cuts;
    cuts.reserve(static_cast<std::size_t>(n) - 1);
    double partial = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
        partial += alpha[i];
        if (!(partial > 0.0) || !(partial < 1.0))
            throw validation_error("initial_cutpoints: degenerate band " +
                                   std::to_string(i + 1) + " (cumulative mass " +
                                   std::to_string(partial) + ")");
        cuts.push_back(lognormal_quantile(lp, partial));
    }
    for (std::size_t i = 1; i < cuts.size(); ++i)
        if (!(cuts[i] > cuts[i - 1]))
            throw validation_error("initial_cutpoints: cut points must be ascending");
    return cuts;
}

// -- curve construction -------------------------------------------------------------

ConstructOptions ConstructOptions::coarse() {
    ConstructOptions opt;
    opt.quadrature = {1e-6, 1e-200, 120};
    opt.ode = {0.01, 1e-6, 1e-9, 2000000};
    opt.grid_step = 0.1;
    return opt;
}

namespace {

// integral of p-tilde * rho over [a, b] in band `band`, scaled by the
// integrand at y_ref (the exp of log differences keeps deep tails exact)
double scaled_band_integral(const PartitionCurves& curves, const std::vector<double>& c,
                            const GrowthModel& gm, int band, double a, double b,
                            double t, double log_ref,
                            const numerics::QuadratureSpec& quad) {
    if (!(b > a)) return 0.0;
    auto integrand = [&](double x) {
        return std::exp(log_potential_pdf(gm, x, t) + log_rho_band(curves, c, band, x, t) -
                        log_ref);
    };
    return numerics::integrate(integrand, a, b, quad);
}

}  // namespace

Curve band_curve(int band, const CphParams& p, const LognormalParams& lp,
                 const PartitionCurves& lower, double c_i0,
                 const ConstructOptions& opt) {
    if (band < 1 || band >= p.n())
        throw validation_error("band_curve: band must be in 1..n-1");
    const GrowthModel gm{lp};
    const double lambda = p.lambda[static_cast<std::size_t>(band) - 1];
    const std::vector<double>& c = p.c;
    const double horizon = opt.horizon;

    auto rhs = [&](double t, double y) {
        const double floor_y = lower.value(band - 1, t);
        if (y <= floor_y)
            return y;  // gap closed within rounding: flux term vanishes
        const double log_den = log_potential_pdf(gm, y, t) +
                               log_rho_band(lower, c, band, y, t);
        const double ratio =
            scaled_band_integral(lower, c, gm, band, floor_y, y, t, log_den, opt.quadrature);
        return y - lambda * ratio;
    };

    std::vector<double> grid;
    const int steps = std::max(2, static_cast<int>(std::ceil(horizon / opt.grid_step)));
    grid.reserve(static_cast<std::size_t>(steps));
    for (int k = 1; k <= steps; ++k)
        grid.push_back(horizon * static_cast<double>(k) / steps);

    std::vector<double> values;
    try {
        values = numerics::solve_ivp(rhs, 0.0, c_i0, grid, opt.ode);
    } catch (const ode_error& e) {
        throw numeric_error("band_curve: band " + std::to_string(band) +
                            " mass exhausted near t=" + std::to_string(e.t) +
                            " (curve met the lower curve): " + e.what());
    }

    std::vector<double> ts;
    ts.reserve(grid.size() + 1);
    ts.push_back(0.0);
    ts.insert(ts.end(), grid.begin(), grid.end());
    values.insert(values.begin(), c_i0);

    for (std::size_t k = 0; k < ts.size(); ++k) {
        const double floor_v = lower.value(band - 1, ts[k]);
        if (!(values[k] > floor_v))
            throw numeric_error("band_curve: band " + std::to_string(band) +
                                " crossed the lower curve at t=" + std::to_string(ts[k]));
    }
    return Curve(std::move(ts), std::move(values));
}

FittedModel construct_rho(const CphParams& p, const LognormalParams& lp,
                          const ConstructOptions& opt) {
    p.validate();
    lp.validate();
    const int n = p.n();

    ConstructOptions local = opt;
    if (!(local.horizon > 0.0)) local.horizon = cph_quantile(p, 1.0 - 1e-8);

    auto curves = std::make_shared<PartitionCurves>();
    curves->horizon = local.horizon;

    if (n > 1) {
        const std::vector<double> cuts = initial_cutpoints(p.alpha, lp);
        for (int i = 1; i < n; ++i) {
            try {
                curves->curves.push_back(
                    band_curve(i, p, lp, *curves, cuts[static_cast<std::size_t>(i) - 1],
                               local));
            } catch (const numeric_error& e) {
                throw numeric_error("construct_rho: " + std::string(e.what()));
            }
        }
        curves->validate();
    }

    FittedModel model;
    model.params = p;
    model.initial = lp;
    model.curves = curves;
    model.rho = PiecewiseRho(curves, p.c);
    model.tail_quantile = local.tail_quantile;
    model.z_cut = numerics::normal_quantile(1.0 - local.tail_quantile);
    return model;
}

// -- model evaluation ---------------------------------------------------------------

double FittedModel::charge_cutoff(double t) const {
    return std::exp(initial.mu + t + initial.sigma * z_cut);
}

int band_of(const FittedModel& m, double y, double t) {
    if (!(y > 0.0) || !(t >= 0.0))
        throw validation_error("band_of: requires y > 0 and t >= 0");
    return band_of_curves(*m.curves, y, t);
}

double log_joint_pdf(const FittedModel& m, double y, double t) {
    if (!(y > 0.0) || !(t >= 0.0)) return -kInf;
    const int band = band_of_curves(*m.curves, y, t);
    return log_potential_pdf(m.growth(), y, t) +
           std::log(m.params.c[static_cast<std::size_t>(band) - 1]) +
           m.rho.log_band(band, y, t);
}

double joint_pdf(const FittedModel& m, double y, double t) {
    if (!(y > 0.0) || !(t >= 0.0)) return 0.0;
    return std::exp(log_joint_pdf(m, y, t));
}

double band_mass_between(const FittedModel& m, int band, double ylo, double yhi,
                         double t, const numerics::QuadratureSpec& quad) {
    if (band < 1 || band > m.params.n())
        throw validation_error("band_mass_between: band out of range");
    if (!(yhi > ylo)) return 0.0;
    auto integrand = [&](double x) {
        return std::exp(log_potential_pdf(m.growth(), x, t) + m.rho.log_band(band, x, t));
    };
    return numerics::integrate(integrand, ylo, yhi, quad);
}

double band_mass(const FittedModel& m, int band, double t,
                 const numerics::QuadratureSpec& quad) {
    const int n = m.params.n();
    if (band < 1 || band > n) throw validation_error("band_mass: band out of range");
    const double lo = m.curves->value(band - 1, t);
    const double hi = band == n ? std::max(m.charge_cutoff(t), lo)
                                : m.curves->value(band, t);
    return band_mass_between(m, band, lo, hi, t, quad);
}

double marginal_los_pdf(const FittedModel& m, double t,
                        const numerics::QuadratureSpec& quad) {
    if (!(t >= 0.0)) throw validation_error("marginal_los_pdf: t must be >= 0");
    double total = 0.0;
    for (int band = 1; band <= m.params.n(); ++band)
        total += m.params.c[static_cast<std::size_t>(band) - 1] * band_mass(m, band, t, quad);
    return total;
}

double charge_marginal_pdf(const FittedModel& m, double y,
                           const numerics::QuadratureSpec& quad) {
    if (!(y > 0.0)) return 0.0;
    auto integrand = [&](double t) { return joint_pdf(m, y, t); };
    return numerics::integrate(integrand, 0.0, m.horizon(), quad);
}

double charge_marginal_cdf(const FittedModel& m, double y,
                           const numerics::QuadratureSpec& quad) {
    if (!(y > 0.0)) return 0.0;
    auto integrand = [&](double t) {
        const int n = m.params.n();
        double inner = 0.0;
        for (int band = 1; band <= n; ++band) {
            const double lo = m.curves->value(band - 1, t);
            if (lo >= y) break;
            const double band_hi =
                band == n ? std::max(m.charge_cutoff(t), lo) : m.curves->value(band, t);
            inner += m.params.c[static_cast<std::size_t>(band) - 1] *
                     band_mass_between(m, band, lo, std::min(band_hi, y), t, quad);
        }
        return inner;
    };
    return numerics::integrate(integrand, 0.0, m.horizon(), quad);
}

}  // namespace phaseprice
