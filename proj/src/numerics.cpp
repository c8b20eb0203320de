#include "phaseprice/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>

namespace phaseprice::numerics {

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
        throw validation_error("QuadratureSpec: tolerances must be > 0");
    if (max_subdivisions < 1)
        throw validation_error("QuadratureSpec: max_subdivisions must be >= 1");
}

void OdeSpec::validate() const {
    if (!(initial_step > 0.0))
        throw validation_error("OdeSpec: initial_step must be > 0");
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
        throw validation_error("OdeSpec: tolerances must be > 0");
    if (max_steps < 1) throw validation_error("OdeSpec: max_steps must be >= 1");
}

void OptimizerSpec::validate() const {
    if (restarts < 1) throw validation_error("OptimizerSpec: restarts must be >= 1");
    if (!(tolerance > 0.0)) throw validation_error("OptimizerSpec: tolerance must be > 0");
    if (max_iterations < 1)
        throw validation_error("OptimizerSpec: max_iterations must be >= 1");
}

// -- quadrature ---------------------------------------------------------------

namespace {

// Gauss-Kronrod 15(7) nodes and weights on [-1, 1] (positive half).
constexpr double kGkNodes[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
constexpr double kGkWeights[8] = {
    0.0229353220105292, 0.0630920926299785, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
constexpr double kGaussWeights[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f_mid = f(mid);
    double kronrod = kGkWeights[7] * f_mid;
    double gauss = kGaussWeights[3] * f_mid;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kGkNodes[i];
        const double fsum = f(mid - dx) + f(mid + dx);
        kronrod += kGkWeights[i] * fsum;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fsum;
    }
    kronrod *= half;
    gauss *= half;
    if (!std::isfinite(kronrod))
        throw numeric_error("integrate: non-finite integrand on [" +
                            std::to_string(a) + ", " + std::to_string(b) + "]");
    return Panel{a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec) {
    spec.validate();
    if (!(a <= b)) throw validation_error("integrate: requires a <= b");
    if (a == b) return 0.0;

    std::priority_queue<Panel> panels;
    Panel whole = gk15(f, a, b);
    double total = whole.value;
    double err = whole.error;
    panels.push(whole);

    int subdivisions = 0;
    while (err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
        if (subdivisions >= spec.max_subdivisions)
            throw integration_error("integrate: no convergence after " +
                                        std::to_string(subdivisions) + " subdivisions",
                                    total, err);
        Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b)
            throw integration_error("integrate: interval underflow", total, err);
        Panel left = gk15(f, worst.a, mid);
        Panel right = gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
        ++subdivisions;
    }
    return total;
}

// -- ODE ----------------------------------------------------------------------

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187,
                 A53 = 64448.0 / 6561, A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double E1 = 35.0 / 384 - 5179.0 / 57600, E3 = 500.0 / 1113 - 7571.0 / 16695,
                 E4 = 125.0 / 192 - 393.0 / 640, E5 = -2187.0 / 6784 + 92097.0 / 339200,
                 E6 = 11.0 / 84 - 187.0 / 2100, E7 = -1.0 / 40;
// Dense-output coefficients (Hairer's contd5).
constexpr double D1 = -12715105075.0 / 11282082432.0;
constexpr double D3 = 87487479700.0 / 32700410799.0;
constexpr double D4 = -10690763975.0 / 1880347072.0;
constexpr double D5 = 701980252875.0 / 199316789632.0;
constexpr double D6 = -1453857185.0 / 822651844.0;
constexpr double D7 = 69997945.0 / 29380423.0;

}  // namespace

std::vector<double> solve_ivp(const std::function<double(double, double)>& rhs,
                              double t0, double y0,
                              const std::vector<double>& t_grid,
                              const OdeSpec& spec) {
    spec.validate();
    if (t_grid.empty()) return {};
    if (t_grid.front() < t0)
        throw validation_error("solve_ivp: t_grid must start at or after t0");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1]))
            throw validation_error("solve_ivp: t_grid must be strictly ascending");

    std::vector<double> out;
    out.reserve(t_grid.size());
    std::size_t next = 0;
    double t = t0, y = y0;
    while (next < t_grid.size() && t_grid[next] <= t) {
        out.push_back(y);  // grid points at (or numerically equal to) t0
        ++next;
    }

    const double t_end = t_grid.back();
    double h = std::min(spec.initial_step, t_end - t);
    double k1 = rhs(t, y);
    long steps = 0;
    while (t < t_end) {
        if (++steps > spec.max_steps)
            throw ode_error("solve_ivp: max_steps exceeded", t, {y});
        if (!(h > std::abs(t) * 1e-14 + 1e-300))
            throw ode_error("solve_ivp: step underflow", t, {y});
        h = std::min(h, t_end - t);

        const double k2 = rhs(t + h / 5, y + h * A21 * k1);
        const double k3 = rhs(t + 3 * h / 10, y + h * (A31 * k1 + A32 * k2));
        const double k4 = rhs(t + 4 * h / 5, y + h * (A41 * k1 + A42 * k2 + A43 * k3));
        const double k5 =
            rhs(t + 8 * h / 9, y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4));
        const double k6 =
            rhs(t + h, y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5));
        const double y_new = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
        const double k7 = rhs(t + h, y_new);
        const double err_raw =
            h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
        if (!std::isfinite(y_new) || !std::isfinite(err_raw))
            throw ode_error("solve_ivp: non-finite state", t, {y});
        const double scale =
            spec.abs_tol + spec.rel_tol * std::max(std::abs(y), std::abs(y_new));
        const double err = std::abs(err_raw) / scale;

        if (err <= 1.0) {
            // dense output for grid points inside the accepted step
            while (next < t_grid.size() && t_grid[next] <= t + h) {
                const double theta = (t_grid[next] - t) / h;
                const double ydiff = y_new - y;
                const double bspl = h * k1 - ydiff;
                const double r4 = ydiff - h * k7 - bspl;
                const double r5 =
                    h * (D1 * k1 + D3 * k3 + D4 * k4 + D5 * k5 + D6 * k6 + D7 * k7);
                out.push_back(y + theta * (ydiff + (1 - theta) *
                                                       (bspl + theta * (r4 + (1 - theta) * r5))));
                ++next;
            }
            t += h;
            y = y_new;
            k1 = k7;  // FSAL
        }
        const double factor =
            err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
    }
    while (next < t_grid.size()) {  // t_end reached within rounding
        out.push_back(y);
        ++next;
    }
    return out;
}

// -- matrix exponential action ------------------------------------------------

Eigen::RowVectorXd matrix_exp_action(const Eigen::MatrixXd& S, double t,
                                     const Eigen::RowVectorXd& v) {
    if (S.rows() != S.cols()) throw validation_error("matrix_exp_action: S must be square");
    if (v.cols() != S.rows())
        throw validation_error("matrix_exp_action: dimension mismatch");
    if (!(t >= 0.0)) throw validation_error("matrix_exp_action: t must be >= 0");
    return v * (S * t).exp();
}

// -- optimizer ----------------------------------------------------------------

namespace {

constexpr double kHuge = 1e300;

struct Budget {
    const std::function<double(const std::vector<double>&)>& objective;
    int evaluations = 0;
    double best_f = kHuge;
    std::vector<double> best_x;

    double operator()(const std::vector<double>& x) {
        ++evaluations;
        double f = objective(x);
        if (!std::isfinite(f)) f = kHuge;
        if (f < best_f) {
            best_f = f;
            best_x = x;
        }
        return f;
    }
};

void nelder_mead(Budget& eval, std::vector<double> start, double step_scale,
                 int max_iters, double tol) {
    const std::size_t n = start.size();
    std::vector<std::vector<double>> simplex(n + 1, start);
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        double step = 0.05 * std::abs(start[i]);
        if (step == 0.0) step = 0.1;
        simplex[i + 1][i] += step * step_scale;
    }
    for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(simplex[i]);

    // adaptive coefficients (helpful above toy dimensions)
    const double nd = static_cast<double>(n);
    const double refl = 1.0, expa = 1.0 + 2.0 / nd,
                 contr = 0.75 - 1.0 / (2.0 * nd), shrink = 1.0 - 1.0 / nd;

    std::vector<std::size_t> order(n + 1);
    for (int iter = 0; iter < max_iters; ++iter) {
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t lo = order[0], hi = order[n], hi2 = order[n - 1];
        if (fv[hi] - fv[lo] <= tol * (1.0 + std::abs(fv[lo]))) return;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == hi) continue;
            for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j];
        }
        for (double& cj : centroid) cj /= nd;

        auto blend = [&](double coef) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j)
                p[j] = centroid[j] + coef * (centroid[j] - simplex[hi][j]);
            return p;
        };

        std::vector<double> xr = blend(refl);
        const double fr = eval(xr);
        if (fr < fv[lo]) {
            std::vector<double> xe = blend(refl * expa);
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[hi] = std::move(xe);
                fv[hi] = fe;
            } else {
                simplex[hi] = std::move(xr);
                fv[hi] = fr;
            }
        } else if (fr < fv[hi2]) {
            simplex[hi] = std::move(xr);
            fv[hi] = fr;
        } else {
            const bool outside = fr < fv[hi];
            std::vector<double> xc = blend(outside ? refl * contr : -contr);
            const double fc = eval(xc);
            if (fc < std::min(fr, fv[hi])) {
                simplex[hi] = std::move(xc);
                fv[hi] = fc;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == lo) continue;
                    for (std::size_t j = 0; j < n; ++j)
                        simplex[i][j] =
                            simplex[lo][j] + shrink * (simplex[i][j] - simplex[lo][j]);
                    fv[i] = eval(simplex[i]);
                }
            }
        }
    }
}

// A few rounds of central-difference steepest descent with backtracking.
void gradient_polish(Budget& eval, int max_rounds) {
    if (eval.best_x.empty()) return;
    const std::size_t n = eval.best_x.size();
    for (int round = 0; round < max_rounds; ++round) {
        const std::vector<double> x = eval.best_x;
        const double fx = eval.best_f;
        std::vector<double> g(n);
        double gnorm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double h = 1e-6 * (1.0 + std::abs(x[i]));
            std::vector<double> xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            g[i] = (eval(xp) - eval(xm)) / (2 * h);
            gnorm += g[i] * g[i];
        }
        gnorm = std::sqrt(gnorm);
        if (!(gnorm > 0.0) || !std::isfinite(gnorm)) return;
        double span = 0.0;
        for (double xi : x) span = std::max(span, std::abs(xi));
        double step = 0.1 * (1.0 + span) / gnorm;
        bool improved = false;
        for (int k = 0; k < 8; ++k, step *= 0.25) {
            std::vector<double> trial(n);
            for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] - step * g[i];
            if (eval(trial) < fx) {
                improved = true;
                break;
            }
        }
        if (!improved) return;
    }
}

}  // namespace

MinimizeResult minimize(const std::function<double(const std::vector<double>&)>& objective,
                        const std::vector<double>& x0, const OptimizerSpec& spec) {
    spec.validate();
    if (x0.empty()) throw validation_error("minimize: empty start point");

    Budget eval{objective};
    const double f0 = eval(x0);

    const int iters_per_restart = spec.max_iterations;
    for (int r = 0; r < spec.restarts; ++r) {
        std::vector<double> start = x0;
        if (r > 0) {
            std::mt19937_64 rng(stream_seed(spec.seed, static_cast<std::uint64_t>(r)));
            std::normal_distribution<double> gauss(0.0, 1.0);
            for (double& xi : start) xi += 0.5 * (1.0 + std::abs(xi)) * gauss(rng);
        }
        nelder_mead(eval, std::move(start), r == 0 ? 1.0 : 2.0, iters_per_restart,
                    spec.tolerance);
    }
    gradient_polish(eval, 10);

    MinimizeResult result;
    result.evaluations = eval.evaluations;
    result.restarts_used = spec.restarts;
    result.converged = eval.best_f < kHuge;
    if (eval.best_f < f0) {
        result.x = eval.best_x;
        result.f = eval.best_f;
        result.improved_over_start = true;
    } else {
        result.x = x0;
        result.f = f0;
        result.improved_over_start = false;
    }
    return result;
}

// -- scalar kernels -------------------------------------------------------------

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

// Acklam's rational initial estimate for the probit function.
double probit_estimate(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    if (p < 0.02425) {
        const double q = std::sqrt(-2 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    if (p > 1 - 0.02425) {
        const double q = std::sqrt(-2 * std::log(1 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    const double q = p - 0.5, r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

}  // namespace

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw validation_error("normal_quantile: p must be in (0, 1)");
    double z = probit_estimate(p);
    // two Halley refinements against erfc bring the estimate to ~1 ulp
    for (int i = 0; i < 2; ++i) {
        const double e = normal_cdf(z) - p;
        const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
        if (pdf <= 0.0) break;
        const double u = e / pdf;
        z -= u / (1 + 0.5 * z * u);
    }
    return z;
}

double gamma_q(double a, double x) {
    if (!(a > 0.0)) throw validation_error("gamma_q: a must be > 0");
    if (!(x >= 0.0)) throw validation_error("gamma_q: x must be >= 0");
    if (x == 0.0) return 1.0;
    const double log_prefix = a * std::log(x) - x - std::lgamma(a);
    if (x < a + 1.0) {
        // lower series for P, then Q = 1 - P
        double term = 1.0 / a;
        double sum = term;
        for (int n = 1; n < 1000; ++n) {
            term *= x / (a + n);
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-16) break;
        }
        return 1.0 - sum * std::exp(log_prefix);
    }
    // continued fraction for Q (modified Lentz)
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(log_prefix) * h;
}

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed ^ mix64(index));
}

}  // namespace phaseprice::numerics
