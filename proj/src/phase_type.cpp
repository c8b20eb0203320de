#include "phaseprice/phase_type.hpp"

#include <cmath>
#include <string>

#include "phaseprice/numerics.hpp"
#include "phaseprice/random.hpp"

namespace phaseprice {

void CphParams::validate() const {
    const int nn = n();
    if (nn < 1) throw validation_error("CphParams: need at least one phase (alpha empty)");
    if (static_cast<int>(c.size()) != nn)
        throw validation_error("CphParams: c must have one rate per phase");
    if (static_cast<int>(lambda.size()) != nn - 1)
        throw validation_error("CphParams: lambda must have n-1 rates");
    double sum = 0.0;
    for (int i = 0; i < nn; ++i) {
        if (!(alpha[i] >= 0.0))
            throw validation_error("CphParams: alpha[" + std::to_string(i) +
                                   "] must be >= 0");
        sum += alpha[i];
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw validation_error("CphParams: alpha must sum to 1 (got " +
                               std::to_string(sum) + ")");
    for (int i = 0; i < nn - 1; ++i)
        if (!(lambda[i] > 0.0))
            throw validation_error("CphParams: lambda[" + std::to_string(i) +
                                   "] must be > 0");
    for (int i = 0; i < nn; ++i)
        if (!(c[i] > 0.0))
            throw validation_error("CphParams: c[" + std::to_string(i) + "] must be > 0");
}

SubGenerator build_generator(const CphParams& p) {
    p.validate();
    const int n = p.n();
    SubGenerator gen;
    gen.S = Eigen::MatrixXd::Zero(n, n);
    gen.exit = Eigen::VectorXd(n);
    for (int i = 0; i < n; ++i) {
        const double lam = i < n - 1 ? p.lambda[i] : 0.0;
        gen.S(i, i) = -(p.c[i] + lam);
        if (i < n - 1) gen.S(i, i + 1) = lam;
        gen.exit(i) = p.c[i];
    }
    return gen;
}

namespace {

Eigen::RowVectorXd alpha_row(const CphParams& p) {
    return Eigen::Map<const Eigen::RowVectorXd>(p.alpha.data(), p.n());
}

}  // namespace

double cph_pdf(const CphParams& p, double t) {
    if (!(t >= 0.0)) throw validation_error("cph_pdf: t must be >= 0");
    const SubGenerator gen = build_generator(p);
    return numerics::matrix_exp_action(gen.S, t, alpha_row(p)) * gen.exit;
}

double cph_cdf(const CphParams& p, double t) {
    if (!(t >= 0.0)) throw validation_error("cph_cdf: t must be >= 0");
    const SubGenerator gen = build_generator(p);
    return 1.0 - numerics::matrix_exp_action(gen.S, t, alpha_row(p)).sum();
}

std::vector<double> phase_occupancy(const CphParams& p, double t) {
    if (!(t >= 0.0)) throw validation_error("phase_occupancy: t must be >= 0");
    const SubGenerator gen = build_generator(p);
    const Eigen::RowVectorXd row = numerics::matrix_exp_action(gen.S, t, alpha_row(p));
    std::vector<double> occ(p.n() + 1);
    for (int i = 0; i < p.n(); ++i) occ[i] = row(i);
    occ[p.n()] = 1.0 - row.sum();
    return occ;
}

double cph_quantile(const CphParams& p, double q) {
    if (!(q > 0.0 && q < 1.0)) throw validation_error("cph_quantile: q must be in (0,1)");
    double hi = 1.0;
    int guard = 0;
    while (cph_cdf(p, hi) < q) {
        hi *= 2.0;
        if (++guard > 200) throw numeric_error("cph_quantile: bracket search diverged");
    }
    double lo = 0.0;
    for (int i = 0; i < 200 && (hi - lo) > 1e-12 * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        (cph_cdf(p, mid) < q ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

CphSample cph_sample(const CphParams& p, std::mt19937_64& rng) {
    p.validate();
    const int n = p.n();
    CphSample sample;

    double u = uniform01(rng);
    int phase = n - 1;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        acc += p.alpha[i];
        if (u < acc) {
            phase = i;
            break;
        }
    }

    double t = 0.0;
    while (true) {
        sample.path.emplace_back(phase + 1, t);
        const double lam = phase < n - 1 ? p.lambda[phase] : 0.0;
        const double rate = p.c[phase] + lam;
        t += -std::log(uniform01_open(rng)) / rate;
        if (phase == n - 1 || uniform01(rng) < p.c[phase] / rate) break;
        ++phase;
    }
    sample.time = t;
    return sample;
}

// -- CphDensity ---------------------------------------------------------------

CphDensity::CphDensity(const CphParams& p) : gen_(build_generator(p)), alpha_(alpha_row(p)) {
    const int n = p.n();
    std::vector<double> diag(n);
    double scale = 0.0;
    for (int i = 0; i < n; ++i) {
        diag[i] = gen_.S(i, i);
        scale = std::max(scale, std::abs(diag[i]));
    }
    double min_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            min_gap = std::min(min_gap, std::abs(diag[i] - diag[j]));
    if (n == 1 || min_gap > 1e-4 * scale) {
        // Right eigenvectors of the upper-bidiagonal S by back-substitution:
        // column j has v_j = 1 and v_i = lambda_i v_{i+1} / (d_j - d_i).
        Eigen::MatrixXd V = Eigen::MatrixXd::Zero(n, n);
        for (int j = 0; j < n; ++j) {
            V(j, j) = 1.0;
            for (int i = j - 1; i >= 0; --i)
                V(i, j) = gen_.S(i, i + 1) * V(i + 1, j) / (diag[j] - diag[i]);
        }
        const Eigen::VectorXd w_right =
            V.triangularView<Eigen::Upper>().solve(gen_.exit);
        const Eigen::RowVectorXd w_left = alpha_ * V;
        rates_ = diag;
        weights_.resize(n);
        for (int j = 0; j < n; ++j) weights_[j] = w_left(j) * w_right(j);
        spectral_ = true;
        // verify against the matrix exponential at two probe points
        for (double probe : {0.1 / scale, 2.0 / scale}) {
            double mix = 0.0;
            for (int j = 0; j < n; ++j) mix += weights_[j] * std::exp(rates_[j] * probe);
            const double ref =
                numerics::matrix_exp_action(gen_.S, probe, alpha_) * gen_.exit;
            if (!(std::abs(mix - ref) <= 1e-8 * std::max(std::abs(ref), 1e-300))) {
                spectral_ = false;
                break;
            }
        }
    }
}

double CphDensity::pdf(double t) const {
    if (!(t >= 0.0)) throw validation_error("CphDensity::pdf: t must be >= 0");
    if (spectral_) {
        double v = 0.0;
        for (std::size_t j = 0; j < rates_.size(); ++j)
            v += weights_[j] * std::exp(rates_[j] * t);
        return v > 0.0 ? v : 0.0;
    }
    return numerics::matrix_exp_action(gen_.S, t, alpha_) * gen_.exit;
}

double CphDensity::log_pdf(double t) const {
    const double v = pdf(t);
    return v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
}

}  // namespace phaseprice
