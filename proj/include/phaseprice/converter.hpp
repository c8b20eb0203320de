#pragma once

#include <memory>
#include <vector>

#include "phaseprice/numerics.hpp"
#include "phaseprice/phase_type.hpp"
#include "phaseprice/rgrst.hpp"

namespace phaseprice {

// Time-indexed charge curve on a strictly increasing grid with monotone
// (Fritsch-Carlson) cubic Hermite interpolation. Beyond the last node the
// curve is extended along the growth characteristic, value(T) * e^{t-T}.
class Curve {
  public:
    Curve() = default;
    Curve(std::vector<double> t, std::vector<double> value);

    double operator()(double t) const;
    double derivative(double t) const;
    const std::vector<double>& grid() const { return t_; }
    const std::vector<double>& values() const { return v_; }
    double horizon() const { return t_.back(); }

  private:
    std::vector<double> t_, v_, slope_;
};

// The partition curves C_1 < ... < C_{n-1}; C_0 == 0 and C_n == +inf are
// implicit. value(i, t) accepts i in 0..n.
struct PartitionCurves {
    std::vector<Curve> curves;
    double horizon = 0.0;

    int bands() const { return static_cast<int>(curves.size()) + 1; }
    double value(int i, double t) const;
    void validate() const;  // strict ordering at every grid node
};

// Log of the band-wise stay probability, evaluated by tracing the backward
// characteristic to the band's lower boundary (the t=0 axis carries value 1,
// the lower curve carries the previous band's value) and decaying by the
// band's absorption rate over the within-band travel time.
double log_rho_band(const PartitionCurves& curves, const std::vector<double>& c,
                    int band, double y, double t);

class PiecewiseRho {
  public:
    PiecewiseRho() = default;
    PiecewiseRho(std::shared_ptr<const PartitionCurves> curves, std::vector<double> c);

    double log_band(int band, double y, double t) const;
    double band_value(int band, double y, double t) const;
    // dispatches on the band containing (y, t)
    double log_value(double y, double t) const;
    double value(double y, double t) const;

    const std::vector<double>& c() const { return c_; }
    const PartitionCurves& curves() const { return *curves_; }

  private:
    std::shared_ptr<const PartitionCurves> curves_;
    std::vector<double> c_;
};

struct FittedModel {
    CphParams params;
    LognormalParams initial;
    std::shared_ptr<const PartitionCurves> curves;
    PiecewiseRho rho;
    double tail_quantile = 1e-10;
    double z_cut = 0.0;  // normal quantile of 1 - tail_quantile

    double horizon() const { return curves->horizon; }
    GrowthModel growth() const { return GrowthModel{initial}; }
    // upper integration cutoff for the unbounded top band
    double charge_cutoff(double t) const;
};

// Charges c_1 < ... < c_{n-1} splitting the initial density into masses alpha.
std::vector<double> initial_cutpoints(const std::vector<double>& alpha,
                                      const LognormalParams& lp);

struct ConstructOptions {
    double horizon = 0.0;          // 0 => the 1 - 1e-8 quantile of the LOS law
    double tail_quantile = 1e-10;  // upper-cutoff mass for top-band integrals
    numerics::QuadratureSpec quadrature{1e-8, 1e-200, 200};
    numerics::OdeSpec ode{0.01, 1e-8, 1e-11, 2000000};
    double grid_step = 0.02;       // curve output-node spacing

    static ConstructOptions coarse();
};

// Solve the boundary ODE for curve C_i (band = i in 1..n-1) on top of the
// already-built lower curves. c_i0 is the initial value C_i(0).
Curve band_curve(int band, const CphParams& p, const LognormalParams& lp,
                 const PartitionCurves& lower, double c_i0,
                 const ConstructOptions& opt);

// The full inductive construction: cut points, band curves, band evaluators.
FittedModel construct_rho(const CphParams& p, const LognormalParams& lp,
                          const ConstructOptions& opt = {});

// Band containing (y, t); ties y == C_i(t) go to band i+1.
int band_of(const FittedModel& m, double y, double t);

double log_joint_pdf(const FittedModel& m, double y, double t);
double joint_pdf(const FittedModel& m, double y, double t);

// Integral of potential-density * rho over [ylo, yhi] within one band.
double band_mass_between(const FittedModel& m, int band, double ylo, double yhi,
                         double t, const numerics::QuadratureSpec& quad);

// Probability of sitting in band `band` at time t (the construction's P_i(t)).
double band_mass(const FittedModel& m, int band, double t,
                 const numerics::QuadratureSpec& quad = {1e-8, 1e-200, 200});

// LOS density of the constructed model, integrating the joint over charge.
double marginal_los_pdf(const FittedModel& m, double t,
                        const numerics::QuadratureSpec& quad = {1e-8, 1e-200, 200});

// Charge marginal of the constructed model (integrating the joint over LOS).
double charge_marginal_pdf(const FittedModel& m, double y,
                           const numerics::QuadratureSpec& quad = {1e-7, 1e-200, 200});
double charge_marginal_cdf(const FittedModel& m, double y,
                           const numerics::QuadratureSpec& quad = {1e-7, 1e-200, 200});

}  // namespace phaseprice
