#pragma once

#include <functional>
#include <span>
#include <vector>

#include "phaseprice/converter.hpp"
#include "phaseprice/numerics.hpp"

namespace phaseprice::gof {

struct BinningSpec {
    enum class Mode { EquiprobableUnderModel, EqualWidth };
    Mode mode = Mode::EquiprobableUnderModel;
    int bins = 10;              // per dimension
    double min_expected = 1.0;  // pooling threshold
    void validate() const;
};

struct GofReport {
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
    std::vector<double> observed;  // per (pooled) bin
    std::vector<double> expected;
    std::vector<double> edges1;    // bin edges, first dimension
    std::vector<double> edges2;    // second dimension; empty for marginals
};

// Precomputed binning: edges plus model probability of each bin. Splitting
// the precompute from the counting keeps replication studies cheap.
struct MarginalBinning {
    std::vector<double> edges;  // bins+1 values spanning the support
    std::vector<double> probs;
};

MarginalBinning make_marginal_binning(const std::function<double(double)>& model_pdf,
                                      double support_lo, double support_hi,
                                      const BinningSpec& spec,
                                      const numerics::QuadratureSpec& quad = {1e-10, 1e-14,
                                                                              200});

GofReport chi2_with(const MarginalBinning& binning, std::span<const double> data,
                    const BinningSpec& spec);

// Pearson chi-square of data against a model density on [support_lo,
// support_hi]; equiprobable edges come from the model CDF by quadrature
// and root finding.
GofReport chi2_marginal(std::span<const double> data,
                        const std::function<double(double)>& model_pdf,
                        double support_lo, double support_hi, const BinningSpec& spec,
                        const numerics::QuadratureSpec& quad = {1e-10, 1e-14, 200});

struct JointBinning {
    std::vector<double> charge_edges;  // bins+1
    std::vector<double> los_edges;     // bins+1
    std::vector<double> probs;         // row-major [charge bin][los bin]
};

JointBinning make_joint_binning(const FittedModel& m, const BinningSpec& spec);

GofReport chi2_joint_with(const JointBinning& binning,
                          std::span<const std::pair<double, double>> data,
                          const BinningSpec& spec);

GofReport chi2_joint(std::span<const std::pair<double, double>> data,
                     const FittedModel& m, const BinningSpec& spec);

// Product-Gaussian kernel density estimate on a rectangular grid.
struct Kde2dGrid {
    std::vector<double> x;        // first coordinate (log-charge by convention)
    std::vector<double> y;        // second coordinate (LOS)
    std::vector<double> density;  // row-major [x][y]
    double at(std::size_t ix, std::size_t iy) const { return density[ix * y.size() + iy]; }
};

Kde2dGrid kde_2d(std::span<const std::pair<double, double>> data, double bandwidth_x,
                 double bandwidth_y, const std::vector<double>& grid_x,
                 const std::vector<double>& grid_y);

}  // namespace phaseprice::gof
