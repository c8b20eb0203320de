#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phaseprice/converter.hpp"
#include "phaseprice/estimation.hpp"
#include "phaseprice/gof.hpp"
#include "phaseprice/simulation.hpp"

namespace phaseprice::cli {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitIo = 4;

struct RunConfig {
    int n = 4;
    std::uint64_t seed = 20130101;
    double tail_quantile = 1e-10;
    double horizon = 0.0;  // 0 => sized from the model
    bool jitter = false;
    numerics::OptimizerSpec optimizer{2000, 1e-6, 3, 0};
    numerics::QuadratureSpec quadrature{1e-8, 1e-200, 200};
    numerics::OdeSpec ode{0.01, 1e-8, 1e-11, 2000000};
    gof::BinningSpec binning;

    void validate() const;
    ConstructOptions construct_options() const;
};

// Parses a config JSON document; unknown keys are rejected. `path` empty =>
// all defaults.
RunConfig load_config(const std::string& path);

// Canonical serialized form (defaults filled in) and its FNV-1a hash.
std::string config_to_json(const RunConfig& config);
std::string config_hash(const RunConfig& config);

struct Dataset {
    std::vector<std::pair<double, double>> records;  // (charge, los)
    std::string source;
    long rows_read = 0;
    std::vector<std::string> rejected;  // "line N: reason"
};

struct IngestOptions {
    bool jitter = false;           // uniform [0,1) jitter on integer LOS values
    std::uint64_t jitter_seed = 0;
};

// CSV with a header naming `charge` and `los` columns (extras ignored,
// '#' lines skipped). Hard error when more than 1% of rows are rejected.
Dataset ingest(const std::string& path, const IngestOptions& options = {});

// -- model and report serialization -------------------------------------------

std::string params_to_json(const CphParams& p);
CphParams params_from_json(const std::string& text);

std::string model_to_json(const FittedModel& m, const std::string& hash);
FittedModel model_from_json(const std::string& text, double tail_quantile = 1e-10);

FittedModel load_model(const std::string& path, const RunConfig& config);

// -- commands -------------------------------------------------------------------
// Each command validates, computes everything, then writes artifacts; on
// error nothing is written. Returns the artifact paths it wrote.

std::vector<std::string> cmd_fit(const RunConfig& config, const std::string& data_path,
                                 const std::string& out_dir);

std::vector<std::string> cmd_simulate(const RunConfig& config,
                                      const std::string& model_path,
                                      const std::string& out_dir, long size,
                                      bool with_paths);

std::vector<std::string> cmd_price(const RunConfig& config, const std::string& model_path,
                                   const std::string& out_dir, double t_start,
                                   double t_stop, double t_step);

std::vector<std::string> cmd_gof(const RunConfig& config, const std::string& model_path,
                                 const std::string& data_path,
                                 const std::string& out_dir);

std::vector<std::string> cmd_grid(const RunConfig& config, const std::string& model_path,
                                  const std::optional<std::string>& data_path,
                                  const std::string& out_dir, int nx, int ny,
                                  double bandwidth_x, double bandwidth_y);

}  // namespace phaseprice::cli
