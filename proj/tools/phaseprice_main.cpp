#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "phaseprice/cli.hpp"

namespace pc = phaseprice::cli;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "config JSON path");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "RNG seed (overrides config)");
}

pc::RunConfig make_config(const CommonArgs& args) {
    pc::RunConfig config = pc::load_config(args.config_path);
    if (args.seed) {
        config.seed = *args.seed;
        config.optimizer.seed = *args.seed;
    }
    return config;
}

int run(int argc, char** argv) {
    CLI::App app{"phaseprice: staged hospital charge and length-of-stay modeling"};
    app.require_subcommand(1);

    CommonArgs fit_args, sim_args, price_args, gof_args, grid_args;
    std::string data_path, model_path;
    std::optional<std::string> grid_data;
    long sim_size = 10000;
    bool sim_paths = false;
    double t_start = 1.0, t_stop = 30.0, t_step = 1.0;
    int nx = 50, ny = 50;
    double bw_x = 0.15, bw_y = 1.0;

    CLI::App* fit = app.add_subcommand("fit", "two-stage maximum-likelihood fit");
    add_common(fit, fit_args);
    fit->add_option("--data", data_path, "charge/LOS CSV")->required();

    CLI::App* simulate = app.add_subcommand("simulate", "draw a synthetic cohort");
    add_common(simulate, sim_args);
    simulate->add_option("--model", model_path, "model JSON")->required();
    simulate->add_option("--size", sim_size, "number of patients");
    simulate->add_flag("--paths", sim_paths, "write a band-path JSON sidecar");

    CLI::App* price = app.add_subcommand("price", "per-band price curves");
    add_common(price, price_args);
    price->add_option("--model", model_path, "model JSON")->required();
    price->add_option("--t-start", t_start, "grid start");
    price->add_option("--t-stop", t_stop, "grid stop");
    price->add_option("--t-step", t_step, "grid step");

    CLI::App* gof = app.add_subcommand("gof", "goodness-of-fit report");
    add_common(gof, gof_args);
    gof->add_option("--model", model_path, "model JSON")->required();
    gof->add_option("--data", data_path, "charge/LOS CSV")->required();

    CLI::App* grid = app.add_subcommand("grid", "density surfaces for plotting");
    add_common(grid, grid_args);
    grid->add_option("--model", model_path, "model JSON")->required();
    grid->add_option("--data", grid_data, "optional CSV for the KDE surface");
    grid->add_option("--nx", nx, "log-charge grid points");
    grid->add_option("--ny", ny, "LOS grid points");
    grid->add_option("--bw-x", bw_x, "KDE bandwidth, log-charge");
    grid->add_option("--bw-y", bw_y, "KDE bandwidth, LOS");

    CLI11_PARSE(app, argc, argv);

    std::vector<std::string> written;
    if (fit->parsed()) {
        written = pc::cmd_fit(make_config(fit_args), data_path, fit_args.out_dir);
    } else if (simulate->parsed()) {
        written = pc::cmd_simulate(make_config(sim_args), model_path, sim_args.out_dir,
                                   sim_size, sim_paths);
    } else if (price->parsed()) {
        written = pc::cmd_price(make_config(price_args), model_path, price_args.out_dir,
                                t_start, t_stop, t_step);
    } else if (gof->parsed()) {
        written = pc::cmd_gof(make_config(gof_args), model_path, data_path,
                              gof_args.out_dir);
    } else if (grid->parsed()) {
        written = pc::cmd_grid(make_config(grid_args), model_path, grid_data,
                               grid_args.out_dir, nx, ny, bw_x, bw_y);
    }
    for (const std::string& path : written) std::printf("wrote %s\n", path.c_str());
    return pc::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const phaseprice::validation_error& e) {
        std::fprintf(stderr, "error (validation): %s\n", e.what());
        return pc::kExitValidation;
    } catch (const phaseprice::io_error& e) {
        std::fprintf(stderr, "error (io): %s\n", e.what());
        return pc::kExitIo;
    } catch (const phaseprice::numeric_error& e) {
        std::fprintf(stderr, "error (numeric): %s\n", e.what());
        return pc::kExitNumeric;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return pc::kExitNumeric;
    }
}
