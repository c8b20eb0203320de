#include "phaseprice/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "phaseprice/pricing.hpp"
#include "phaseprice/random.hpp"

namespace phaseprice::cli {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write " + path);
    out << content;
    if (!out) throw io_error("write failed for " + path);
}

ordered_json parse_json(const std::string& text, const std::string& what) {
    try {
        return ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw validation_error(what + ": JSON parse error: " + e.what());
    }
}

double require_number(const ordered_json& j, const std::string& key) {
    if (!j.contains(key))
        throw validation_error("model JSON: missing field '" + key + "'");
    if (!j.at(key).is_number())
        throw validation_error("model JSON: field '" + key + "' must be a number");
    return j.at(key).get<double>();
}

std::vector<double> require_array(const ordered_json& j, const std::string& key) {
    if (!j.contains(key))
        throw validation_error("model JSON: missing field '" + key + "'");
    if (!j.at(key).is_array())
        throw validation_error("model JSON: field '" + key + "' must be an array");
    std::vector<double> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_number())
            throw validation_error("model JSON: field '" + key +
                                   "' must contain numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

// -- config --------------------------------------------------------------------

void RunConfig::validate() const {
    if (n < 1) throw validation_error("config: n must be >= 1");
    if (!(tail_quantile > 0.0 && tail_quantile < 0.5))
        throw validation_error("config: tail_quantile must be in (0, 0.5)");
    if (horizon < 0.0) throw validation_error("config: horizon must be >= 0");
    optimizer.validate();
    quadrature.validate();
    ode.validate();
    binning.validate();
}

ConstructOptions RunConfig::construct_options() const {
    ConstructOptions opt;
    opt.horizon = horizon;
    opt.tail_quantile = tail_quantile;
    opt.quadrature = quadrature;
    opt.ode = ode;
    return opt;
}

namespace {

void apply_config_keys(RunConfig& config, const ordered_json& j) {
    for (const auto& [key, value] : j.items()) {
        if (key == "n") config.n = value.get<int>();
        else if (key == "seed") config.seed = value.get<std::uint64_t>();
        else if (key == "tail_quantile") config.tail_quantile = value.get<double>();
        else if (key == "horizon") config.horizon = value.get<double>();
        else if (key == "jitter") config.jitter = value.get<bool>();
        else if (key == "optimizer") {
            for (const auto& [k2, v2] : value.items()) {
                if (k2 == "max_iterations") config.optimizer.max_iterations = v2.get<int>();
                else if (k2 == "tolerance") config.optimizer.tolerance = v2.get<double>();
                else if (k2 == "restarts") config.optimizer.restarts = v2.get<int>();
                else throw validation_error("config: unknown key optimizer." + k2);
            }
        } else if (key == "quadrature") {
            for (const auto& [k2, v2] : value.items()) {
                if (k2 == "rel_tol") config.quadrature.rel_tol = v2.get<double>();
                else if (k2 == "abs_tol") config.quadrature.abs_tol = v2.get<double>();
                else if (k2 == "max_subdivisions")
                    config.quadrature.max_subdivisions = v2.get<int>();
                else throw validation_error("config: unknown key quadrature." + k2);
            }
        } else if (key == "ode") {
            for (const auto& [k2, v2] : value.items()) {
                if (k2 == "initial_step") config.ode.initial_step = v2.get<double>();
                else if (k2 == "rel_tol") config.ode.rel_tol = v2.get<double>();
                else if (k2 == "abs_tol") config.ode.abs_tol = v2.get<double>();
                else if (k2 == "max_steps") config.ode.max_steps = v2.get<long>();
                else throw validation_error("config: unknown key ode." + k2);
            }
        } else if (key == "binning") {
            for (const auto& [k2, v2] : value.items()) {
                if (k2 == "mode") {
                    const std::string mode = v2.get<std::string>();
                    if (mode == "equiprobable")
                        config.binning.mode = gof::BinningSpec::Mode::EquiprobableUnderModel;
                    else if (mode == "equal_width")
                        config.binning.mode = gof::BinningSpec::Mode::EqualWidth;
                    else
                        throw validation_error("config: unknown binning mode '" + mode +
                                               "'");
                } else if (k2 == "bins") config.binning.bins = v2.get<int>();
                else if (k2 == "min_expected")
                    config.binning.min_expected = v2.get<double>();
                else throw validation_error("config: unknown key binning." + k2);
            }
        } else {
            throw validation_error("config: unknown key '" + key + "'");
        }
    }
}

}  // namespace

RunConfig load_config(const std::string& path) {
    RunConfig config;
    if (!path.empty()) {
        const ordered_json j = parse_json(read_file(path), "config " + path);
        if (!j.is_object()) throw validation_error("config: top level must be an object");
        try {
            apply_config_keys(config, j);
        } catch (const nlohmann::json::exception& e) {
            throw validation_error("config: " + std::string(e.what()));
        }
    }
    config.optimizer.seed = config.seed;
    config.validate();
    return config;
}

std::string config_to_json(const RunConfig& config) {
    ordered_json j;
    j["n"] = config.n;
    j["seed"] = config.seed;
    j["tail_quantile"] = config.tail_quantile;
    j["horizon"] = config.horizon;
    j["jitter"] = config.jitter;
    j["optimizer"] = {{"max_iterations", config.optimizer.max_iterations},
                      {"tolerance", config.optimizer.tolerance},
                      {"restarts", config.optimizer.restarts}};
    j["quadrature"] = {{"rel_tol", config.quadrature.rel_tol},
                       {"abs_tol", config.quadrature.abs_tol},
                       {"max_subdivisions", config.quadrature.max_subdivisions}};
    j["ode"] = {{"initial_step", config.ode.initial_step},
                {"rel_tol", config.ode.rel_tol},
                {"abs_tol", config.ode.abs_tol},
                {"max_steps", config.ode.max_steps}};
    j["binning"] = {
        {"mode", config.binning.mode == gof::BinningSpec::Mode::EquiprobableUnderModel
                     ? "equiprobable"
                     : "equal_width"},
        {"bins", config.binning.bins},
        {"min_expected", config.binning.min_expected}};
    return j.dump(2) + "\n";
}

std::string config_hash(const RunConfig& config) {
    const std::string text = config_to_json(config);
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// -- ingest --------------------------------------------------------------------

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        const auto first = field.find_first_not_of(" \t\r");
        const auto last = field.find_last_not_of(" \t\r");
        fields.push_back(first == std::string::npos
                             ? std::string()
                             : field.substr(first, last - first + 1));
    }
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace

Dataset ingest(const std::string& path, const IngestOptions& options) {
    std::ifstream in(path);
    if (!in) throw io_error("ingest: cannot open " + path);

    Dataset ds;
    ds.source = path;
    std::string line;
    long line_no = 0;

    // header
    long charge_col = -1, los_col = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const std::vector<std::string> header = split_csv_line(line);
        for (std::size_t i = 0; i < header.size(); ++i) {
            std::string name = header[i];
            std::transform(name.begin(), name.end(), name.begin(),
                           [](unsigned char ch) { return std::tolower(ch); });
            if (name == "charge") charge_col = static_cast<long>(i);
            if (name == "los") los_col = static_cast<long>(i);
        }
        break;
    }
    if (charge_col < 0 || los_col < 0)
        throw validation_error("ingest: " + path +
                               " must have a header naming 'charge' and 'los' columns");

    auto parse_field = [](const std::string& s, double& out) {
        if (s.empty()) return false;
        char* end = nullptr;
        out = std::strtod(s.c_str(), &end);
        return end == s.c_str() + s.size() && std::isfinite(out);
    };

    long row_index = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        ++ds.rows_read;
        const std::vector<std::string> fields = split_csv_line(line);
        const std::size_t need =
            static_cast<std::size_t>(std::max(charge_col, los_col)) + 1;
        double charge = 0.0, los = 0.0;
        if (fields.size() < need) {
            ds.rejected.push_back("line " + std::to_string(line_no) + ": missing fields");
        } else if (!parse_field(fields[static_cast<std::size_t>(charge_col)], charge)) {
            ds.rejected.push_back("line " + std::to_string(line_no) +
                                  ": unparseable charge");
        } else if (!parse_field(fields[static_cast<std::size_t>(los_col)], los)) {
            ds.rejected.push_back("line " + std::to_string(line_no) + ": unparseable los");
        } else if (!(charge > 0.0)) {
            ds.rejected.push_back("line " + std::to_string(line_no) +
                                  ": charge must be > 0");
        } else if (!(los > 0.0)) {
            ds.rejected.push_back("line " + std::to_string(line_no) + ": los must be > 0");
        } else {
            if (options.jitter && los == std::floor(los)) {
                std::mt19937_64 rng(numerics::stream_seed(
                    options.jitter_seed, static_cast<std::uint64_t>(row_index)));
                los += uniform01(rng);
            }
            ds.records.emplace_back(charge, los);
        }
        ++row_index;
    }

    if (ds.rows_read == 0) throw validation_error("ingest: " + path + " has no data rows");
    if (100 * static_cast<long>(ds.rejected.size()) > ds.rows_read) {
        std::string msg = "ingest: more than 1% of rows rejected in " + path + ":";
        const std::size_t show = std::min<std::size_t>(ds.rejected.size(), 20);
        for (std::size_t i = 0; i < show; ++i) msg += "\n  " + ds.rejected[i];
        if (ds.rejected.size() > show)
            msg += "\n  ... and " + std::to_string(ds.rejected.size() - show) + " more";
        throw validation_error(msg);
    }
    return ds;
}

// -- model serialization ----------------------------------------------------------

namespace {

ordered_json params_json_fields(const CphParams& p) {
    ordered_json j;
    j["alpha"] = p.alpha;
    j["lambda"] = p.lambda;
    j["c"] = p.c;
    return j;
}

}  // namespace

std::string params_to_json(const CphParams& p) {
    return params_json_fields(p).dump(2) + "\n";
}

CphParams params_from_json(const std::string& text) {
    const ordered_json j = parse_json(text, "params");
    CphParams p;
    p.alpha = require_array(j, "alpha");
    p.lambda = require_array(j, "lambda");
    p.c = require_array(j, "c");
    p.validate();
    return p;
}

std::string model_to_json(const FittedModel& m, const std::string& hash) {
    ordered_json j = params_json_fields(m.params);
    j["mu"] = m.initial.mu;
    j["sigma"] = m.initial.sigma;
    ordered_json curves = ordered_json::array();
    for (const Curve& curve : m.curves->curves) {
        ordered_json pairs = ordered_json::array();
        const auto& ts = curve.grid();
        const auto& vs = curve.values();
        for (std::size_t k = 0; k < ts.size(); ++k)
            pairs.push_back(ordered_json::array({ts[k], vs[k]}));
        curves.push_back(std::move(pairs));
    }
    j["curves"] = std::move(curves);
    j["meta"] = {{"config_hash", hash}, {"version", kVersion}};
    return j.dump() + "\n";
}

FittedModel model_from_json(const std::string& text, double tail_quantile) {
    const ordered_json j = parse_json(text, "model");

    FittedModel m;
    m.params.alpha = require_array(j, "alpha");
    m.params.lambda = require_array(j, "lambda");
    m.params.c = require_array(j, "c");
    m.params.validate();
    m.initial.mu = require_number(j, "mu");
    m.initial.sigma = require_number(j, "sigma");
    m.initial.validate();

    if (!j.contains("curves") || !j.at("curves").is_array())
        throw validation_error("model JSON: missing field 'curves'");
    const auto& curves_json = j.at("curves");
    if (static_cast<int>(curves_json.size()) != m.params.n() - 1)
        throw validation_error("model JSON: field 'curves' must hold n-1 curves");

    auto curves = std::make_shared<PartitionCurves>();
    for (const auto& pairs : curves_json) {
        std::vector<double> ts, vs;
        for (const auto& pair : pairs) {
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
                !pair[1].is_number())
                throw validation_error("model JSON: field 'curves' must hold [t, C] pairs");
            ts.push_back(pair[0].get<double>());
            vs.push_back(pair[1].get<double>());
        }
        curves->curves.emplace_back(std::move(ts), std::move(vs));
    }
    curves->horizon = m.params.n() > 1 ? curves->curves.front().horizon()
                                       : cph_quantile(m.params, 1.0 - 1e-8);
    curves->validate();

    m.curves = curves;
    m.rho = PiecewiseRho(curves, m.params.c);
    m.tail_quantile = tail_quantile;
    m.z_cut = numerics::normal_quantile(1.0 - tail_quantile);
    return m;
}

FittedModel load_model(const std::string& path, const RunConfig& config) {
    return model_from_json(read_file(path), config.tail_quantile);
}

// -- report serialization -----------------------------------------------------------

namespace {

ordered_json diagnostics_json(const FitDiagnostics& d) {
    return {{"evaluations", d.evaluations},
            {"restarts", d.restarts},
            {"converged", d.converged},
            {"improved_over_start", d.improved_over_start}};
}

ordered_json gof_report_json(const gof::GofReport& r) {
    ordered_json j;
    j["statistic"] = r.statistic;
    j["df"] = r.df;
    j["p_value"] = r.p_value;
    j["observed"] = r.observed;
    j["expected"] = r.expected;
    j["edges"] = r.edges1;
    if (!r.edges2.empty()) j["edges2"] = r.edges2;
    return j;
}

ordered_json meta_json(const RunConfig& config) {
    return {{"config_hash", config_hash(config)}, {"version", kVersion}};
}

std::string csv_meta_line(const RunConfig& config) {
    return "# config_hash=" + config_hash(config) + " version=" + kVersion + "\n";
}

}  // namespace

// -- commands -----------------------------------------------------------------------

namespace {

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void ensure_out_dir(const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw io_error("cannot create output directory " + out_dir);
}

}  // namespace

std::vector<std::string> cmd_fit(const RunConfig& config, const std::string& data_path,
                                 const std::string& out_dir) {
    config.validate();
    const Dataset ds = ingest(data_path, {config.jitter, config.seed});

    numerics::OptimizerSpec spec = config.optimizer;
    spec.seed = config.seed;
    FitOptions options;
    options.horizon_override = config.horizon;
    const TwoStageResult fit = two_stage_fit(ds.records, config.n, spec, options);

    const std::string hash = config_hash(config);
    ordered_json report;
    report["meta"] = meta_json(config);
    report["data"] = {{"path", ds.source},
                      {"rows", ds.rows_read},
                      {"rejected", static_cast<long>(ds.rejected.size())}};
    report["stage1"] = params_json_fields(fit.stage1.params);
    report["stage1"]["log_likelihood"] = fit.stage1.log_likelihood;
    report["stage1"]["diagnostics"] = diagnostics_json(fit.stage1.diagnostics);
    report["stage2"] = {{"mu", fit.stage2.params.mu}, {"sigma", fit.stage2.params.sigma}};
    report["stage2"]["log_likelihood"] = fit.stage2.log_likelihood;
    report["stage2"]["diagnostics"] = diagnostics_json(fit.stage2.diagnostics);
    const std::string model_text = model_to_json(fit.stage2.model, hash);
    report["model"] = parse_json(model_text, "model");

    ensure_out_dir(out_dir);
    const std::string report_path = join_path(out_dir, "fit_report.json");
    const std::string model_path = join_path(out_dir, "model.json");
    write_file(report_path, report.dump(2) + "\n");
    write_file(model_path, model_text);
    return {report_path, model_path};
}

std::vector<std::string> cmd_simulate(const RunConfig& config,
                                      const std::string& model_path,
                                      const std::string& out_dir, long size,
                                      bool with_paths) {
    config.validate();
    if (size < 1) throw validation_error("simulate: size must be >= 1");
    const FittedModel m = load_model(model_path, config);
    const Cohort cohort = simulate_cohort(m, size, config.seed);

    std::string csv = csv_meta_line(config);
    csv += "charge,los\n";
    for (const CohortRecord& rec : cohort.records)
        csv += fmt(rec.y) + "," + fmt(rec.t) + "\n";

    std::string paths_text;
    if (with_paths) {
        ordered_json paths = ordered_json::array();
        for (const CohortRecord& rec : cohort.records) {
            ordered_json entry;
            entry["y0"] = rec.y0;
            entry["los"] = rec.t;
            ordered_json path = ordered_json::array();
            for (const auto& [band, at] : rec.path)
                path.push_back(ordered_json::array({band, at}));
            entry["path"] = std::move(path);
            paths.push_back(std::move(entry));
        }
        ordered_json doc;
        doc["meta"] = meta_json(config);
        doc["paths"] = std::move(paths);
        paths_text = doc.dump() + "\n";
    }

    if (cohort.horizon_extensions > 0)
        std::fprintf(stderr,
                     "simulate: warning: %ld discharge draws beyond the curve horizon "
                     "used a constant final hazard\n",
                     cohort.horizon_extensions);

    ensure_out_dir(out_dir);
    std::vector<std::string> written;
    const std::string csv_path = join_path(out_dir, "cohort.csv");
    write_file(csv_path, csv);
    written.push_back(csv_path);
    if (with_paths) {
        const std::string paths_path = join_path(out_dir, "paths.json");
        write_file(paths_path, paths_text);
        written.push_back(paths_path);
    }
    return written;
}

std::vector<std::string> cmd_price(const RunConfig& config, const std::string& model_path,
                                   const std::string& out_dir, double t_start,
                                   double t_stop, double t_step) {
    config.validate();
    if (!(t_start >= 0.0) || !(t_stop >= t_start) || !(t_step > 0.0))
        throw validation_error("price: need 0 <= t_start <= t_stop and t_step > 0");
    const FittedModel m = load_model(model_path, config);

    std::vector<double> grid;
    for (double t = t_start; t <= t_stop + 1e-12; t += t_step) grid.push_back(t);
    const std::vector<PriceCurve> table = price_table(m, grid, config.quadrature);

    std::string csv = csv_meta_line(config);
    csv += "band,t,price,occupancy\n";
    for (const PriceCurve& curve : table)
        for (std::size_t k = 0; k < curve.t.size(); ++k) {
            csv += std::to_string(curve.band) + "," + fmt(curve.t[k]) + ",";
            if (std::isfinite(curve.price[k])) csv += fmt(curve.price[k]);
            csv += "," + fmt(curve.denominator[k]) + "\n";
        }

    ensure_out_dir(out_dir);
    const std::string path = join_path(out_dir, "prices.csv");
    write_file(path, csv);
    return {path};
}

std::vector<std::string> cmd_gof(const RunConfig& config, const std::string& model_path,
                                 const std::string& data_path,
                                 const std::string& out_dir) {
    config.validate();
    const FittedModel m = load_model(model_path, config);
    const Dataset ds = ingest(data_path, {config.jitter, config.seed});

    std::vector<double> charges, los;
    charges.reserve(ds.records.size());
    los.reserve(ds.records.size());
    for (const auto& [y, t] : ds.records) {
        charges.push_back(y);
        los.push_back(t);
    }

    const double t_hi = cph_quantile(m.params, 1.0 - 1e-9);
    const gof::GofReport los_report = gof::chi2_marginal(
        los, [&](double t) { return cph_pdf(m.params, t); }, 0.0, t_hi, config.binning);

    const double y_lo = std::exp(m.initial.mu - 8.0 * m.initial.sigma);
    const double y_hi = m.charge_cutoff(m.horizon());
    const gof::GofReport charge_report = gof::chi2_marginal(
        charges, [&](double y) { return charge_marginal_pdf(m, y); }, y_lo, y_hi,
        config.binning, {1e-6, 1e-14, 200});

    gof::BinningSpec joint_spec = config.binning;
    joint_spec.bins = std::min(joint_spec.bins, 5);
    const gof::GofReport joint_report = gof::chi2_joint(ds.records, m, joint_spec);

    ordered_json doc;
    doc["meta"] = meta_json(config);
    doc["charge"] = gof_report_json(charge_report);
    doc["los"] = gof_report_json(los_report);
    doc["joint"] = gof_report_json(joint_report);

    ensure_out_dir(out_dir);
    const std::string path = join_path(out_dir, "gof_report.json");
    write_file(path, doc.dump(2) + "\n");
    return {path};
}

std::vector<std::string> cmd_grid(const RunConfig& config, const std::string& model_path,
                                  const std::optional<std::string>& data_path,
                                  const std::string& out_dir, int nx, int ny,
                                  double bandwidth_x, double bandwidth_y) {
    config.validate();
    if (nx < 2 || ny < 2) throw validation_error("grid: need at least a 2x2 grid");
    const FittedModel m = load_model(model_path, config);

    const double t_hi = std::min(cph_quantile(m.params, 0.999), m.horizon());
    const double x_lo = m.initial.mu - 4.0 * m.initial.sigma;
    const double x_hi = m.initial.mu + t_hi + 4.0 * m.initial.sigma;
    std::vector<double> grid_x(static_cast<std::size_t>(nx)),
        grid_y(static_cast<std::size_t>(ny));
    for (int i = 0; i < nx; ++i) grid_x[i] = x_lo + (x_hi - x_lo) * i / (nx - 1);
    for (int j = 0; j < ny; ++j) grid_y[j] = t_hi * j / (ny - 1);
    grid_y[0] = 1e-6;  // densities are evaluated just inside the support

    // model joint density over (log-charge, LOS), with the log Jacobian
    std::string model_csv = csv_meta_line(config);
    model_csv += "x,y,density\n";
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            const double y_charge = std::exp(grid_x[i]);
            const double density = joint_pdf(m, y_charge, grid_y[j]) * y_charge;
            model_csv += fmt(grid_x[i]) + "," + fmt(grid_y[j]) + "," + fmt(density) + "\n";
        }

    std::string kde_csv;
    if (data_path) {
        const Dataset ds = ingest(*data_path, {config.jitter, config.seed});
        std::vector<std::pair<double, double>> log_data;
        log_data.reserve(ds.records.size());
        for (const auto& [y, t] : ds.records) log_data.emplace_back(std::log(y), t);
        const gof::Kde2dGrid kde =
            gof::kde_2d(log_data, bandwidth_x, bandwidth_y, grid_x, grid_y);
        kde_csv = csv_meta_line(config);
        kde_csv += "x,y,density\n";
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j)
                kde_csv += fmt(grid_x[i]) + "," + fmt(grid_y[j]) + "," +
                           fmt(kde.at(static_cast<std::size_t>(i),
                                      static_cast<std::size_t>(j))) +
                           "\n";
    }

    ensure_out_dir(out_dir);
    std::vector<std::string> written;
    const std::string model_path_out = join_path(out_dir, "model_density.csv");
    write_file(model_path_out, model_csv);
    written.push_back(model_path_out);
    if (!kde_csv.empty()) {
        const std::string kde_path = join_path(out_dir, "kde_density.csv");
        write_file(kde_path, kde_csv);
        written.push_back(kde_path);
    }
    return written;
}

}  // namespace phaseprice::cli
