#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gsi/config.hpp"
#include "gsi/report.hpp"
#include "gsi/sim.hpp"

namespace {

using gsi::RunConfig;

/// Flag overrides shared by every subcommand; applied on top of defaults
/// and the optional config file, in that order.
struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<double> rho;
    std::optional<double> tau;
    std::optional<std::string> scales;
    std::optional<std::string> noise_preset;
    std::string out_path;
    std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "flat key=value config file");
    cmd->add_option("--seed", o.seed, "RNG seed");
    cmd->add_option("--rho", o.rho, "safety-index kernel exponent");
    cmd->add_option("--tau", o.tau, "smooth-min temperature");
    cmd->add_option("--scales", o.scales, "comma list: gsi,di,kdf,hsf,hsa");
    cmd->add_option("--noise-preset", o.noise_preset, "none | task-robot | observer");
    cmd->add_option("--out", o.out_path, "output file (default stdout)");
    cmd->add_option("--format", o.format, "csv | jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
}

RunConfig build_config(const CommonOpts& o) {
    RunConfig cfg;
    if (!o.config_path.empty()) cfg = gsi::load_config_file(o.config_path, cfg);
    if (o.seed) cfg.apply("seed", std::to_string(*o.seed));
    if (o.rho) cfg.apply("rho", std::to_string(*o.rho));
    if (o.tau) cfg.apply("tau", std::to_string(*o.tau));
    if (o.scales) cfg.apply("scales", *o.scales);
    if (o.noise_preset) cfg.apply("noise_preset", *o.noise_preset);
    cfg.validate();
    return cfg;
}

/// Replays default to the safety parameters recorded in the log header so
/// scenario labels match the generation-time annotations; an explicit
/// config file or --rho/--tau flag takes precedence.
void adopt_log_params(const CommonOpts& o, const gsi::TrackLog& log, RunConfig& cfg) {
    if (!o.config_path.empty() || o.rho || o.tau) return;
    cfg.params = log.header.params;
    cfg.baselines.params = cfg.params;
}

/// Open --out for writing, or hand back stdout.
class OutputSink {
public:
    explicit OutputSink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot write output: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
    bool is_file() const { return file_.is_open(); }

private:
    std::ofstream file_;
};

gsi::WaypointScript load_script(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open script: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error("script " + path + ": " + e.what());
    }
    auto parse_knots = [](const nlohmann::json& arr) {
        std::vector<gsi::Knot> knots;
        for (const auto& k : arr)
            knots.push_back({k.at(0).get<double>(),
                             {k.at(1).get<double>(), k.at(2).get<double>()}});
        return knots;
    };
    gsi::WaypointScript s;
    s.robot_knots = parse_knots(j.at("robot"));
    if (j.contains("robot_heading_deg"))
        s.robot_heading = j["robot_heading_deg"].get<double>() * gsi::kPi / 180.0;
    for (const auto& h : j.at("humans"))
        s.humans.push_back({h.at("id").get<int>(), parse_knots(h.at("knots"))});
    if (j.contains("max_human_speed")) s.max_human_speed = j["max_human_speed"].get<double>();
    return s;
}

int cmd_simulate(const CommonOpts& o, const std::string& experiment,
                 const std::string& script_path, double rate) {
    RunConfig cfg = build_config(o);
    const gsi::NoiseModel noise = gsi::NoiseModel::preset(cfg.noise_preset);
    gsi::TrackLog log;
    if (!script_path.empty()) {
        log = gsi::generate(load_script(script_path), rate, noise, cfg.seed, cfg.params);
        log.header.noise_preset = cfg.noise_preset;
    } else {
        log = gsi::scripted_experiment(experiment, cfg.seed, rate, noise);
        log.header.noise_preset = cfg.noise_preset;
    }
    OutputSink sink(o.out_path);
    gsi::write_tracklog(log, sink.stream());
    if (sink.is_file())
        std::cout << "wrote " << log.frames.size() << " frames to " << o.out_path << "\n";
    return 0;
}

int cmd_evaluate(const CommonOpts& o, const std::string& log_path, bool ground_truth,
                 bool with_gradient, bool summary_only) {
    RunConfig cfg = build_config(o);
    const gsi::TrackLog log = gsi::read_tracklog_file(log_path);
    adopt_log_params(o, log, cfg);
    gsi::ReplayOptions opts;
    opts.use_ground_truth = ground_truth;
    opts.with_gradient = with_gradient;
    opts.estimator = cfg.estimator;
    const gsi::ReplayResult result =
        gsi::replay(log, cfg.params, cfg.scales, cfg.baselines, opts);
    const gsi::ReplaySummary summary = gsi::summarize(result);

    if (!summary_only) {
        OutputSink sink(o.out_path);
        if (o.format == "jsonl")
            gsi::write_evaluate_jsonl(result, cfg, sink.stream());
        else
            gsi::write_evaluate_csv(result, cfg, sink.stream());
        if (sink.is_file()) std::cout << gsi::summary_to_json(summary, cfg) << "\n";
    } else {
        OutputSink sink(o.out_path);
        sink.stream() << gsi::summary_to_json(summary, cfg) << "\n";
    }
    return 0;
}

int cmd_compare(const CommonOpts& o, const std::string& log_path, bool ground_truth,
                const std::string& matrix_path) {
    RunConfig cfg = build_config(o);
    const gsi::TrackLog log = gsi::read_tracklog_file(log_path);
    adopt_log_params(o, log, cfg);
    gsi::ReplayOptions opts;
    opts.use_ground_truth = ground_truth;
    opts.estimator = cfg.estimator;
    const gsi::ReplayResult result =
        gsi::replay(log, cfg.params, cfg.scales, cfg.baselines, opts);

    OutputSink sink(o.out_path);
    gsi::write_compare_csv(result, cfg, sink.stream());

    const gsi::AppropriatenessMatrix matrix =
        gsi::appropriateness_matrix(cfg.scales, cfg.baselines, cfg.bands);
    if (!matrix_path.empty()) {
        std::ofstream mout(matrix_path);
        if (!mout) throw std::runtime_error("cannot write matrix: " + matrix_path);
        gsi::write_matrix_csv(matrix, cfg, mout);
    }
    if (sink.is_file()) std::cout << gsi::matrix_grid(matrix);
    return 0;
}

int cmd_sweep(const CommonOpts& o, const std::string& param, const std::string& grid_str,
              const std::string& values_str) {
    RunConfig cfg = build_config(o);
    auto parse_list = [](const std::string& s, const char* what) {
        std::vector<double> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                out.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw std::invalid_argument(std::string(what) + ": not a number: '" + item + "'");
            }
        }
        return out;
    };
    const std::vector<double> grid = parse_list(grid_str, "--grid");
    OutputSink sink(o.out_path);
    if (param == "rho") {
        gsi::write_rho_sweep_csv(grid, cfg.params, cfg, sink.stream());
    } else {
        const std::vector<double> values =
            values_str.empty() ? std::vector<double>{0.7, 0.9, 0.4}
                               : parse_list(values_str, "--values");
        gsi::write_tau_sweep_csv(grid, values, cfg, sink.stream());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-human safety-index engine"};
    app.require_subcommand(1);

    CommonOpts sim_o, eval_o, cmp_o, sweep_o;

    auto* sim = app.add_subcommand("simulate", "generate a track log");
    std::string experiment = "approach-retreat";
    std::string script_path;
    double rate = 30.0;
    sim->add_option("experiment", experiment,
                    "approach-retreat | two-approach | cross | random");
    sim->add_option("--script", script_path, "custom waypoint script (JSON)");
    sim->add_option("--rate", rate, "sample rate, Hz");
    add_common(sim, sim_o);

    auto* eval = app.add_subcommand("evaluate", "replay a log through the safety index");
    std::string eval_log;
    bool eval_gt = false, eval_grad = false, eval_summary = false;
    eval->add_option("log", eval_log, "track log file")->required();
    eval->add_flag("--ground-truth", eval_gt, "bypass the estimator");
    eval->add_flag("--gradient", eval_grad, "emit the collective-index gradient");
    eval->add_flag("--summary", eval_summary, "emit only the summary block");
    add_common(eval, eval_o);

    auto* cmp = app.add_subcommand("compare", "run all scales plus the scenario matrix");
    std::string cmp_log, matrix_path;
    bool cmp_gt = false;
    cmp->add_option("log", cmp_log, "track log file")->required();
    cmp->add_flag("--ground-truth", cmp_gt, "bypass the estimator");
    cmp->add_option("--matrix-out", matrix_path, "scenario-appropriateness matrix CSV");
    add_common(cmp, cmp_o);

    auto* sweep = app.add_subcommand("sweep", "hyperparameter sweep curves");
    std::string sweep_param, sweep_grid, sweep_values;
    sweep->add_option("parameter", sweep_param, "rho | tau")
        ->required()
        ->check(CLI::IsMember({"rho", "tau"}));
    sweep->add_option("--grid", sweep_grid, "comma list of parameter values")->required();
    sweep->add_option("--values", sweep_values,
                      "individual safety values for the tau sweep (comma list)");
    add_common(sweep, sweep_o);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(sim_o, experiment, script_path, rate);
        if (eval->parsed())
            return cmd_evaluate(eval_o, eval_log, eval_gt, eval_grad, eval_summary);
        if (cmp->parsed()) return cmd_compare(cmp_o, cmp_log, cmp_gt, matrix_path);
        if (sweep->parsed()) return cmd_sweep(sweep_o, sweep_param, sweep_grid, sweep_values);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
