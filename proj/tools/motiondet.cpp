// Command-line front end: topology export, event generation, single runs and
// frequency sweeps. Precedence: built-in defaults < config file < --set < flags.

#include "motion/config.hpp"
#include "motion/errors.hpp"
#include "motion/experiment.hpp"
#include "motion/io.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace motion;
using nlohmann::json;

namespace {

constexpr const char *config_env = "MOTIONDET_CONFIG";

struct CommonOptions {
    std::string config_path;
    std::vector<std::string> sets;
    std::optional<std::string> out_dir;
    std::optional<std::string> kind;
    std::optional<double> frequency;
    std::optional<int> n_per_dir;
    std::optional<std::string> emission;
    std::optional<double> duration;
};

void add_common(CLI::App *cmd, CommonOptions &o) {
    cmd->add_option("-c,--config", o.config_path,
                    std::string("JSON config file (default: $") + config_env + ")");
    cmd->add_option("--set", o.sets, "override one config key, e.g. network.weights.lateral=0")->take_all();
    cmd->add_option("-o,--out", o.out_dir, "output directory");
    cmd->add_option("--kind", o.kind, "trajectory kind: circle, eight, linear, waypoints");
    cmd->add_option("--freq", o.frequency, "trajectory frequency in Hz");
    cmd->add_option("--n-per-dir", o.n_per_dir, "output neurons per direction");
    cmd->add_option("--emission", o.emission, "footprint or onset");
    cmd->add_option("--duration", o.duration, "run duration in seconds");
}

RunConfig resolve(const CommonOptions &o) {
    std::string path = o.config_path;
    if (path.empty()) {
        if (const char *env = std::getenv(config_env)) path = env;
    }
    json doc = {{"schema_version", config_schema_version}};
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file '" + path + "'");
        try {
            doc = json::parse(in);
        } catch (const json::parse_error &e) {
            throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
        }
    }
    for (const std::string &s : o.sets) apply_override(doc, s);
    if (o.out_dir) doc["outputs"]["directory"] = *o.out_dir;
    if (o.kind) doc["trajectory"]["kind"] = *o.kind;
    if (o.frequency) doc["trajectory"]["frequency_hz"] = *o.frequency;
    if (o.n_per_dir) {
        doc["network"]["n_per_dir"] = *o.n_per_dir;
        if (!doc["network"].contains("output_tau_range_s")) doc["network"].erase("output_taus_s");
    }
    if (o.emission) doc["stimulus"]["emission"] = *o.emission;
    if (o.duration) doc["trajectory"]["duration_s"] = *o.duration;
    return config_from_json(doc);
}

std::string to_text(const json &j) { return j.dump(2) + "\n"; }

int cmd_topo(const RunConfig &cfg, bool to_stdout) {
    const NetworkGraph net = build_network(cfg);
    const std::string text = to_text(topology_json(net));
    if (to_stdout) {
        std::cout << text;
    } else {
        write_file(cfg.outputs.path(cfg.outputs.topology), text);
        std::cout << cfg.outputs.path(cfg.outputs.topology) << '\n';
    }
    return exit_ok;
}

int cmd_events(const RunConfig &cfg, bool to_stdout) {
    const Trajectory traj = build_trajectory(cfg);
    const EventStream events = generate_events(traj, cfg.emission);
    std::ostringstream out;
    write_events_csv(out, events);
    if (to_stdout) {
        std::cout << out.str();
    } else {
        write_file(cfg.outputs.path(cfg.outputs.events), out.str());
        std::cout << cfg.outputs.path(cfg.outputs.events) << '\n';
    }
    return exit_ok;
}

int cmd_run(const RunConfig &cfg) {
    const RunResult res = run_experiment(cfg);
    std::ostringstream spikes, rates;
    write_spikes_csv(spikes, res.sim.record);
    write_rates_csv(rates, res.measured, res.ideal);
    const OutputPaths &p = cfg.outputs;
    write_file(p.path(p.spikes), spikes.str());
    write_file(p.path(p.rates), rates.str());
    write_file(p.path(p.summary), to_text(summary_json(cfg, res)));
    std::cout << p.path(p.spikes) << '\n' << p.path(p.rates) << '\n' << p.path(p.summary) << '\n';
    std::cerr << "s_acc=" << (res.score ? format_number(res.score->raw) : "undefined")
              << " output_spikes=" << res.sim.diagnostics.output_spikes << '\n';
    return exit_ok;
}

int cmd_sweep(const RunConfig &cfg, bool resume, int jobs) {
    const std::string path = cfg.outputs.path(cfg.outputs.sweep);
    SweepOptions opts;
    opts.jobs = jobs;
    if (resume && std::filesystem::exists(path)) {
        std::ifstream in(path, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        opts.completed = parse_sweep_csv(ss.str());
    }
    // Progress file: completed rows are appended as they finish so an
    // interrupted sweep can resume; the final write replaces it in order.
    std::string progress = "freq_hz,variant,s_acc,s_acc_norm,s_acc_raw,status\n";
    for (const SweepRow &r : opts.completed) progress += sweep_csv_row(r);
    write_file(path, progress);
    std::ofstream log(path, std::ios::app | std::ios::binary);
    opts.on_row = [&](const SweepRow &r) {
        log << sweep_csv_row(r) << std::flush;
        std::cerr << format_number(r.frequency) << " Hz " << r.variant << ": " << r.status << '\n';
    };
    std::vector<SweepRow> rows = frequency_sweep(cfg, opts);
    log.close();
    write_file(path, sweep_csv(rows));
    std::cout << path << '\n';
    return exit_ok;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Event-driven delay-and-correlate motion detection network"};
    app.require_subcommand(1);

    CommonOptions topo_o, events_o, run_o, sweep_o;
    bool topo_stdout = false, events_stdout = false, resume = false;
    int jobs = 1;

    auto *topo = app.add_subcommand("topo", "export the network graph as JSON");
    add_common(topo, topo_o);
    topo->add_flag("--stdout", topo_stdout, "print instead of writing a file");

    auto *events = app.add_subcommand("events", "write the stimulus event stream as CSV");
    add_common(events, events_o);
    events->add_flag("--stdout", events_stdout, "print instead of writing a file");

    auto *run = app.add_subcommand("run", "simulate and write spikes, rates and a summary");
    add_common(run, run_o);

    auto *sweep = app.add_subcommand("sweep", "score the circular stimulus over a frequency list");
    add_common(sweep, sweep_o);
    sweep->add_flag("--resume", resume, "keep rows already present in the sweep CSV");
    sweep->add_option("-j,--jobs", jobs, "parallel runs")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        if (*topo) return cmd_topo(resolve(topo_o), topo_stdout);
        if (*events) return cmd_events(resolve(events_o), events_stdout);
        if (*run) return cmd_run(resolve(run_o));
        if (*sweep) return cmd_sweep(resolve(sweep_o), resume, jobs);
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const DomainError &e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return exit_domain;
    } catch (const UndefinedResult &e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return exit_domain;
    } catch (const NumericFault &e) {
        std::cerr << "numeric fault: " << e.what() << '\n';
        return exit_numeric;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failure;
    }
    return exit_failure;
}
