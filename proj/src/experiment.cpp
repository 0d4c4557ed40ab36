#include "motion/experiment.hpp"

#include "motion/errors.hpp"
#include "motion/io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

namespace motion {

using nlohmann::json;

NetworkGraph build_network(const RunConfig &cfg) {
    return assemble_network(tessellate(cfg.field.width, cfg.field.height), cfg.n_per_dir, cfg.output_taus,
                            cfg.network);
}

namespace {

bool periodic(const RunConfig &cfg) {
    return (cfg.kind == TrajectoryKind::circle || cfg.kind == TrajectoryKind::eight) && cfg.frequency > 0.0;
}

json optional_number(const std::optional<double> &v) { return v ? json(quantize(*v)) : json(nullptr); }

} // namespace

TimeGrid analysis_grid(const RunConfig &cfg, double t_end) {
    const FilterParams fp = FilterParams::from_taus(cfg.output_taus);
    TimeGrid g;
    if (cfg.grid_dt) {
        g.dt = *cfg.grid_dt;
    } else if (periodic(cfg)) {
        const double period = 1.0 / cfg.frequency;
        const double per_period = std::max(400.0, std::ceil(10.0 * period / fp.tau1));
        g.dt = period / per_period;
    } else {
        g.dt = std::min(1e-3, fp.tau1 / 10.0);
    }
    g.n = static_cast<std::size_t>(std::floor(t_end / g.dt + 1e-9)) + 1;
    return g;
}

RunResult run_experiment(const RunConfig &cfg) {
    RunResult res;
    res.net = build_network(cfg);
    res.trajectory = build_trajectory(cfg);
    res.t_end = res.trajectory.t_end;
    res.events = generate_events(res.trajectory, cfg.emission);
    res.sim = simulate(res.net, res.events, res.t_end);

    res.grid = analysis_grid(cfg, res.t_end);
    res.filter = FilterParams::from_taus(cfg.output_taus);
    for (Direction d : all_directions) {
        const auto train = pool_group(res.sim.record, res.net, d);
        res.spike_counts[index_of(d)] = train.size();
        res.measured[index_of(d)] = firing_rate(train, res.filter, res.grid);
    }

    const double cut = transient_cutoff(cfg);
    res.window_begin = std::min(res.grid.n, static_cast<std::size_t>(std::ceil(cut / res.grid.dt - 1e-9)));
    const std::size_t n = res.grid.n;
    if (n < res.window_begin + 2) {
        res.notes.push_back("analysis window is empty: run shorter than the transient cut-off");
        return res;
    }
    DirectionalRates meas_w;
    for (std::size_t c = 0; c < 4; ++c) meas_w[c] = res.measured[c].slice(res.window_begin, n);

    try {
        res.f_max = calibrate_fmax(meas_w);
        res.ideal = ideal_rates(res.trajectory, *res.f_max, res.grid);
        DirectionalRates ideal_w;
        for (std::size_t c = 0; c < 4; ++c) ideal_w[c] = res.ideal[c].slice(res.window_begin, n);
        res.score = accuracy(ideal_w, meas_w);
    } catch (const UndefinedResult &e) {
        res.notes.push_back(e.what());
    }

    if (periodic(cfg)) {
        // Spectral measures use the last whole number of periods.
        const double period = 1.0 / cfg.frequency;
        const double span = res.grid.dt * static_cast<double>(n - 1 - res.window_begin);
        const auto periods = static_cast<std::size_t>(std::floor(span / period + 1e-9));
        const auto m = static_cast<std::size_t>(std::llround(static_cast<double>(periods) * period / res.grid.dt));
        if (periods >= 1 && m >= 4 && m <= n) {
            DirectionalRates spec;
            for (std::size_t c = 0; c < 4; ++c) spec[c] = res.measured[c].slice(n - m, n);
            for (std::size_t c = 0; c < 4; ++c) {
                try {
                    res.dominant[c] = dominant_frequency(spec[c]);
                } catch (const UndefinedResult &e) {
                    res.notes.push_back(std::string(to_string(all_directions[c])) + ": " + e.what());
                }
            }
            const std::array<Direction, 5> ring{Direction::right, Direction::down, Direction::left, Direction::up,
                                                Direction::right};
            for (std::size_t i = 0; i < 4; ++i)
                res.lags[i] = phase_lag_deg(spec[index_of(ring[i])], spec[index_of(ring[i + 1])], cfg.frequency);
            const auto &dm = res.dominant;
            if (dm[0] && dm[1] && dm[2] && dm[3])
                res.frequency_ratio = (*dm[index_of(Direction::left)] + *dm[index_of(Direction::right)]) /
                                      (*dm[index_of(Direction::up)] + *dm[index_of(Direction::down)]);
        } else {
            res.notes.push_back("analysis window holds less than one stimulus period");
        }
    }
    return res;
}

json summary_json(const RunConfig &cfg, const RunResult &res) {
    const SimDiagnostics &d = res.sim.diagnostics;
    json counts = json::object(), dom = json::object();
    for (Direction dir : all_directions) {
        counts[std::string(to_string(dir))] = res.spike_counts[index_of(dir)];
        dom[std::string(to_string(dir))] = optional_number(res.dominant[index_of(dir)]);
    }
    const bool has_window = res.grid.n >= res.window_begin + 2;
    return {
        {"config", to_json(cfg)},
        {"duration_s", quantize(res.t_end)},
        {"stimulus_events", res.events.size()},
        {"network",
         {{"input", res.net.n_input},
          {"hidden", res.net.n_hidden},
          {"output", res.net.n_output},
          {"feedforward_synapses", res.net.n_feedforward},
          {"lateral_synapses", res.net.n_lateral}}},
        {"diagnostics",
         {{"dropped_events", d.dropped_events},
          {"duplicate_events", d.duplicate_events},
          {"deliveries", d.deliveries},
          {"input_spikes", d.input_spikes},
          {"hidden_spikes", d.hidden_spikes},
          {"output_spikes", d.output_spikes}}},
        {"spike_counts", counts},
        {"filter", {{"tau1_s", quantize(res.filter.tau1)}, {"tau2_s", quantize(res.filter.tau2)}}},
        {"analysis_window",
         {{"start_s", has_window ? json(quantize(res.grid.at(res.window_begin))) : json(nullptr)},
          {"end_s", quantize(res.grid.at(res.grid.n - 1))},
          {"dt_s", quantize(res.grid.dt)}}},
        {"f_max_hz", optional_number(res.f_max)},
        {"s_acc", res.score ? json(quantize(res.score->raw)) : json(nullptr)},
        {"s_acc_clamped", res.score ? json(quantize(res.score->clamped)) : json(nullptr)},
        {"dominant_frequency_hz", dom},
        {"phase_lag_deg",
         {{"right_to_down", optional_number(res.lags[0])},
          {"down_to_left", optional_number(res.lags[1])},
          {"left_to_up", optional_number(res.lags[2])},
          {"up_to_right", optional_number(res.lags[3])}}},
        {"frequency_ratio", optional_number(res.frequency_ratio)},
        {"notes", res.notes},
    };
}

SweepRow sweep_point(const RunConfig &base, double frequency, const SweepVariant &variant) {
    SweepRow row;
    row.frequency = frequency;
    row.variant = variant.label;
    try {
        RunConfig cfg = base;
        cfg.kind = TrajectoryKind::circle;
        cfg.frequency = frequency;
        cfg.periods = base.sweep.periods;
        cfg.duration.reset();
        cfg.n_per_dir = variant.n_per_dir;
        cfg.output_taus = variant.output_taus;
        const RunResult res = run_experiment(cfg);
        if (!res.score) throw UndefinedResult(res.notes.empty() ? "no score" : res.notes.front());
        row.s_acc = quantize(res.score->clamped);
        row.s_acc_raw = quantize(res.score->raw);
    } catch (const std::exception &e) {
        std::string msg = e.what();
        std::replace_if(msg.begin(), msg.end(), [](char c) { return c == ',' || c == '\n' || c == '\r'; }, ';');
        row.status = "error: " + msg;
        row.s_acc = row.s_acc_raw = NAN;
    }
    return row;
}

void normalize_sweep(std::vector<SweepRow> &rows) {
    std::vector<std::string> labels;
    for (const SweepRow &r : rows)
        if (std::find(labels.begin(), labels.end(), r.variant) == labels.end()) labels.push_back(r.variant);
    for (const std::string &label : labels) {
        double best = 0.0;
        for (const SweepRow &r : rows)
            if (r.variant == label && r.status == "ok" && std::isfinite(r.s_acc)) best = std::max(best, r.s_acc);
        for (SweepRow &r : rows) {
            if (r.variant != label) continue;
            if (r.status != "ok" || !std::isfinite(r.s_acc))
                r.s_acc_norm = NAN;
            else
                r.s_acc_norm = best > 0.0 ? quantize(r.s_acc / best) : 0.0;
        }
    }
}

std::vector<SweepRow> frequency_sweep(const RunConfig &base, const SweepOptions &opts) {
    if (base.sweep.frequencies.empty()) throw ConfigError("sweep needs at least one frequency");
    struct Task {
        double f;
        const SweepVariant *variant;
        std::optional<SweepRow> done;
    };
    std::vector<Task> tasks;
    for (const SweepVariant &v : base.sweep.variants) {
        for (double f : base.sweep.frequencies) {
            Task t{f, &v, std::nullopt};
            for (const SweepRow &r : opts.completed)
                if (r.variant == v.label && format_number(r.frequency) == format_number(f)) t.done = r;
            tasks.push_back(std::move(t));
        }
    }

    std::atomic<std::size_t> next{0};
    std::mutex report;
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            if (tasks[i].done) continue;
            SweepRow row = sweep_point(base, tasks[i].f, *tasks[i].variant);
            std::lock_guard lock(report);
            tasks[i].done = row;
            if (opts.on_row) opts.on_row(row);
        }
    };
    const int jobs = std::max(1, opts.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto &t : pool) t.join();
    }

    std::vector<SweepRow> rows;
    for (Task &t : tasks) {
        SweepRow r = *t.done;
        r.frequency = t.f;
        rows.push_back(std::move(r));
    }
    normalize_sweep(rows);
    return rows;
}

std::string sweep_csv_row(const SweepRow &r) {
    return format_number(r.frequency) + ',' + r.variant + ',' + format_number(r.s_acc) + ',' +
           format_number(r.s_acc_norm) + ',' + format_number(r.s_acc_raw) + ',' + r.status + '\n';
}

std::string sweep_csv(const std::vector<SweepRow> &rows) {
    std::string out = "freq_hz,variant,s_acc,s_acc_norm,s_acc_raw,status\n";
    for (const SweepRow &r : rows) out += sweep_csv_row(r);
    return out;
}

std::vector<SweepRow> parse_sweep_csv(const std::string &text) {
    std::vector<SweepRow> rows;
    // an unterminated last line was cut off mid-write
    const std::string whole = text.substr(0, text.rfind('\n') == std::string::npos ? 0 : text.rfind('\n') + 1);
    std::istringstream in(whole);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first) {
            first = false;
            if (line.rfind("freq_hz,", 0) == 0) continue;
        }
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != 6 || f[5].empty()) continue; // torn or foreign line
        SweepRow r;
        char *end = nullptr;
        r.frequency = std::strtod(f[0].c_str(), &end);
        if (end == f[0].c_str() || !(r.frequency > 0.0)) continue;
        r.variant = f[1];
        r.s_acc = std::strtod(f[2].c_str(), nullptr);
        r.s_acc_norm = std::strtod(f[3].c_str(), nullptr);
        r.s_acc_raw = std::strtod(f[4].c_str(), nullptr);
        r.status = f[5];
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<double> band(const std::vector<SweepRow> &rows, const std::string &variant, double level) {
    std::vector<double> out;
    for (const SweepRow &r : rows)
        if (r.variant == variant && r.status == "ok" && r.s_acc_norm >= level) out.push_back(r.frequency);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace motion
