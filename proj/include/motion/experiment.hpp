#pragma once

#include "motion/analysis.hpp"
#include "motion/config.hpp"
#include "motion/engine.hpp"
#include "motion/stimulus.hpp"
#include "motion/topology.hpp"

#include "json.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace motion {

NetworkGraph build_network(const RunConfig &cfg);

// Rate grid covering [0, t_end]: about 400 samples per stimulus period and
// at least 10 per tau1, unless the configuration fixes dt.
TimeGrid analysis_grid(const RunConfig &cfg, double t_end);

struct RunResult {
    NetworkGraph net;
    Trajectory trajectory;
    EventStream events;
    SimResult sim;
    double t_end = 0.0;
    TimeGrid grid;
    FilterParams filter;
    std::size_t window_begin = 0;
    DirectionalRates measured;
    DirectionalRates ideal; // empty series when f_max cannot be calibrated

    std::array<std::size_t, 4> spike_counts{};
    std::optional<double> f_max;
    std::optional<Score> score;
    std::array<std::optional<double>, 4> dominant{};
    // right->down, down->left, left->up, up->right
    std::array<std::optional<double>, 4> lags{};
    std::optional<double> frequency_ratio; // horizontal / vertical dominant frequency
    std::vector<std::string> notes;
};

RunResult run_experiment(const RunConfig &cfg);

nlohmann::json summary_json(const RunConfig &cfg, const RunResult &res);

struct SweepRow {
    double frequency = 0.0;
    std::string variant;
    double s_acc = NAN; // clamped at 0
    double s_acc_raw = NAN;
    double s_acc_norm = NAN;
    std::string status = "ok";
};

// Scores one (frequency, variant) point with the circular stimulus.
SweepRow sweep_point(const RunConfig &base, double frequency, const SweepVariant &variant);

// Fills s_acc_norm per variant from the rows' (quantized) scores.
void normalize_sweep(std::vector<SweepRow> &rows);

struct SweepOptions {
    int jobs = 1;
    std::vector<SweepRow> completed;              // rows to keep instead of recomputing
    std::function<void(const SweepRow &)> on_row; // called once per computed row
};

// Rows ordered by variant (config order) then frequency (config order).
std::vector<SweepRow> frequency_sweep(const RunConfig &base, const SweepOptions &opts = {});

std::string sweep_csv(const std::vector<SweepRow> &rows);
std::string sweep_csv_row(const SweepRow &row);
std::vector<SweepRow> parse_sweep_csv(const std::string &text);

// Frequencies whose normalized score reaches `level`, per variant.
std::vector<double> band(const std::vector<SweepRow> &rows, const std::string &variant, double level);

} // namespace motion
