#pragma once

#include "motion/stimulus.hpp"
#include "motion/topology.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace motion {

inline constexpr int config_schema_version = 1;

struct SweepVariant {
    std::string label;
    int n_per_dir = 1;
    std::vector<double> output_taus;
};

struct SweepSpec {
    std::vector<double> frequencies; // Hz
    int periods = 3;                 // analyzed periods per run
    std::vector<SweepVariant> variants;
};

struct OutputPaths {
    std::string directory = ".";
    std::string events = "events.csv";
    std::string spikes = "spikes.csv";
    std::string rates = "rates.csv";
    std::string summary = "summary.json";
    std::string topology = "topology.json";
    std::string sweep = "sweep.csv";

    std::string path(const std::string &file) const;
};

// Fully resolved run configuration; every field holds a concrete value.
struct RunConfig {
    int schema_version = config_schema_version;
    Field field;

    TrajectoryKind kind = TrajectoryKind::circle;
    double cx = 4.5, cy = 5.0;
    double radius = 3.0;
    double ax = 3.0, ay = 3.0;
    double frequency = 0.5;
    double x0 = 1.0, y0 = 5.0, vx = 9.42477796076938, vy = 0.0;
    std::vector<Waypoint> waypoints;
    int periods = 4;                // analyzed periods when duration is derived
    std::optional<double> duration; // explicit t_end overrides the derived one

    Emission emission = Emission::footprint;

    int n_per_dir = 1;
    std::vector<double> output_taus{0.5};
    NetworkParams network;

    std::optional<double> grid_dt;
    std::optional<double> window_start;

    SweepSpec sweep;
    OutputPaths outputs;
};

RunConfig default_config();

// Overlays a JSON document onto the defaults. Unknown keys, wrong types and
// an unsupported schema version raise ConfigError.
RunConfig config_from_json(const nlohmann::json &doc);
RunConfig load_config(const std::string &path);

// Resolved configuration as JSON (round-trips through config_from_json).
nlohmann::json to_json(const RunConfig &cfg);

// Sets one dotted key, e.g. "network.weights.lateral=0". The value is parsed
// as JSON when possible and taken as a string otherwise.
void apply_override(nlohmann::json &doc, const std::string &assignment);

std::string to_string(TrajectoryKind k);
std::string to_string(Emission e);

// Durations and grids derived from the configuration.
double transient_cutoff(const RunConfig &cfg);
double run_duration(const RunConfig &cfg);
Trajectory build_trajectory(const RunConfig &cfg);

} // namespace motion
