#include "motion/config.hpp"

#include "motion/analysis.hpp"
#include "motion/errors.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace motion {

using nlohmann::json;

namespace {

void check_keys(const json &obj, const std::string &where, std::initializer_list<const char *> allowed) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!ok.count(it.key())) throw ConfigError("unknown key '" + where + "." + it.key() + "'");
}

double get_number(const json &v, const std::string &where) {
    if (!v.is_number()) throw ConfigError(where + " must be a number");
    double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(where + " must be finite");
    return d;
}

int get_int(const json &v, const std::string &where) {
    if (!v.is_number_integer()) throw ConfigError(where + " must be an integer");
    return v.get<int>();
}

void read_number(const json &obj, const char *key, const std::string &where, double &out) {
    if (obj.contains(key)) out = get_number(obj.at(key), where + "." + key);
}

std::array<double, 2> get_pair(const json &v, const std::string &where) {
    if (!v.is_array() || v.size() != 2) throw ConfigError(where + " must be a two-element array");
    return {get_number(v[0], where + "[0]"), get_number(v[1], where + "[1]")};
}

std::vector<double> get_number_list(const json &v, const std::string &where) {
    if (!v.is_array()) throw ConfigError(where + " must be an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_number(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

// Partial neuron parameters; v_floor follows the threshold unless given.
void read_neuron(const json &obj, const std::string &where, LifParams &p) {
    check_keys(obj, where, {"tau_m_s", "v_th", "v_reset", "v_floor", "t_pw_s", "t_ref_s", "d_out_s"});
    read_number(obj, "tau_m_s", where, p.tau_m);
    read_number(obj, "v_th", where, p.v_th);
    read_number(obj, "v_reset", where, p.v_reset);
    p.v_floor = -2.0 * p.v_th;
    read_number(obj, "v_floor", where, p.v_floor);
    read_number(obj, "t_pw_s", where, p.t_pw);
    read_number(obj, "t_ref_s", where, p.t_ref);
    read_number(obj, "d_out_s", where, p.d_out);
    try {
        p.validate();
    } catch (const ConfigError &e) {
        throw ConfigError(where + ": " + e.what());
    }
}

json neuron_json(const LifParams &p) {
    return {{"tau_m_s", p.tau_m}, {"v_th", p.v_th},     {"v_reset", p.v_reset}, {"v_floor", p.v_floor},
            {"t_pw_s", p.t_pw},   {"t_ref_s", p.t_ref}, {"d_out_s", p.d_out}};
}

std::vector<double> default_taus(int n) {
    if (n == 1) return {0.5};
    return log_spaced(0.005, 0.5, n);
}

void read_taus(const json &obj, const std::string &where, int n, std::vector<double> &taus, bool n_given) {
    if (obj.contains("output_taus_s")) {
        taus = get_number_list(obj.at("output_taus_s"), where + ".output_taus_s");
    } else if (obj.contains("output_tau_range_s")) {
        auto r = get_pair(obj.at("output_tau_range_s"), where + ".output_tau_range_s");
        taus = log_spaced(r[0], r[1], n);
    } else if (n_given) {
        taus = default_taus(n);
    }
    if (taus.size() != static_cast<std::size_t>(n))
        throw ConfigError(where + ": output tau list has " + std::to_string(taus.size()) +
                          " entries but n_per_dir is " + std::to_string(n));
    for (double t : taus)
        if (!(t > 0.0)) throw ConfigError(where + ": output taus must be positive");
}

TrajectoryKind kind_from(const std::string &s) {
    if (s == "circle") return TrajectoryKind::circle;
    if (s == "eight") return TrajectoryKind::eight;
    if (s == "linear") return TrajectoryKind::linear;
    if (s == "waypoints") return TrajectoryKind::waypoints;
    throw ConfigError("unknown trajectory kind '" + s + "'");
}

Emission emission_from(const std::string &s) {
    if (s == "footprint") return Emission::footprint;
    if (s == "onset") return Emission::onset;
    throw ConfigError("unknown emission policy '" + s + "'");
}

std::string get_string(const json &v, const std::string &where) {
    if (!v.is_string()) throw ConfigError(where + " must be a string");
    return v.get<std::string>();
}

} // namespace

std::string OutputPaths::path(const std::string &file) const {
    return (std::filesystem::path(directory) / file).string();
}

std::string to_string(TrajectoryKind k) {
    switch (k) {
    case TrajectoryKind::circle: return "circle";
    case TrajectoryKind::eight: return "eight";
    case TrajectoryKind::linear: return "linear";
    case TrajectoryKind::waypoints: return "waypoints";
    }
    return "?";
}

std::string to_string(Emission e) { return e == Emission::footprint ? "footprint" : "onset"; }

RunConfig default_config() {
    RunConfig cfg;
    cfg.sweep.frequencies = log_spaced(0.05, 5.0, 9);
    cfg.sweep.variants = {{"N1_tau500ms", 1, {0.5}}, {"N5_tau5-500ms", 5, log_spaced(0.005, 0.5, 5)}};
    return cfg;
}

RunConfig config_from_json(const json &doc) {
    RunConfig cfg = default_config();
    check_keys(doc, "config",
               {"schema_version", "field", "trajectory", "stimulus", "network", "analysis", "sweep", "outputs"});
    if (!doc.contains("schema_version")) throw ConfigError("config.schema_version is required");
    cfg.schema_version = get_int(doc.at("schema_version"), "config.schema_version");
    if (cfg.schema_version != config_schema_version)
        throw ConfigError("unsupported schema_version " + std::to_string(cfg.schema_version) + " (expected " +
                          std::to_string(config_schema_version) + ")");

    if (doc.contains("field")) {
        const json &f = doc.at("field");
        check_keys(f, "field", {"width", "height"});
        if (f.contains("width")) cfg.field.width = get_int(f.at("width"), "field.width");
        if (f.contains("height")) cfg.field.height = get_int(f.at("height"), "field.height");
        if (cfg.field.width < 3 || cfg.field.height < 3) throw ConfigError("field must be at least 3x3");
    }

    if (doc.contains("trajectory")) {
        const json &t = doc.at("trajectory");
        const std::string w = "trajectory";
        check_keys(t, w,
                   {"kind", "center", "radius", "amplitude", "frequency_hz", "periods", "duration_s", "start",
                    "velocity", "waypoints"});
        if (t.contains("kind")) cfg.kind = kind_from(get_string(t.at("kind"), w + ".kind"));
        if (t.contains("center")) {
            auto c = get_pair(t.at("center"), w + ".center");
            cfg.cx = c[0];
            cfg.cy = c[1];
        }
        read_number(t, "radius", w, cfg.radius);
        if (t.contains("amplitude")) {
            auto a = get_pair(t.at("amplitude"), w + ".amplitude");
            cfg.ax = a[0];
            cfg.ay = a[1];
        }
        read_number(t, "frequency_hz", w, cfg.frequency);
        if (t.contains("periods")) cfg.periods = get_int(t.at("periods"), w + ".periods");
        if (cfg.periods < 1) throw ConfigError("trajectory.periods must be at least 1");
        if (t.contains("duration_s") && !t.at("duration_s").is_null())
            cfg.duration = get_number(t.at("duration_s"), w + ".duration_s");
        if (t.contains("start")) {
            auto s = get_pair(t.at("start"), w + ".start");
            cfg.x0 = s[0];
            cfg.y0 = s[1];
        }
        if (t.contains("velocity")) {
            auto v = get_pair(t.at("velocity"), w + ".velocity");
            cfg.vx = v[0];
            cfg.vy = v[1];
        }
        if (t.contains("waypoints")) {
            const json &pts = t.at("waypoints");
            if (!pts.is_array()) throw ConfigError("trajectory.waypoints must be an array of [t, x, y]");
            cfg.waypoints.clear();
            for (std::size_t i = 0; i < pts.size(); ++i) {
                auto v = get_number_list(pts[i], w + ".waypoints[" + std::to_string(i) + "]");
                if (v.size() != 3) throw ConfigError("each waypoint must be [t, x, y]");
                cfg.waypoints.push_back({v[0], v[1], v[2]});
            }
        }
        if (cfg.frequency < 0.0) throw ConfigError("trajectory.frequency_hz must be non-negative");
        if (cfg.duration && *cfg.duration < 0.0) throw ConfigError("trajectory.duration_s must be non-negative");
    }

    if (doc.contains("stimulus")) {
        const json &s = doc.at("stimulus");
        check_keys(s, "stimulus", {"emission"});
        if (s.contains("emission")) cfg.emission = emission_from(get_string(s.at("emission"), "stimulus.emission"));
    }

    if (doc.contains("network")) {
        const json &n = doc.at("network");
        const std::string w = "network";
        check_keys(n, w, {"n_per_dir", "output_taus_s", "output_tau_range_s", "lateral_inhibition", "weights",
                          "neurons"});
        bool n_given = n.contains("n_per_dir");
        if (n_given) cfg.n_per_dir = get_int(n.at("n_per_dir"), w + ".n_per_dir");
        if (cfg.n_per_dir < 1) throw ConfigError("network.n_per_dir must be at least 1");
        read_taus(n, w, cfg.n_per_dir, cfg.output_taus, n_given);
        if (n.contains("lateral_inhibition")) {
            if (!n.at("lateral_inhibition").is_boolean())
                throw ConfigError("network.lateral_inhibition must be a boolean");
            cfg.network.lateral_inhibition = n.at("lateral_inhibition").get<bool>();
        }
        if (n.contains("weights")) {
            const json &wt = n.at("weights");
            const std::string ww = w + ".weights";
            check_keys(wt, ww, {"input_hidden", "excitatory", "center", "inhibitory", "lateral"});
            read_number(wt, "input_hidden", ww, cfg.network.w_input_hidden);
            read_number(wt, "excitatory", ww, cfg.network.w_excitatory);
            read_number(wt, "center", ww, cfg.network.w_center);
            read_number(wt, "inhibitory", ww, cfg.network.w_inhibitory);
            read_number(wt, "lateral", ww, cfg.network.w_lateral);
        }
        if (n.contains("neurons")) {
            const json &nn = n.at("neurons");
            const std::string wn = w + ".neurons";
            check_keys(nn, wn, {"excitatory_relay", "inhibitory_relay", "center_relay", "output"});
            if (nn.contains("excitatory_relay"))
                read_neuron(nn.at("excitatory_relay"), wn + ".excitatory_relay", cfg.network.excitatory_relay);
            if (nn.contains("inhibitory_relay"))
                read_neuron(nn.at("inhibitory_relay"), wn + ".inhibitory_relay", cfg.network.inhibitory_relay);
            if (nn.contains("center_relay"))
                read_neuron(nn.at("center_relay"), wn + ".center_relay", cfg.network.center_relay);
            if (nn.contains("output")) read_neuron(nn.at("output"), wn + ".output", cfg.network.output);
        }
        cfg.network.output.tau_m = cfg.output_taus.front();
        cfg.network.validate();
    }

    if (doc.contains("analysis")) {
        const json &a = doc.at("analysis");
        check_keys(a, "analysis", {"grid_dt_s", "window_start_s"});
        if (a.contains("grid_dt_s") && !a.at("grid_dt_s").is_null()) {
            cfg.grid_dt = get_number(a.at("grid_dt_s"), "analysis.grid_dt_s");
            if (!(*cfg.grid_dt > 0.0)) throw ConfigError("analysis.grid_dt_s must be positive");
        }
        if (a.contains("window_start_s") && !a.at("window_start_s").is_null()) {
            cfg.window_start = get_number(a.at("window_start_s"), "analysis.window_start_s");
            if (*cfg.window_start < 0.0) throw ConfigError("analysis.window_start_s must be non-negative");
        }
    }

    if (doc.contains("sweep")) {
        const json &s = doc.at("sweep");
        check_keys(s, "sweep", {"frequencies_hz", "frequency_range_hz", "points", "periods", "variants"});
        if (s.contains("frequencies_hz")) {
            cfg.sweep.frequencies = get_number_list(s.at("frequencies_hz"), "sweep.frequencies_hz");
        } else if (s.contains("frequency_range_hz")) {
            auto r = get_pair(s.at("frequency_range_hz"), "sweep.frequency_range_hz");
            int pts = s.contains("points") ? get_int(s.at("points"), "sweep.points") : 9;
            cfg.sweep.frequencies = log_spaced(r[0], r[1], pts);
        }
        for (double f : cfg.sweep.frequencies)
            if (!(f > 0.0)) throw ConfigError("sweep frequencies must be positive");
        if (s.contains("periods")) cfg.sweep.periods = get_int(s.at("periods"), "sweep.periods");
        if (cfg.sweep.periods < 3) throw ConfigError("sweep.periods must be at least 3");
        if (s.contains("variants")) {
            const json &vs = s.at("variants");
            if (!vs.is_array() || vs.empty()) throw ConfigError("sweep.variants must be a non-empty array");
            cfg.sweep.variants.clear();
            for (std::size_t i = 0; i < vs.size(); ++i) {
                const std::string w = "sweep.variants[" + std::to_string(i) + "]";
                check_keys(vs[i], w, {"label", "n_per_dir", "output_taus_s", "output_tau_range_s"});
                SweepVariant v;
                v.n_per_dir = vs[i].contains("n_per_dir") ? get_int(vs[i].at("n_per_dir"), w + ".n_per_dir") : 1;
                if (v.n_per_dir < 1) throw ConfigError(w + ".n_per_dir must be at least 1");
                v.output_taus = default_taus(v.n_per_dir);
                read_taus(vs[i], w, v.n_per_dir, v.output_taus, true);
                v.label = vs[i].contains("label") ? get_string(vs[i].at("label"), w + ".label")
                                                  : "N" + std::to_string(v.n_per_dir);
                if (v.label.find_first_of(",\"\n\r") != std::string::npos)
                    throw ConfigError(w + ".label must not contain commas, quotes or newlines");
                cfg.sweep.variants.push_back(std::move(v));
            }
        }
    }

    if (doc.contains("outputs")) {
        const json &o = doc.at("outputs");
        check_keys(o, "outputs", {"directory", "events", "spikes", "rates", "summary", "topology", "sweep"});
        auto rd = [&](const char *k, std::string &dst) {
            if (o.contains(k)) dst = get_string(o.at(k), std::string("outputs.") + k);
        };
        rd("directory", cfg.outputs.directory);
        rd("events", cfg.outputs.events);
        rd("spikes", cfg.outputs.spikes);
        rd("rates", cfg.outputs.rates);
        rd("summary", cfg.outputs.summary);
        rd("topology", cfg.outputs.topology);
        rd("sweep", cfg.outputs.sweep);
    }
    return cfg;
}

RunConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error &e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return config_from_json(doc);
}

json to_json(const RunConfig &cfg) {
    json waypoints = json::array();
    for (const Waypoint &w : cfg.waypoints) waypoints.push_back({w.t, w.x, w.y});
    json variants = json::array();
    for (const SweepVariant &v : cfg.sweep.variants)
        variants.push_back({{"label", v.label}, {"n_per_dir", v.n_per_dir}, {"output_taus_s", v.output_taus}});
    return {
        {"schema_version", cfg.schema_version},
        {"field", {{"width", cfg.field.width}, {"height", cfg.field.height}}},
        {"trajectory",
         {{"kind", to_string(cfg.kind)},
          {"center", {cfg.cx, cfg.cy}},
          {"radius", cfg.radius},
          {"amplitude", {cfg.ax, cfg.ay}},
          {"frequency_hz", cfg.frequency},
          {"periods", cfg.periods},
          {"duration_s", cfg.duration ? json(*cfg.duration) : json(nullptr)},
          {"start", {cfg.x0, cfg.y0}},
          {"velocity", {cfg.vx, cfg.vy}},
          {"waypoints", waypoints}}},
        {"stimulus", {{"emission", to_string(cfg.emission)}}},
        {"network",
         {{"n_per_dir", cfg.n_per_dir},
          {"output_taus_s", cfg.output_taus},
          {"lateral_inhibition", cfg.network.lateral_inhibition},
          {"weights",
           {{"input_hidden", cfg.network.w_input_hidden},
            {"excitatory", cfg.network.w_excitatory},
            {"center", cfg.network.w_center},
            {"inhibitory", cfg.network.w_inhibitory},
            {"lateral", cfg.network.w_lateral}}},
          {"neurons",
           {{"excitatory_relay", neuron_json(cfg.network.excitatory_relay)},
            {"inhibitory_relay", neuron_json(cfg.network.inhibitory_relay)},
            {"center_relay", neuron_json(cfg.network.center_relay)},
            {"output", neuron_json(cfg.network.output)}}}}},
        {"analysis",
         {{"grid_dt_s", cfg.grid_dt ? json(*cfg.grid_dt) : json(nullptr)},
          {"window_start_s", cfg.window_start ? json(*cfg.window_start) : json(nullptr)}}},
        {"sweep", {{"frequencies_hz", cfg.sweep.frequencies}, {"periods", cfg.sweep.periods}, {"variants", variants}}},
        {"outputs",
         {{"directory", cfg.outputs.directory},
          {"events", cfg.outputs.events},
          {"spikes", cfg.outputs.spikes},
          {"rates", cfg.outputs.rates},
          {"summary", cfg.outputs.summary},
          {"topology", cfg.outputs.topology},
          {"sweep", cfg.outputs.sweep}}},
    };
}

void apply_override(json &doc, const std::string &assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' must look like key=value");
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error &) {
        value = text;
    }
    json *node = &doc;
    std::stringstream ss(key);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, '.')) parts.push_back(part);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i].empty()) throw ConfigError("override key '" + key + "' has an empty component");
        if (!node->is_object()) *node = json::object();
        node = &(*node)[parts[i]];
    }
    *node = std::move(value);
}

double transient_cutoff(const RunConfig &cfg) {
    if (cfg.window_start) return *cfg.window_start;
    const FilterParams fp = FilterParams::from_taus(cfg.output_taus);
    const bool periodic = (cfg.kind == TrajectoryKind::circle || cfg.kind == TrajectoryKind::eight) && cfg.frequency > 0.0;
    return std::max(2.0 * fp.tau2, periodic ? 1.0 / cfg.frequency : 0.0);
}

double run_duration(const RunConfig &cfg) {
    if (cfg.duration) return *cfg.duration;
    switch (cfg.kind) {
    case TrajectoryKind::circle:
    case TrajectoryKind::eight:
        if (cfg.frequency > 0.0) return transient_cutoff(cfg) + cfg.periods / cfg.frequency;
        return transient_cutoff(cfg);
    case TrajectoryKind::linear: {
        // until the object center reaches the last in-field position
        double t = INFINITY;
        const double lo = footprint_radius, hx = cfg.field.width - 1 - footprint_radius,
                     hy = cfg.field.height - 1 - footprint_radius;
        if (cfg.vx > 0.0) t = std::min(t, (hx - cfg.x0) / cfg.vx);
        if (cfg.vx < 0.0) t = std::min(t, (lo - cfg.x0) / cfg.vx);
        if (cfg.vy > 0.0) t = std::min(t, (hy - cfg.y0) / cfg.vy);
        if (cfg.vy < 0.0) t = std::min(t, (lo - cfg.y0) / cfg.vy);
        if (!std::isfinite(t)) return 0.0;
        return std::max(0.0, t);
    }
    case TrajectoryKind::waypoints: return cfg.waypoints.empty() ? 0.0 : cfg.waypoints.back().t;
    }
    return 0.0;
}

Trajectory build_trajectory(const RunConfig &cfg) {
    const double t_end = run_duration(cfg);
    switch (cfg.kind) {
    case TrajectoryKind::circle: return make_circle(cfg.field, cfg.cx, cfg.cy, cfg.radius, cfg.frequency, t_end);
    case TrajectoryKind::eight: return make_eight(cfg.field, cfg.cx, cfg.cy, cfg.ax, cfg.ay, cfg.frequency, t_end);
    case TrajectoryKind::linear: return make_linear(cfg.field, cfg.x0, cfg.y0, cfg.vx, cfg.vy, t_end);
    case TrajectoryKind::waypoints: return make_waypoints(cfg.field, cfg.waypoints, t_end);
    }
    throw ConfigError("unknown trajectory kind");
}

} // namespace motion
