#include "motion/io.hpp"

#include "motion/errors.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace motion {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0"; // also folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

double quantize(double v) {
    if (!std::isfinite(v)) return v;
    return std::strtod(format_number(v).c_str(), nullptr);
}

void write_events_csv(std::ostream &out, const EventStream &events) {
    out << "x,y,t_s\n";
    for (const Event &e : events.events()) out << e.x << ',' << e.y << ',' << format_number(e.t) << '\n';
}

EventStream read_events_csv(std::istream &in, int field_width, int field_height) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,y,t_s", 0) != 0)
        throw ConfigError("event file must start with the header x,y,t_s");
    std::vector<Event> events;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        Event e;
        char c1 = 0, c2 = 0;
        std::istringstream ss(line);
        if (!(ss >> e.x >> c1 >> e.y >> c2 >> e.t) || c1 != ',' || c2 != ',')
            throw ConfigError("malformed event at row " + std::to_string(row));
        events.push_back(e);
    }
    return EventStream::from_sorted(field_width, field_height, std::move(events));
}

void write_spikes_csv(std::ostream &out, const SpikeRecord &record) {
    struct Row {
        double t;
        std::size_t id;
    };
    std::vector<Row> rows;
    rows.reserve(record.total());
    for (std::size_t i = 0; i < record.trains.size(); ++i)
        for (double t : record.trains[i]) rows.push_back({t, i});
    std::stable_sort(rows.begin(), rows.end(), [](const Row &a, const Row &b) {
        if (a.t != b.t) return a.t < b.t;
        return a.id < b.id;
    });
    out << "neuron_id,t_s\n";
    for (const Row &r : rows) out << r.id << ',' << format_number(r.t) << '\n';
}

void write_rates_csv(std::ostream &out, const DirectionalRates &measured, const DirectionalRates &ideal) {
    out << "t_s,up_hz,down_hz,left_hz,right_hz,up_ideal_hz,down_ideal_hz,left_ideal_hz,right_ideal_hz\n";
    const std::size_t n = measured[0].size();
    for (std::size_t k = 0; k < n; ++k) {
        out << format_number(measured[0].time(k));
        for (const RateSeries &s : measured) out << ',' << format_number(s.values[k]);
        for (const RateSeries &s : ideal) out << ',' << (k < s.size() ? format_number(s.values[k]) : "nan");
        out << '\n';
    }
}

nlohmann::json topology_json(const NetworkGraph &net) {
    using nlohmann::json;
    json neurons = json::array();
    for (std::size_t i = 0; i < net.neurons.size(); ++i) {
        const NeuronInfo &n = net.neurons[i];
        json j{{"id", i}, {"layer", to_string(n.layer)}};
        switch (n.layer) {
        case Layer::input:
            j["cell"] = n.cell;
            j["role"] = to_string(n.role);
            break;
        case Layer::hidden:
            j["cell"] = n.cell;
            j["kind"] = to_string(n.kind);
            j["role"] = to_string(n.role);
            break;
        case Layer::output:
            j["direction"] = to_string(n.direction);
            j["rank"] = n.rank;
            break;
        }
        if (n.layer != Layer::input) {
            const LifParams &p = n.params;
            j["params"] = {{"tau_m_s", p.tau_m}, {"v_th", p.v_th},     {"v_reset", p.v_reset}, {"v_floor", p.v_floor},
                           {"t_pw_s", p.t_pw},   {"t_ref_s", p.t_ref}, {"d_out_s", p.d_out}};
        }
        neurons.push_back(std::move(j));
    }
    json synapses = json::array();
    for (std::size_t i = 0; i < net.synapses.size(); ++i) {
        const Synapse &s = net.synapses[i];
        synapses.push_back({{"pre", s.pre},
                            {"post", s.post},
                            {"weight", s.weight},
                            {"sign", s.sign == Sign::excitatory ? "excitatory" : "inhibitory"},
                            {"lateral", i >= net.n_feedforward}});
    }
    json cells = json::array();
    for (auto [x, y] : net.layout.centers) cells.push_back({x, y});
    return {{"field", {{"width", net.layout.width}, {"height", net.layout.height}}},
            {"coordinates", "x grows rightward, y grows upward"},
            {"lattice_offset", net.layout.lattice_offset},
            {"cell_centers", cells},
            {"counts",
             {{"input", net.n_input},
              {"hidden", net.n_hidden},
              {"output", net.n_output},
              {"feedforward_synapses", net.n_feedforward},
              {"lateral_synapses", net.n_lateral}}},
            {"n_per_dir", net.n_per_dir},
            {"output_taus_s", net.output_taus},
            {"neurons", neurons},
            {"synapses", synapses}};
}

void write_file(const std::string &path, const std::string &text) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw Error("failed writing '" + path + "'");
}

} // namespace motion
