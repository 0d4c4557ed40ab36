#include "motion/topology.hpp"

#include "motion/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace motion {

std::string_view to_string(Role r) {
    switch (r) {
    case Role::center: return "center";
    case Role::up: return "up";
    case Role::down: return "down";
    case Role::left: return "left";
    case Role::right: return "right";
    }
    return "?";
}

std::string_view to_string(Layer l) {
    switch (l) {
    case Layer::input: return "input";
    case Layer::hidden: return "hidden";
    case Layer::output: return "output";
    }
    return "?";
}

std::string_view to_string(HiddenKind k) {
    switch (k) {
    case HiddenKind::excitatory_relay: return "excitatory_relay";
    case HiddenKind::inhibitory_relay: return "inhibitory_relay";
    case HiddenKind::center_relay: return "center_relay";
    }
    return "?";
}

Role role_of(Direction d) {
    switch (d) {
    case Direction::up: return Role::up;
    case Direction::down: return Role::down;
    case Direction::left: return Role::left;
    case Direction::right: return Role::right;
    }
    return Role::center;
}

std::pair<int, int> role_offset(Role r) {
    switch (r) {
    case Role::center: return {0, 0};
    case Role::up: return {0, 1};
    case Role::down: return {0, -1};
    case Role::left: return {-1, 0};
    case Role::right: return {1, 0};
    }
    return {0, 0};
}

std::size_t CellLayout::covered_pixels() const {
    return static_cast<std::size_t>(std::count_if(owner.begin(), owner.end(), [](int o) { return o >= 0; }));
}

CellLayout tessellate(int field_width, int field_height) {
    CellLayout best;
    best.width = field_width;
    best.height = field_height;
    best.owner.assign(static_cast<std::size_t>(std::max(0, field_width * field_height)), -1);
    if (field_width < 3 || field_height < 3) return best;

    for (int c = 0; c < 5; ++c) {
        std::vector<std::pair<int, int>> centers;
        for (int y = 1; y <= field_height - 2; ++y)
            for (int x = 1; x <= field_width - 2; ++x)
                if ((2 * x + y) % 5 == c) centers.emplace_back(x, y);
        if (centers.size() > best.centers.size()) {
            best.centers = std::move(centers);
            best.lattice_offset = c;
        }
    }
    for (std::size_t i = 0; i < best.centers.size(); ++i) {
        auto [cx, cy] = best.centers[i];
        for (Role r : all_roles) {
            auto [dx, dy] = role_offset(r);
            best.owner[static_cast<std::size_t>((cy + dy) * field_width + cx + dx)] =
                static_cast<int>(i) * 5 + static_cast<int>(r);
        }
    }
    return best;
}

std::optional<PixelOwner> pixel_owner(const CellLayout &layout, int x, int y) {
    if (x < 0 || y < 0 || x >= layout.width || y >= layout.height) return std::nullopt;
    int o = layout.owner[static_cast<std::size_t>(y * layout.width + x)];
    if (o < 0) return std::nullopt;
    return PixelOwner{o / 5, static_cast<Role>(o % 5)};
}

void NetworkParams::validate() const {
    input.validate();
    excitatory_relay.validate();
    inhibitory_relay.validate();
    center_relay.validate();
    output.validate();
    for (double w : {w_input_hidden, w_excitatory, w_center, w_inhibitory, w_lateral})
        if (!std::isfinite(w) || w < 0.0) throw ConfigError("synaptic weights must be finite and non-negative");
}

int hidden_slot(HiddenKind kind, Direction d) {
    switch (kind) {
    case HiddenKind::excitatory_relay: return static_cast<int>(index_of(d));
    case HiddenKind::inhibitory_relay: return 4 + static_cast<int>(index_of(d));
    case HiddenKind::center_relay: return 8;
    }
    return 8;
}

CellSubgraph build_unit_cell(int field_width, int field_height, std::pair<int, int> center,
                             const NetworkParams &params) {
    auto [cx, cy] = center;
    if (cx < 1 || cy < 1 || cx > field_width - 2 || cy > field_height - 2)
        throw DomainError("cell center (" + std::to_string(cx) + "," + std::to_string(cy) +
                          ") needs all four neighbours inside the field");

    CellSubgraph g;
    g.center = center;
    for (Role r : all_roles) {
        NeuronInfo n;
        n.layer = Layer::input;
        n.cell = 0;
        n.role = r;
        n.params = params.input;
        g.neurons.push_back(n);
    }
    g.neurons.resize(inputs_per_cell + hidden_per_cell);
    for (Direction d : all_directions) {
        for (HiddenKind k : {HiddenKind::excitatory_relay, HiddenKind::inhibitory_relay}) {
            NeuronInfo &n = g.neurons[static_cast<std::size_t>(inputs_per_cell + hidden_slot(k, d))];
            n.layer = Layer::hidden;
            n.cell = 0;
            n.role = role_of(d);
            n.kind = k;
            n.direction = d;
            n.params = k == HiddenKind::excitatory_relay ? params.excitatory_relay : params.inhibitory_relay;
        }
    }
    NeuronInfo &hc = g.neurons[inputs_per_cell + 8];
    hc.layer = Layer::hidden;
    hc.cell = 0;
    hc.role = Role::center;
    hc.kind = HiddenKind::center_relay;
    hc.params = params.center_relay;

    auto in_id = [](Role r) { return static_cast<int>(r); };
    for (Direction d : all_directions) {
        for (HiddenKind k : {HiddenKind::excitatory_relay, HiddenKind::inhibitory_relay})
            g.synapses.push_back({in_id(role_of(d)), inputs_per_cell + hidden_slot(k, d),
                                  params.w_input_hidden, Sign::excitatory});
    }
    g.synapses.push_back({in_id(Role::center), inputs_per_cell + 8, params.w_input_hidden, Sign::excitatory});

    // Output d: excited by the relay of the opposite pixel and the center relay,
    // inhibited by the relay of its own pixel.
    for (Direction d : all_directions) {
        g.output_links.push_back(
            {inputs_per_cell + hidden_slot(HiddenKind::excitatory_relay, opposite(d)), d, Sign::excitatory});
        g.output_links.push_back({inputs_per_cell + 8, d, Sign::excitatory});
        g.output_links.push_back(
            {inputs_per_cell + hidden_slot(HiddenKind::inhibitory_relay, d), d, Sign::inhibitory});
    }
    return g;
}

int NetworkGraph::input_id(int cell, Role r) const { return cell * inputs_per_cell + static_cast<int>(r); }

int NetworkGraph::hidden_id(int cell, int slot) const {
    return static_cast<int>(n_input) + cell * hidden_per_cell + slot;
}

int NetworkGraph::output_id(Direction d, int rank) const {
    return static_cast<int>(n_input + n_hidden) + static_cast<int>(index_of(d)) * n_per_dir + rank;
}

int NetworkGraph::input_for_pixel(int x, int y) const {
    if (x < 0 || y < 0 || x >= layout.width || y >= layout.height) return -1;
    return input_of_pixel[static_cast<std::size_t>(y * layout.width + x)];
}

NetworkGraph assemble_network(const CellLayout &layout, int n_per_dir, std::vector<double> output_taus,
                              const NetworkParams &params) {
    if (n_per_dir < 1) throw ConfigError("n_per_dir must be at least 1");
    if (output_taus.size() != static_cast<std::size_t>(n_per_dir))
        throw ConfigError("output tau list has " + std::to_string(output_taus.size()) +
                          " entries but n_per_dir is " + std::to_string(n_per_dir));
    for (double tau : output_taus)
        if (!std::isfinite(tau) || !(tau > 0.0)) throw ConfigError("output taus must be positive");
    params.validate();
    std::stable_sort(output_taus.begin(), output_taus.end());

    NetworkGraph net;
    net.layout = layout;
    net.n_per_dir = n_per_dir;
    net.output_taus = output_taus;
    const int cells = static_cast<int>(layout.cell_count());
    net.n_input = static_cast<std::size_t>(cells * inputs_per_cell);
    net.n_hidden = static_cast<std::size_t>(cells * hidden_per_cell);
    net.n_output = static_cast<std::size_t>(4 * n_per_dir);
    net.neurons.resize(net.n_input + net.n_hidden + net.n_output);
    net.input_of_pixel.assign(layout.owner.size(), -1);

    std::vector<CellSubgraph> subgraphs;
    subgraphs.reserve(static_cast<std::size_t>(cells));
    for (int c = 0; c < cells; ++c) {
        CellSubgraph g = build_unit_cell(layout.width, layout.height, layout.centers[static_cast<std::size_t>(c)],
                                         params);
        for (int local = 0; local < inputs_per_cell + hidden_per_cell; ++local) {
            NeuronInfo n = g.neurons[static_cast<std::size_t>(local)];
            n.cell = c;
            int id = local < inputs_per_cell ? net.input_id(c, static_cast<Role>(local))
                                             : net.hidden_id(c, local - inputs_per_cell);
            net.neurons[static_cast<std::size_t>(id)] = n;
        }
        auto [cx, cy] = g.center;
        for (Role r : all_roles) {
            auto [dx, dy] = role_offset(r);
            net.input_of_pixel[static_cast<std::size_t>((cy + dy) * layout.width + cx + dx)] = net.input_id(c, r);
        }
        subgraphs.push_back(std::move(g));
    }
    for (Direction d : all_directions) {
        for (int k = 0; k < n_per_dir; ++k) {
            NeuronInfo &n = net.neurons[static_cast<std::size_t>(net.output_id(d, k))];
            n.layer = Layer::output;
            n.direction = d;
            n.rank = k;
            n.params = params.output;
            n.params.tau_m = output_taus[static_cast<std::size_t>(k)];
        }
    }

    auto global = [&](int cell, int local) {
        return local < inputs_per_cell ? net.input_id(cell, static_cast<Role>(local))
                                       : net.hidden_id(cell, local - inputs_per_cell);
    };
    for (int c = 0; c < cells; ++c) {
        const CellSubgraph &g = subgraphs[static_cast<std::size_t>(c)];
        for (const Synapse &s : g.synapses)
            net.synapses.push_back({global(c, s.pre), global(c, s.post), s.weight, s.sign});
    }
    for (int c = 0; c < cells; ++c) {
        const CellSubgraph &g = subgraphs[static_cast<std::size_t>(c)];
        for (const auto &link : g.output_links) {
            const NeuronInfo &src = g.neurons[static_cast<std::size_t>(link.hidden)];
            double w = link.sign == Sign::inhibitory                 ? params.w_inhibitory
                       : src.kind == HiddenKind::center_relay ? params.w_center
                                                                     : params.w_excitatory;
            for (int k = 0; k < n_per_dir; ++k)
                net.synapses.push_back({global(c, link.hidden), net.output_id(link.target, k), w, link.sign});
        }
    }
    net.n_feedforward = net.synapses.size();
    if (params.lateral_inhibition) {
        for (Direction d : all_directions)
            for (int k = 0; k < n_per_dir; ++k)
                net.synapses.push_back(
                    {net.output_id(d, k), net.output_id(opposite(d), k), params.w_lateral, Sign::inhibitory});
    }
    net.n_lateral = net.synapses.size() - net.n_feedforward;

    net.outgoing.assign(net.neurons.size(), {});
    for (std::size_t i = 0; i < net.synapses.size(); ++i)
        net.outgoing[static_cast<std::size_t>(net.synapses[i].pre)].push_back(static_cast<int>(i));
    return net;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
    if (n < 1) return {};
    if (n == 1) return {lo};
    if (!(lo > 0.0) || !(hi > 0.0)) throw ConfigError("log spacing needs positive bounds");
    std::vector<double> out(static_cast<std::size_t>(n));
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

} // namespace motion
