#include "reference_engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

namespace motion::testing {

SpikeRecord fixed_step_simulate(const NetworkGraph &net, const EventStream &stim, double t_end, double dt) {
    const std::size_t n = net.neurons.size();
    const long long steps = static_cast<long long>(std::ceil(t_end / dt - 1e-9));
    SpikeRecord rec(n);
    std::map<long long, std::vector<std::pair<int, double>>> pending;

    auto fire = [&](int id, long long k) {
        rec.trains[static_cast<std::size_t>(id)].push_back(static_cast<double>(k) * dt);
        for (int s : net.outgoing[static_cast<std::size_t>(id)]) {
            const Synapse &syn = net.synapses[static_cast<std::size_t>(s)];
            pending[k].emplace_back(syn.post, syn.signed_weight());
        }
    };
    for (const Event &e : stim.events()) {
        const long long k = std::llround(e.t / dt);
        if (k >= steps) continue;
        const int id = net.input_for_pixel(e.x, e.y);
        if (id < 0) continue;
        auto &tr = rec.trains[static_cast<std::size_t>(id)];
        if (!tr.empty() && std::llround(tr.back() / dt) == k) continue;
        fire(id, k);
    }

    std::vector<double> v(n, 0.0), decay_factor(n);
    std::vector<long long> ref_until(n, 0);
    for (std::size_t i = 0; i < n; ++i) decay_factor[i] = std::exp(-dt / net.neurons[i].params.tau_m);
    std::vector<double> input(n, 0.0);
    std::vector<char> touched(n, 0);

    for (long long k = 0; k < steps; ++k) {
        for (std::size_t i = 0; i < n; ++i)
            v[i] = std::max(v[i] * decay_factor[i], net.neurons[i].params.v_floor);
        auto it = pending.find(k);
        if (it == pending.end()) continue;
        std::vector<std::pair<int, double>> batch = std::move(it->second);
        pending.erase(it);
        std::fill(input.begin(), input.end(), 0.0);
        std::fill(touched.begin(), touched.end(), 0);
        for (auto [post, w] : batch) {
            input[static_cast<std::size_t>(post)] += w;
            touched[static_cast<std::size_t>(post)] = 1;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!touched[i] || net.neurons[i].layer == Layer::input) continue;
            const LifParams &p = net.neurons[i].params;
            v[i] = std::max(v[i] + input[i], p.v_floor);
            if (v[i] >= p.v_th && k >= ref_until[i]) {
                v[i] = p.v_reset;
                ref_until[i] = k + std::llround(p.t_ref / dt);
                const long long ks = k + std::llround(p.d_out / dt);
                if (ks < steps) fire(static_cast<int>(i), ks);
            }
        }
    }
    return rec;
}

} // namespace motion::testing

namespace motion::testing {

RandomInstance random_cell_instance(std::mt19937_64 &rng) {
    auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    const double us = 1e-6;

    const double t_ref = (10.0 * pick(1, 50) + 3.0) * us;
    const double d_hidden = pick(1, 300) * us;
    const double d_output = (10.0 * pick(0, 30) + 1.0) * us;
    auto neuron = [&](double tau, double v_th, double d_out) {
        LifParams p = LifParams::make(tau, v_th);
        p.t_ref = t_ref;
        p.t_pw = std::min(t_ref, 100 * us);
        p.d_out = d_out;
        return p;
    };

    NetworkParams np;
    np.excitatory_relay = neuron(uni(1e-3, 50e-3), uni(0.3, 1.2), d_hidden);
    np.inhibitory_relay = neuron(uni(1e-3, 50e-3), uni(0.3, 1.2), d_hidden);
    np.center_relay = neuron(uni(0.5e-3, 10e-3), uni(0.3, 1.2), d_hidden);
    np.output = neuron(0.5, uni(0.8, 2.5), d_output);
    np.w_input_hidden = uni(0.3, 1.5);
    np.w_excitatory = uni(0.2, 1.5);
    np.w_center = uni(0.2, 1.5);
    np.w_inhibitory = uni(0.2, 1.5);
    np.w_lateral = uni(0.2, 1.5);
    np.lateral_inhibition = pick(0, 3) != 0;

    RandomInstance inst;
    inst.net = assemble_network(tessellate(3, 3), 1, {uni(5e-3, 0.5)}, np);
    std::vector<Event> events;
    const int count = pick(40, 200);
    for (int i = 0; i < count; ++i) events.push_back({pick(0, 2), pick(0, 2), 10.0 * pick(0, 4999) * us});
    inst.stim = EventStream(3, 3, std::move(events));
    inst.t_end = 60e-3;
    return inst;
}

bool spikes_match(const SpikeRecord &a, const SpikeRecord &b, double tol, std::string *why) {
    if (a.neuron_count() != b.neuron_count()) {
        if (why) *why = "neuron count differs";
        return false;
    }
    for (std::size_t i = 0; i < a.neuron_count(); ++i) {
        if (a.trains[i].size() != b.trains[i].size()) {
            if (why)
                *why = "neuron " + std::to_string(i) + ": " + std::to_string(a.trains[i].size()) + " vs " +
                       std::to_string(b.trains[i].size()) + " spikes";
            return false;
        }
        for (std::size_t k = 0; k < a.trains[i].size(); ++k) {
            if (std::abs(a.trains[i][k] - b.trains[i][k]) > tol) {
                if (why) *why = "neuron " + std::to_string(i) + " spike " + std::to_string(k) + " time differs";
                return false;
            }
        }
    }
    return true;
}

} // namespace motion::testing
