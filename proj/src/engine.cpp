#include "motion/engine.hpp"

#include "motion/errors.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

namespace motion {

double decay(double v, double dt, double tau_m, double v_floor) {
    if (dt < 0.0 || !std::isfinite(dt)) throw NumericFault("membrane clock moved backwards");
    if (!(tau_m > 0.0)) throw NumericFault("non-positive membrane time constant");
    return std::max(v * std::exp(-dt / tau_m), v_floor);
}

namespace {

struct Delivery {
    double t;
    int pre;
    int post;
    double w;
};

struct Later {
    bool operator()(const Delivery &a, const Delivery &b) const {
        if (a.t != b.t) return a.t > b.t;
        if (a.pre != b.pre) return a.pre > b.pre;
        return a.post > b.post;
    }
};

using Queue = std::priority_queue<Delivery, std::vector<Delivery>, Later>;

void fault(const std::string &what, int neuron, double t) {
    throw NumericFault(what + " at neuron " + std::to_string(neuron) + ", t=" + std::to_string(t) + " s");
}

} // namespace

SimResult simulate(const NetworkGraph &net, const EventStream &stim, double t_end) {
    if (!std::isfinite(t_end) || t_end < 0.0) throw ConfigError("t_end must be finite and non-negative");
    const std::size_t n = net.neurons.size();
    SimResult res;
    res.record = SpikeRecord(n);
    SimDiagnostics &diag = res.diagnostics;
    diag.stimulus_events = stim.size();

    std::vector<NeuronState> state(n);
    Queue queue;

    auto emit = [&](int id, double t) {
        res.record.trains[static_cast<std::size_t>(id)].push_back(t);
        switch (net.neurons[static_cast<std::size_t>(id)].layer) {
        case Layer::input: ++diag.input_spikes; break;
        case Layer::hidden: ++diag.hidden_spikes; break;
        case Layer::output: ++diag.output_spikes; break;
        }
        for (int s : net.outgoing[static_cast<std::size_t>(id)]) {
            const Synapse &syn = net.synapses[static_cast<std::size_t>(s)];
            queue.push({t, id, syn.post, syn.signed_weight()});
        }
    };

    // Stimulus events become input spikes directly.
    for (const Event &e : stim.events()) {
        if (e.t >= t_end) break;
        const int id = net.input_for_pixel(e.x, e.y);
        if (id < 0) {
            ++diag.dropped_events;
            continue;
        }
        auto &train = res.record.trains[static_cast<std::size_t>(id)];
        if (!train.empty() && train.back() == e.t) {
            ++diag.duplicate_events;
            continue;
        }
        emit(id, e.t);
    }

    std::vector<std::pair<int, double>> batch;
    while (!queue.empty()) {
        const double now = queue.top().t;
        if (now >= t_end) break;
        batch.clear();
        while (!queue.empty() && queue.top().t == now) {
            const Delivery d = queue.top();
            queue.pop();
            batch.emplace_back(d.post, d.w);
        }
        diag.deliveries += batch.size();
        std::stable_sort(batch.begin(), batch.end(),
                         [](const auto &a, const auto &b) { return a.first < b.first; });

        for (std::size_t i = 0; i < batch.size();) {
            const int post = batch[i].first;
            double sum = 0.0;
            for (; i < batch.size() && batch[i].first == post; ++i) sum += batch[i].second;

            const auto idx = static_cast<std::size_t>(post);
            const LifParams &p = net.neurons[idx].params;
            NeuronState &s = state[idx];
            if (net.neurons[idx].layer == Layer::input) continue;

            double v = decay(s.v, now - s.t_last, p.tau_m, p.v_floor);
            v = std::max(v + sum, p.v_floor);
            if (!std::isfinite(v)) fault("non-finite membrane potential", post, now);
            s.t_last = now;
            if (v >= p.v_th && now >= s.refractory_until) {
                v = p.v_reset;
                s.refractory_until = now + p.t_ref;
                const double ts = now + p.d_out;
                if (ts < t_end) emit(post, ts);
            }
            s.v = v;
        }
    }
    return res;
}

} // namespace motion
