#pragma once

#include "motion/topology.hpp"
#include "motion/types.hpp"

#include <cstddef>

namespace motion {

// v * exp(-dt / tau_m), clamped to v_floor. Throws NumericFault for dt < 0.
double decay(double v, double dt, double tau_m, double v_floor);

struct NeuronState {
    double v = 0.0;
    double t_last = 0.0;
    double refractory_until = 0.0;
};

struct SimDiagnostics {
    std::size_t stimulus_events = 0;
    std::size_t dropped_events = 0;   // pixel not covered by any cell
    std::size_t duplicate_events = 0; // same pixel at the same instant
    std::size_t deliveries = 0;
    std::size_t input_spikes = 0;
    std::size_t hidden_spikes = 0;
    std::size_t output_spikes = 0;
};

struct SimResult {
    SpikeRecord record;
    SimDiagnostics diagnostics;
};

// Event-driven simulation over [0, t_end); nothing at or after t_end is kept. Input neurons relay stimulus
// events unchanged; every other neuron is a leaky integrator with delta
// synapses and a threshold check after each batch of simultaneous inputs.
SimResult simulate(const NetworkGraph &net, const EventStream &stim, double t_end);

} // namespace motion
