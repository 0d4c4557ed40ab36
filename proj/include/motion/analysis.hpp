#pragma once

#include "motion/stimulus.hpp"
#include "motion/topology.hpp"
#include "motion/types.hpp"

#include <cstddef>
#include <vector>

namespace motion {

// Difference-of-exponentials smoothing kernel with unit area.
struct FilterParams {
    double tau1 = 0.5;
    double tau2 = 1.0;
    double lambda = -2.0;

    // tau1 = mean of the output time constants, tau2 = 2 * tau1.
    static FilterParams from_taus(const std::vector<double> &output_taus);
    static FilterParams from_tau1(double tau1);

    double kernel(double t) const; // 0 for t <= 0
    double peak_time() const;
};

struct TimeGrid {
    double t0 = 0.0;
    double dt = 1e-3;
    std::size_t n = 0;

    double at(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
};

// Sorted union of the spike trains of one output group.
std::vector<double> pool_group(const SpikeRecord &record, const NetworkGraph &net, Direction d);

RateSeries firing_rate(const std::vector<double> &train, const FilterParams &fp, const TimeGrid &grid);

// Target rates (f_max / 2) * |v / v_max + 1| per channel, in Direction order.
DirectionalRates ideal_rates(const Trajectory &traj, double f_max, const TimeGrid &grid);

struct Score {
    double raw = 0.0;
    double clamped = 0.0;
};

// Mean over the four channels of 1 - |ideal - measured|^2 / |ideal|^2.
Score accuracy(const DirectionalRates &ideal, const DirectionalRates &measured);

// Peak measured rate over all channels; throws UndefinedResult when all are zero.
double calibrate_fmax(const DirectionalRates &measured);

// Frequency of the largest non-DC spectral peak after removing the mean.
double dominant_frequency(const RateSeries &series);

// Phase delay of b relative to a at frequency f, degrees in (-180, 180].
// Positive when b lags a.
double phase_lag_deg(const RateSeries &a, const RateSeries &b, double f);

// Index of the first sample at or after the transient cut-off:
// max(2 * tau2, stimulus period).
std::size_t window_start(const TimeGrid &grid, const FilterParams &fp, double period);

} // namespace motion
