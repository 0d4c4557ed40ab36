#include "motion/analysis.hpp"

#include "motion/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>

namespace motion {

FilterParams FilterParams::from_tau1(double tau1) {
    if (!(tau1 > 0.0) || !std::isfinite(tau1)) throw ConfigError("filter tau1 must be positive");
    FilterParams fp;
    fp.tau1 = tau1;
    fp.tau2 = 2.0 * tau1;
    fp.lambda = 1.0 / (fp.tau1 - fp.tau2);
    return fp;
}

FilterParams FilterParams::from_taus(const std::vector<double> &output_taus) {
    if (output_taus.empty()) throw ConfigError("filter needs at least one output tau");
    const double mean = std::accumulate(output_taus.begin(), output_taus.end(), 0.0) /
                        static_cast<double>(output_taus.size());
    return from_tau1(mean);
}

double FilterParams::kernel(double t) const {
    if (t <= 0.0) return 0.0;
    return lambda * (std::exp(-t / tau1) - std::exp(-t / tau2));
}

double FilterParams::peak_time() const { return tau1 * tau2 / (tau2 - tau1) * std::log(tau2 / tau1); }

std::vector<double> pool_group(const SpikeRecord &record, const NetworkGraph &net, Direction d) {
    std::vector<double> out;
    for (int k = 0; k < net.n_per_dir; ++k) {
        const auto &train = record.trains.at(static_cast<std::size_t>(net.output_id(d, k)));
        out.insert(out.end(), train.begin(), train.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

RateSeries firing_rate(const std::vector<double> &train, const FilterParams &fp, const TimeGrid &grid) {
    if (!(grid.dt > 0.0)) throw ConfigError("rate grid dt must be positive");
    RateSeries out;
    out.t0 = grid.t0;
    out.dt = grid.dt;
    out.values.assign(grid.n, 0.0);
    // Kernel tails beyond 50 tau2 are below 1e-21 of the peak and skipped.
    const double horizon = 50.0 * fp.tau2;
    std::size_t first = 0;
    for (std::size_t k = 0; k < grid.n; ++k) {
        const double t = grid.at(k);
        while (first < train.size() && t - train[first] > horizon) ++first;
        double acc = 0.0;
        for (std::size_t s = first; s < train.size() && train[s] < t; ++s) acc += fp.kernel(t - train[s]);
        out.values[k] = acc;
    }
    return out;
}

DirectionalRates ideal_rates(const Trajectory &traj, double f_max, const TimeGrid &grid) {
    if (!(f_max > 0.0)) throw ConfigError("f_max must be positive");
    DirectionalRates out;
    for (Direction d : all_directions) {
        RateSeries &s = out[index_of(d)];
        s.t0 = grid.t0;
        s.dt = grid.dt;
        s.values.resize(grid.n);
        for (std::size_t k = 0; k < grid.n; ++k) {
            const ChannelVelocity v = velocity(traj, d, grid.at(k));
            s.values[k] = v.max > 0.0 ? 0.5 * f_max * std::abs(v.speed / v.max + 1.0) : 0.5 * f_max;
        }
    }
    return out;
}

Score accuracy(const DirectionalRates &ideal, const DirectionalRates &measured) {
    double sum = 0.0;
    for (std::size_t c = 0; c < 4; ++c) {
        const auto &a = ideal[c].values;
        const auto &b = measured[c].values;
        if (a.size() != b.size()) throw ConfigError("ideal and measured rates use different grids");
        double err = 0.0, norm = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            err += (a[k] - b[k]) * (a[k] - b[k]);
            norm += a[k] * a[k];
        }
        if (!(norm > 0.0))
            throw UndefinedResult("ideal rate for channel " + std::string(to_string(all_directions[c])) +
                                  " has zero norm");
        sum += 1.0 - err / norm;
    }
    Score s;
    s.raw = sum / 4.0;
    s.clamped = std::max(0.0, s.raw);
    return s;
}

double calibrate_fmax(const DirectionalRates &measured) {
    double m = 0.0;
    for (const RateSeries &s : measured)
        for (double v : s.values) m = std::max(m, v);
    if (!(m > 0.0)) throw UndefinedResult("all measured rates are zero; f_max cannot be calibrated");
    return m;
}

namespace {

// FFTW planning is not thread safe.
std::mutex &plan_mutex() {
    static std::mutex m;
    return m;
}

std::vector<std::complex<double>> real_spectrum(std::vector<double> x) {
    const int n = static_cast<int>(x.size());
    std::vector<std::complex<double>> out(x.size() / 2 + 1);
    fftw_plan plan;
    {
        std::lock_guard lock(plan_mutex());
        plan = fftw_plan_dft_r2c_1d(n, x.data(), reinterpret_cast<fftw_complex *>(out.data()), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(plan_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

} // namespace

double dominant_frequency(const RateSeries &series) {
    const std::size_t n = series.values.size();
    if (n < 4) throw UndefinedResult("series too short for a spectrum");
    std::vector<double> x = series.values;
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    double scale = 0.0;
    for (double &v : x) {
        v -= mean;
        scale = std::max(scale, std::abs(v));
    }
    if (!(scale > 1e-12 * std::max(1.0, std::abs(mean))))
        throw UndefinedResult("constant series has no spectral peak");
    const auto spec = real_spectrum(std::move(x));
    std::size_t best = 1;
    for (std::size_t k = 2; k < spec.size(); ++k)
        if (std::abs(spec[k]) > std::abs(spec[best])) best = k;
    return static_cast<double>(best) / (static_cast<double>(n) * series.dt);
}

namespace {

// Phase delay (radians) of the component at frequency f: x ~ cos(w t - phi).
double phase_delay(const RateSeries &s, double f) {
    const double mean =
        std::accumulate(s.values.begin(), s.values.end(), 0.0) / static_cast<double>(std::max<std::size_t>(1, s.size()));
    std::complex<double> acc{0.0, 0.0};
    const double w = 2.0 * std::numbers::pi * f;
    for (std::size_t k = 0; k < s.size(); ++k) acc += (s.values[k] - mean) * std::polar(1.0, -w * s.time(k));
    return -std::arg(acc);
}

} // namespace

double phase_lag_deg(const RateSeries &a, const RateSeries &b, double f) {
    if (!(f > 0.0)) throw ConfigError("phase lag needs a positive frequency");
    double deg = (phase_delay(b, f) - phase_delay(a, f)) * 180.0 / std::numbers::pi;
    deg = std::fmod(deg, 360.0);
    if (deg <= -180.0) deg += 360.0;
    if (deg > 180.0) deg -= 360.0;
    return deg;
}

std::size_t window_start(const TimeGrid &grid, const FilterParams &fp, double period) {
    const double cut = std::max(2.0 * fp.tau2, period);
    if (cut <= grid.t0) return 0;
    const double k = std::ceil((cut - grid.t0) / grid.dt - 1e-9);
    return std::min(grid.n, static_cast<std::size_t>(k));
}

} // namespace motion
