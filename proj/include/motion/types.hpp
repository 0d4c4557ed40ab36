#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

namespace motion {

// Output channels, in export column order.
enum class Direction { up = 0, down = 1, left = 2, right = 3 };

inline constexpr std::array<Direction, 4> all_directions{
    Direction::up, Direction::down, Direction::left, Direction::right};

constexpr Direction opposite(Direction d) {
    switch (d) {
    case Direction::up: return Direction::down;
    case Direction::down: return Direction::up;
    case Direction::left: return Direction::right;
    case Direction::right: return Direction::left;
    }
    return d;
}

constexpr std::size_t index_of(Direction d) { return static_cast<std::size_t>(d); }

std::string_view to_string(Direction d);

// One stimulus occurrence. y grows upward.
struct Event {
    int x = 0;
    int y = 0;
    double t = 0.0;

    bool operator==(const Event &) const = default;
};

// Events sorted by t, simultaneous events ordered by (y, x).
class EventStream {
public:
    EventStream() = default;

    // Sorts the events; throws DomainError for out-of-field pixels or t < 0.
    EventStream(int field_width, int field_height, std::vector<Event> events);

    // Accepts only already-ordered input; throws DomainError otherwise.
    static EventStream from_sorted(int field_width, int field_height, std::vector<Event> events);

    const std::vector<Event> &events() const { return events_; }
    std::size_t size() const { return events_.size(); }
    bool empty() const { return events_.empty(); }
    int field_width() const { return width_; }
    int field_height() const { return height_; }

    static bool ordered(const Event &a, const Event &b);

private:
    void check_pixels() const;

    int width_ = 0;
    int height_ = 0;
    std::vector<Event> events_;
};

struct LifParams {
    double tau_m = 0.02;
    double v_th = 0.5;
    double v_reset = 0.0;
    double v_floor = -1.0;
    double t_pw = 1e-4;
    double t_ref = 2e-4;
    double d_out = 1e-4;

    // Defaults above with v_floor tied to the threshold.
    static LifParams make(double tau_m, double v_th);

    // Throws ConfigError naming the first violated constraint.
    void validate() const;

    bool operator==(const LifParams &) const = default;
};

enum class Sign { excitatory, inhibitory };

struct Synapse {
    int pre = 0;
    int post = 0;
    double weight = 0.0;
    Sign sign = Sign::excitatory;

    double signed_weight() const { return sign == Sign::excitatory ? weight : -weight; }
};

enum class DeviceState { on, off };

// Two-state resistive synapse; currents stand in for conductances.
struct SynapseDevice {
    double g_on = 180e-9;
    double g_off = 100e-12;
    DeviceState state = DeviceState::on;
};

// Linear conductance-to-weight map: w_on when ON, scaled by g_off/g_on when OFF.
double weight_from_device(const SynapseDevice &dev, double w_on);

struct SpikeRecord {
    std::vector<std::vector<double>> trains;

    SpikeRecord() = default;
    explicit SpikeRecord(std::size_t neurons) : trains(neurons) {}

    std::size_t neuron_count() const { return trains.size(); }
    std::size_t total() const;
};

struct RateSeries {
    double t0 = 0.0;
    double dt = 1e-3;
    std::vector<double> values;

    double time(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
    std::size_t size() const { return values.size(); }

    // Samples [begin, end) as a new series.
    RateSeries slice(std::size_t begin, std::size_t end) const;
};

using DirectionalRates = std::array<RateSeries, 4>;

} // namespace motion
