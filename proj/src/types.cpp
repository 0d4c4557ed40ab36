#include "motion/types.hpp"

#include "motion/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace motion {

std::string_view to_string(Direction d) {
    switch (d) {
    case Direction::up: return "up";
    case Direction::down: return "down";
    case Direction::left: return "left";
    case Direction::right: return "right";
    }
    return "?";
}

bool EventStream::ordered(const Event &a, const Event &b) {
    if (a.t != b.t) return a.t < b.t;
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
}

EventStream::EventStream(int field_width, int field_height, std::vector<Event> events)
    : width_(field_width), height_(field_height), events_(std::move(events)) {
    check_pixels();
    std::stable_sort(events_.begin(), events_.end(), ordered);
}

EventStream EventStream::from_sorted(int field_width, int field_height, std::vector<Event> events) {
    for (std::size_t i = 1; i < events.size(); ++i) {
        if (ordered(events[i], events[i - 1]))
            throw DomainError("event stream is not sorted at row " + std::to_string(i + 1));
    }
    return EventStream(field_width, field_height, std::move(events));
}

void EventStream::check_pixels() const {
    for (const Event &e : events_) {
        if (e.x < 0 || e.y < 0 || e.x >= width_ || e.y >= height_)
            throw DomainError("event pixel (" + std::to_string(e.x) + "," + std::to_string(e.y) +
                              ") lies outside the field");
        if (!std::isfinite(e.t) || e.t < 0.0)
            throw DomainError("event time must be finite and non-negative");
    }
}

LifParams LifParams::make(double tau_m, double v_th) {
    LifParams p;
    p.tau_m = tau_m;
    p.v_th = v_th;
    p.v_floor = -2.0 * v_th;
    return p;
}

void LifParams::validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!(finite(tau_m) && finite(v_th) && finite(v_reset) && finite(v_floor) && finite(t_pw) &&
          finite(t_ref) && finite(d_out)))
        throw ConfigError("neuron parameters must be finite");
    if (!(tau_m > 0.0)) throw ConfigError("tau_m must be positive");
    if (!(v_th > v_reset)) throw ConfigError("v_th must exceed v_reset");
    if (!(v_reset >= v_floor)) throw ConfigError("v_reset must not be below v_floor");
    if (!(t_pw > 0.0)) throw ConfigError("t_pw must be positive");
    if (!(t_ref >= t_pw)) throw ConfigError("t_ref must be at least t_pw");
    if (!(d_out >= 0.0)) throw ConfigError("d_out must be non-negative");
}

double weight_from_device(const SynapseDevice &dev, double w_on) {
    if (!(w_on > 0.0) || !std::isfinite(w_on)) throw ConfigError("w_on must be positive");
    if (!(dev.g_on > 0.0) || !(dev.g_off > 0.0) || !std::isfinite(dev.g_on))
        throw DomainError("device conductances must be positive");
    if (!(dev.g_on > dev.g_off)) throw DomainError("device ON conductance must exceed OFF");
    if (dev.state == DeviceState::on) return w_on;
    return w_on * (dev.g_off / dev.g_on);
}

std::size_t SpikeRecord::total() const {
    std::size_t n = 0;
    for (const auto &tr : trains) n += tr.size();
    return n;
}

RateSeries RateSeries::slice(std::size_t begin, std::size_t end) const {
    begin = std::min(begin, values.size());
    end = std::clamp(end, begin, values.size());
    RateSeries out;
    out.t0 = time(begin);
    out.dt = dt;
    out.values.assign(values.begin() + static_cast<std::ptrdiff_t>(begin),
                      values.begin() + static_cast<std::ptrdiff_t>(end));
    return out;
}

} // namespace motion
