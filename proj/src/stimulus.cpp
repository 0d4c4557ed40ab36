#include "motion/stimulus.hpp"

#include "motion/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace motion {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

struct Crossing {
    double t;
    int axis;  // 0 = x, 1 = y
    int value; // rounded coordinate right after the crossing
    std::size_t seq;
    bool touch = false; // momentary visit, reverts immediately
};

int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

// Crossings of p(t) = c + a*sin(w*t + phi) through `level` inside [0, t_end].
void sinusoid_crossings(double c, double a, double w, double phi, double level, double t_end, int axis,
                        std::vector<Crossing> &out) {
    if (!(a > 0.0) || !(w > 0.0)) return;
    const double s = (level - c) / a;
    const int up_value = static_cast<int>(std::lround(level + 0.5));
    // |s| == 1 is a tangent touch: the rounded value changes only for an
    // instant. Only a touch from below does that (half-up rounding), and it
    // is kept as a zero-length visit for bounds checking.
    if (std::abs(s) >= 1.0 - 1e-12) {
        if (s > 0.0 && std::abs(s) < 1.0 + 1e-12) {
            const double theta = std::numbers::pi / 2;
            const double m_lo = std::ceil((phi - theta) / two_pi - 1e-12);
            const double m_hi = std::floor((w * t_end + phi - theta) / two_pi + 1e-12);
            for (double m = m_lo; m <= m_hi; m += 1.0) {
                const double t = std::max(0.0, (theta + two_pi * m - phi) / w);
                if (t <= t_end) out.push_back({t, axis, up_value, 0, true});
            }
        }
        return;
    }
    const double base[2] = {std::asin(s), std::numbers::pi - std::asin(s)};
    for (int branch = 0; branch < 2; ++branch) {
        const double theta = base[branch];
        const double m_lo = std::ceil((phi - theta) / two_pi - 1e-12);
        const double m_hi = std::floor((w * t_end + phi - theta) / two_pi + 1e-12);
        for (double m = m_lo; m <= m_hi; m += 1.0) {
            double t = (theta + two_pi * m - phi) / w;
            if (t < 0.0) {
                if (t < -1e-12) continue;
                t = 0.0;
            }
            if (t > t_end) continue;
            out.push_back({t, axis, branch == 0 ? up_value : up_value - 1, 0, false});
        }
    }
}

// Crossings of the straight segment p(t) = p0 + v*(t - t0), t in [t0, t1].
void segment_crossings(double p0, double v, double t0, double t1, double level, int axis,
                       std::vector<Crossing> &out) {
    if (v == 0.0) return;
    const double t = t0 + (level - p0) / v;
    if (t < t0 || t > t1) return;
    const int up_value = static_cast<int>(std::lround(level + 0.5));
    out.push_back({t, axis, v > 0.0 ? up_value : up_value - 1, 0, false});
}

std::array<double, 2> axis_bounds(const Trajectory &tr, int axis) {
    switch (tr.kind) {
    case TrajectoryKind::circle:
        return axis == 0 ? std::array{tr.cx - tr.r, tr.cx + tr.r} : std::array{tr.cy - tr.r, tr.cy + tr.r};
    case TrajectoryKind::eight:
        return axis == 0 ? std::array{tr.cx - tr.ax, tr.cx + tr.ax} : std::array{tr.cy - tr.ay, tr.cy + tr.ay};
    case TrajectoryKind::linear: {
        auto a = tr.position(0.0)[static_cast<std::size_t>(axis)];
        auto b = tr.position(tr.t_end)[static_cast<std::size_t>(axis)];
        return {std::min(a, b), std::max(a, b)};
    }
    case TrajectoryKind::waypoints: {
        double lo = INFINITY, hi = -INFINITY;
        for (const Waypoint &w : tr.waypoints) {
            double v = axis == 0 ? w.x : w.y;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        return {lo, hi};
    }
    }
    return {0.0, 0.0};
}

std::vector<Crossing> all_crossings(const Trajectory &tr) {
    std::vector<Crossing> out;
    const double w = two_pi * tr.f;
    for (int axis = 0; axis < 2; ++axis) {
        auto [lo, hi] = axis_bounds(tr, axis);
        for (double k = std::floor(lo) - 1.0; k <= std::ceil(hi) + 1.0; k += 1.0) {
            const double level = k + 0.5;
            switch (tr.kind) {
            case TrajectoryKind::circle:
                if (axis == 0)
                    sinusoid_crossings(tr.cx, tr.r, w, -std::numbers::pi / 2, level, tr.t_end, 0, out);
                else
                    sinusoid_crossings(tr.cy, tr.r, w, 0.0, level, tr.t_end, 1, out);
                break;
            case TrajectoryKind::eight:
                if (axis == 0)
                    sinusoid_crossings(tr.cx, tr.ax, 2.0 * w, 0.0, level, tr.t_end, 0, out);
                else
                    sinusoid_crossings(tr.cy, tr.ay, w, 0.0, level, tr.t_end, 1, out);
                break;
            case TrajectoryKind::linear:
                segment_crossings(axis == 0 ? tr.x0 : tr.y0, axis == 0 ? tr.vx : tr.vy, 0.0, tr.t_end, level, axis,
                                  out);
                break;
            case TrajectoryKind::waypoints:
                for (std::size_t i = 0; i + 1 < tr.waypoints.size(); ++i) {
                    const Waypoint &a = tr.waypoints[i];
                    const Waypoint &b = tr.waypoints[i + 1];
                    if (a.t > tr.t_end) break;
                    const double pa = axis == 0 ? a.x : a.y;
                    const double pb = axis == 0 ? b.x : b.y;
                    const std::size_t before = out.size();
                    segment_crossings(pa, (pb - pa) / (b.t - a.t), a.t, std::min(b.t, tr.t_end), level, axis, out);
                    // segment order decides ties at shared joints
                    for (std::size_t j = before; j < out.size(); ++j) out[j].seq = i;
                }
                break;
            }
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const Crossing &a, const Crossing &b) {
        if (a.t != b.t) return a.t < b.t;
        return a.seq < b.seq;
    });
    return out;
}

void require_finite(double v, const char *what) {
    if (!std::isfinite(v)) throw ConfigError(std::string(what) + " must be finite");
}

} // namespace

std::array<double, 2> Trajectory::position(double t) const {
    const double w = two_pi * f;
    switch (kind) {
    case TrajectoryKind::circle: return {cx - r * std::cos(w * t), cy + r * std::sin(w * t)};
    case TrajectoryKind::eight: return {cx + ax * std::sin(2.0 * w * t), cy + ay * std::sin(w * t)};
    case TrajectoryKind::linear: return {x0 + vx * t, y0 + vy * t};
    case TrajectoryKind::waypoints: {
        if (waypoints.empty()) return {0.0, 0.0};
        if (t <= waypoints.front().t) return {waypoints.front().x, waypoints.front().y};
        for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
            const Waypoint &a = waypoints[i];
            const Waypoint &b = waypoints[i + 1];
            if (t <= b.t) {
                const double u = (t - a.t) / (b.t - a.t);
                return {a.x + u * (b.x - a.x), a.y + u * (b.y - a.y)};
            }
        }
        return {waypoints.back().x, waypoints.back().y};
    }
    }
    return {0.0, 0.0};
}

std::array<double, 2> Trajectory::velocity(double t) const {
    const double w = two_pi * f;
    switch (kind) {
    case TrajectoryKind::circle: return {r * w * std::sin(w * t), r * w * std::cos(w * t)};
    case TrajectoryKind::eight: return {2.0 * w * ax * std::cos(2.0 * w * t), w * ay * std::cos(w * t)};
    case TrajectoryKind::linear: return {vx, vy};
    case TrajectoryKind::waypoints:
        for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
            const Waypoint &a = waypoints[i];
            const Waypoint &b = waypoints[i + 1];
            if (t >= a.t && t < b.t) return {(b.x - a.x) / (b.t - a.t), (b.y - a.y) / (b.t - a.t)};
        }
        return {0.0, 0.0};
    }
    return {0.0, 0.0};
}

std::array<double, 2> Trajectory::max_speed() const {
    const double w = two_pi * f;
    switch (kind) {
    case TrajectoryKind::circle: return {r * w, r * w};
    case TrajectoryKind::eight: return {2.0 * w * ax, w * ay};
    case TrajectoryKind::linear: return {std::abs(vx), std::abs(vy)};
    case TrajectoryKind::waypoints: {
        std::array<double, 2> m{0.0, 0.0};
        for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
            const Waypoint &a = waypoints[i];
            const Waypoint &b = waypoints[i + 1];
            m[0] = std::max(m[0], std::abs((b.x - a.x) / (b.t - a.t)));
            m[1] = std::max(m[1], std::abs((b.y - a.y) / (b.t - a.t)));
        }
        return m;
    }
    }
    return {0.0, 0.0};
}

double Trajectory::period() const {
    if ((kind == TrajectoryKind::circle || kind == TrajectoryKind::eight) && f > 0.0) return 1.0 / f;
    return 0.0;
}

namespace {

// Rounded positions in time order. Crossings at or after t_end are left out
// (the stream covers [0, t_end)); with `touches` every momentary visit to a
// boundary position is reported as well.
std::vector<Step> walk(const Trajectory &tr, bool touches) {
    auto p0 = tr.position(0.0);
    int x = round_half_up(p0[0]);
    int y = round_half_up(p0[1]);
    std::vector<Crossing> cs = all_crossings(tr);

    std::size_t i = 0;
    std::vector<Step> momentary;
    auto apply = [&](const Crossing &c) {
        if (c.touch) {
            if (touches) momentary.push_back(c.axis == 0 ? Step{c.t, c.value, y} : Step{c.t, x, c.value});
            return;
        }
        (c.axis == 0 ? x : y) = c.value;
        if (touches) momentary.push_back({c.t, x, y});
    };
    while (i < cs.size() && cs[i].t == 0.0) apply(cs[i++]);
    std::vector<Step> steps{{0.0, x, y}};
    while (i < cs.size() && (cs[i].t < tr.t_end || (touches && cs[i].t <= tr.t_end))) {
        const double t = cs[i].t;
        while (i < cs.size() && cs[i].t == t) apply(cs[i++]);
        if (x != steps.back().x || y != steps.back().y) steps.push_back({t, x, y});
    }
    if (touches) steps.insert(steps.end(), momentary.begin(), momentary.end());
    return steps;
}

} // namespace

std::vector<Step> rounded_path(const Trajectory &tr) { return walk(tr, false); }

void validate(const Trajectory &tr) {
    require_finite(tr.t_end, "duration");
    if (tr.t_end < 0.0) throw ConfigError("duration must be non-negative");
    if (tr.field.width < 3 || tr.field.height < 3) throw ConfigError("field must be at least 3x3");
    switch (tr.kind) {
    case TrajectoryKind::circle:
        for (double v : {tr.cx, tr.cy, tr.r, tr.f}) require_finite(v, "circle parameters");
        if (tr.r < 0.0 || tr.f < 0.0) throw ConfigError("circle radius and frequency must be non-negative");
        break;
    case TrajectoryKind::eight:
        for (double v : {tr.cx, tr.cy, tr.ax, tr.ay, tr.f}) require_finite(v, "eight parameters");
        if (tr.ax < 0.0 || tr.ay < 0.0 || tr.f < 0.0)
            throw ConfigError("eight amplitudes and frequency must be non-negative");
        break;
    case TrajectoryKind::linear:
        for (double v : {tr.x0, tr.y0, tr.vx, tr.vy}) require_finite(v, "linear parameters");
        break;
    case TrajectoryKind::waypoints:
        if (tr.waypoints.empty()) throw ConfigError("waypoint list is empty");
        if (tr.waypoints.front().t != 0.0) throw ConfigError("first waypoint must be at t = 0");
        for (std::size_t i = 0; i < tr.waypoints.size(); ++i) {
            const Waypoint &w = tr.waypoints[i];
            for (double v : {w.t, w.x, w.y}) require_finite(v, "waypoints");
            if (i > 0 && !(w.t > tr.waypoints[i - 1].t)) throw ConfigError("waypoint times must increase");
        }
        break;
    }
    const int w = tr.field.width, h = tr.field.height;
    for (const Step &s : walk(tr, true)) {
        if (s.x - footprint_radius < 0 || s.y - footprint_radius < 0 || s.x + footprint_radius >= w ||
            s.y + footprint_radius >= h)
            throw DomainError("trajectory leaves the field: object centered at (" + std::to_string(s.x) + "," +
                              std::to_string(s.y) + ") at t=" + std::to_string(s.t) + " s");
    }
}

Trajectory make_circle(Field field, double cx, double cy, double r, double f, double t_end) {
    Trajectory tr;
    tr.kind = TrajectoryKind::circle;
    tr.field = field;
    tr.cx = cx;
    tr.cy = cy;
    tr.r = r;
    tr.f = f;
    tr.t_end = t_end;
    validate(tr);
    return tr;
}

Trajectory make_eight(Field field, double cx, double cy, double ax, double ay, double f, double t_end) {
    Trajectory tr;
    tr.kind = TrajectoryKind::eight;
    tr.field = field;
    tr.cx = cx;
    tr.cy = cy;
    tr.ax = ax;
    tr.ay = ay;
    tr.f = f;
    tr.t_end = t_end;
    validate(tr);
    return tr;
}

Trajectory make_linear(Field field, double x0, double y0, double vx, double vy, double t_end) {
    Trajectory tr;
    tr.kind = TrajectoryKind::linear;
    tr.field = field;
    tr.x0 = x0;
    tr.y0 = y0;
    tr.vx = vx;
    tr.vy = vy;
    tr.t_end = t_end;
    validate(tr);
    return tr;
}

Trajectory make_waypoints(Field field, std::vector<Waypoint> points, double t_end) {
    Trajectory tr;
    tr.kind = TrajectoryKind::waypoints;
    tr.field = field;
    tr.waypoints = std::move(points);
    tr.t_end = t_end;
    validate(tr);
    return tr;
}

EventStream generate_events(const Trajectory &tr, Emission emission) {
    validate(tr);
    std::vector<Event> events;
    const Step *prev = nullptr;
    const std::vector<Step> steps = rounded_path(tr);
    for (const Step &s : steps) {
        for (int dy = -footprint_radius; dy <= footprint_radius; ++dy) {
            for (int dx = -footprint_radius; dx <= footprint_radius; ++dx) {
                const int x = s.x + dx, y = s.y + dy;
                if (emission == Emission::onset && prev != nullptr && std::abs(x - prev->x) <= footprint_radius &&
                    std::abs(y - prev->y) <= footprint_radius)
                    continue;
                events.push_back({x, y, s.t});
            }
        }
        prev = &s;
    }
    return EventStream(tr.field.width, tr.field.height, std::move(events));
}

ChannelVelocity velocity(const Trajectory &tr, Direction channel, double t) {
    const auto v = tr.velocity(t);
    const auto m = tr.max_speed();
    switch (channel) {
    case Direction::up: return {v[1], m[1]};
    case Direction::down: return {-v[1], m[1]};
    case Direction::right: return {v[0], m[0]};
    case Direction::left: return {-v[0], m[0]};
    }
    return {};
}

} // namespace motion
