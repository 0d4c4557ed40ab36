#pragma once

#include "motion/types.hpp"

#include <array>
#include <vector>

namespace motion {

enum class TrajectoryKind { circle, eight, linear, waypoints };

struct Waypoint {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
};

struct Field {
    int width = 10;
    int height = 11;
};

// Path of the object's center in pixel units; y grows upward.
struct Trajectory {
    TrajectoryKind kind = TrajectoryKind::circle;
    Field field;
    double cx = 4.5, cy = 5.0;
    double r = 3.0;
    double ax = 3.0, ay = 3.0;
    double f = 0.0;
    double x0 = 0.0, y0 = 0.0, vx = 0.0, vy = 0.0;
    std::vector<Waypoint> waypoints;
    double t_end = 0.0;

    std::array<double, 2> position(double t) const;
    std::array<double, 2> velocity(double t) const;
    // Largest |dx/dt| and |dy/dt| the parameterization can reach.
    std::array<double, 2> max_speed() const;
    // Repeat period in seconds, or 0 for non-periodic paths.
    double period() const;
};

Trajectory make_circle(Field field, double cx, double cy, double r, double f, double t_end);
Trajectory make_eight(Field field, double cx, double cy, double ax, double ay, double f, double t_end);
Trajectory make_linear(Field field, double x0, double y0, double vx, double vy, double t_end);
Trajectory make_waypoints(Field field, std::vector<Waypoint> points, double t_end);

// Checks parameters and that the 3x3 footprint never leaves the field.
// Throws ConfigError for bad parameters and DomainError for out-of-field paths.
void validate(const Trajectory &traj);

inline constexpr int footprint_radius = 1;

// A change of the rounded center.
struct Step {
    double t = 0.0;
    int x = 0;
    int y = 0;
};

// Rounded-center positions over [0, t_end): the position at t = 0 followed by
// every change, with change times solved in closed form. Instants where the
// path only touches a rounding boundary are ignored here but still count
// for the in-field check.
std::vector<Step> rounded_path(const Trajectory &traj);

enum class Emission {
    footprint, // every covered pixel spikes at each new position
    onset,     // only newly covered pixels spike
};

EventStream generate_events(const Trajectory &traj, Emission emission = Emission::footprint);

struct ChannelVelocity {
    double speed = 0.0; // signed, positive in the channel's preferred direction
    double max = 0.0;
};

ChannelVelocity velocity(const Trajectory &traj, Direction channel, double t);

} // namespace motion
