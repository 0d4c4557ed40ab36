#include "doctest.h"

#include "motion/errors.hpp"
#include "motion/stimulus.hpp"

#include <cmath>
#include <numbers>
#include <set>

using namespace motion;

namespace {

constexpr double pi = std::numbers::pi;
const Field field{10, 11};

// Rounded-center sequence from plain sampling at n evenly spaced instants in [0, t_end).
std::vector<Step> resample(const Trajectory &tr, long n) {
    std::vector<Step> out;
    for (long k = 0; k < n; ++k) {
        const double t = tr.t_end * static_cast<double>(k) / static_cast<double>(n);
        auto p = tr.position(t);
        const int x = static_cast<int>(std::floor(p[0] + 0.5)), y = static_cast<int>(std::floor(p[1] + 0.5));
        if (out.empty() || out.back().x != x || out.back().y != y) out.push_back({t, x, y});
    }
    return out;
}

void check_against_sampler(const Trajectory &tr, long n) {
    const std::vector<Step> exact = rounded_path(tr);
    const std::vector<Step> sampled = resample(tr, n);
    REQUIRE(exact.size() == sampled.size());
    const double h = tr.t_end / static_cast<double>(n);
    for (std::size_t i = 0; i < exact.size(); ++i) {
        CHECK(exact[i].x == sampled[i].x);
        CHECK(exact[i].y == sampled[i].y);
        // the sampler sees a change at the first sample after the crossing
        CHECK(exact[i].t <= sampled[i].t + 1e-12);
        CHECK(sampled[i].t - exact[i].t <= h + 1e-12);
    }
}

} // namespace

TEST_CASE("circle parameterization") {
    const double f = 0.5, r = 3.0, T = 1.0 / f;
    Trajectory c = make_circle(field, 4.5, 5.0, r, f, 2 * T);
    auto p = c.position(T / 4);
    CHECK(p[0] == doctest::Approx(4.5));
    CHECK(p[1] == doctest::Approx(8.0));
    auto v = c.velocity(T / 4);
    CHECK(v[0] == doctest::Approx(2 * pi * f * r));
    CHECK(std::abs(v[1]) < 1e-12);
    p = c.position(0.0);
    CHECK(p[0] == doctest::Approx(1.5));
    CHECK(p[1] == doctest::Approx(5.0));
    CHECK(c.velocity(0.0)[1] > 0.0);
    // rightward on (0, T/2), downward on (T/4, 3T/4)
    for (double t = 0.01; t < T / 2; t += 0.05) CHECK(c.velocity(t)[0] > 0.0);
    for (double t = T / 4 + 0.01; t < 3 * T / 4; t += 0.05) CHECK(c.velocity(t)[1] < 0.0);
}

TEST_CASE("stationary circle emits one footprint at t = 0") {
    Trajectory c = make_circle(field, 4.5, 5.0, 3.0, 0.0, 5.0);
    EventStream ev = generate_events(c);
    CHECK(ev.size() == 9);
    for (const Event &e : ev.events()) CHECK(e.t == 0.0);
}

TEST_CASE("figure eight parameterization") {
    const double f = 0.25;
    Trajectory e = make_eight(field, 4.5, 5.0, 3.0, 3.0, f, 8.0);
    auto p0 = e.position(0.0);
    CHECK(p0[0] == 4.5);
    CHECK(p0[1] == 5.0);
    for (double t = 0.0; t < 4.0; t += 0.37) {
        auto a = e.position(t), b = e.position(t + 1.0 / f);
        CHECK(a[0] == doctest::Approx(b[0]));
        CHECK(a[1] == doctest::Approx(b[1]));
        // horizontal repeats every half period, vertical mirrors
        auto h = e.position(t + 0.5 / f);
        CHECK(h[0] == doctest::Approx(a[0]));
        CHECK(h[1] - 5.0 == doctest::Approx(-(a[1] - 5.0)));
    }
}

TEST_CASE("one rounded step emits a second footprint") {
    Trajectory l = make_linear(field, 4.0, 5.0, 1.0, 0.0, 1.0);
    EventStream ev = generate_events(l);
    REQUIRE(ev.size() == 18);
    for (int i = 0; i < 9; ++i) CHECK(ev.events()[static_cast<std::size_t>(i)].t == 0.0);
    for (int i = 9; i < 18; ++i) CHECK(ev.events()[static_cast<std::size_t>(i)].t == doctest::Approx(0.5));
    std::set<std::pair<int, int>> second;
    for (int i = 9; i < 18; ++i) second.insert({ev.events()[static_cast<std::size_t>(i)].x, ev.events()[static_cast<std::size_t>(i)].y});
    CHECK(second.count({6, 5}) == 1);
    CHECK(second.count({3, 5}) == 0);
}

TEST_CASE("onset emission keeps only newly covered pixels") {
    Trajectory l = make_linear(field, 4.0, 5.0, 1.0, 0.0, 1.0);
    EventStream ev = generate_events(l, Emission::onset);
    REQUIRE(ev.size() == 12);
    for (std::size_t i = 9; i < 12; ++i) CHECK(ev.events()[i].x == 6);
    Trajectory d = make_linear(field, 4.0, 5.0, 1.0, 1.0, 1.0);
    CHECK(generate_events(d, Emission::onset).size() == 9 + 5);
}

TEST_CASE("closed-form crossings agree with dense resampling") {
    // Odd sample counts avoid landing exactly on the tangent instants where
    // the path only touches a rounding boundary.
    Trajectory c = make_circle(field, 4.5, 5.0, 3.0, 1.0, 1.0);
    check_against_sampler(c, 200003);
    check_against_sampler(c, 2000003);
    Trajectory e = make_eight(field, 4.5, 5.0, 3.0, 3.0, 0.5, 2.0);
    check_against_sampler(e, 200003);
    Trajectory l = make_linear(field, 1.2, 2.3, 3.1, 2.2, 2.0);
    check_against_sampler(l, 100003);
    Trajectory w = make_waypoints(field, {{0.0, 2.0, 2.0}, {0.4, 6.3, 2.0}, {1.0, 6.3, 7.7}, {1.5, 2.2, 4.0}}, 1.5);
    check_against_sampler(w, 100003);
}

TEST_CASE("event count is nine per visited position") {
    Trajectory c = make_circle(field, 4.5, 5.0, 3.0, 1.0, 1.0);
    const auto steps = rounded_path(c);
    const EventStream ev = generate_events(c);
    CHECK(ev.size() == 9 * steps.size());
    for (const Event &e : ev.events()) {
        CHECK(e.x >= 0);
        CHECK(e.x < 10);
        CHECK(e.y >= 0);
        CHECK(e.y < 11);
    }
}

TEST_CASE("circle centered on the field's axis visits a mirror-symmetric pixel set") {
    Trajectory c = make_circle(field, 4.5, 5.0, 3.0, 1.0, 1.0);
    std::set<std::pair<int, int>> px;
    const EventStream ev = generate_events(c);
    for (const Event &e : ev.events()) px.insert({e.x, e.y});
    for (auto [x, y] : px) CHECK(px.count({9 - x, y}) == 1);
}

TEST_CASE("trajectories that leave the field are rejected") {
    CHECK_THROWS_AS(make_circle(field, 4.5, 5.0, 4.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(make_linear(field, 1.0, 5.0, 10.0, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(make_eight(field, 4.5, 5.0, 5.0, 1.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(make_circle(field, 4.5, 5.0, -1.0, 1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(make_waypoints(field, {{0.5, 3, 3}}, 1.0), ConfigError);
    CHECK_NOTHROW(make_circle(field, 4.5, 5.0, 3.0, 1.0, 1.0));
}

TEST_CASE("channel velocities") {
    const double f = 0.5, r = 3.0, T = 1.0 / f;
    Trajectory c = make_circle(field, 4.5, 5.0, r, f, T);
    CHECK(velocity(c, Direction::up, T / 2).speed < 0.0);
    CHECK(velocity(c, Direction::down, T / 2).speed > 0.0);
    CHECK(velocity(c, Direction::right, T / 4).speed == doctest::Approx(2 * pi * f * r));
    CHECK(velocity(c, Direction::left, T / 4).speed == doctest::Approx(-2 * pi * f * r));
    CHECK(velocity(c, Direction::up, 0.3).max == doctest::Approx(2 * pi * f * r));
    // numeric maximum over a fine grid
    double m = 0.0;
    for (int k = 0; k <= 100000; ++k) m = std::max(m, std::abs(c.velocity(T * k / 100000.0)[0]));
    CHECK(m == doctest::Approx(2 * pi * f * r).epsilon(1e-8));

    Trajectory l = make_linear(field, 2.0, 3.0, 1.5, -0.5, 1.0);
    for (double t : {0.0, 0.3, 0.9}) {
        CHECK(velocity(l, Direction::right, t).speed == 1.5);
        CHECK(velocity(l, Direction::down, t).speed == 0.5);
    }
}
