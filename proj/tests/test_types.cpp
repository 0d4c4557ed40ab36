#include "doctest.h"

#include "motion/errors.hpp"
#include "motion/types.hpp"

#include <algorithm>
#include <random>

using namespace motion;

TEST_CASE("device ON state passes the nominal weight through") {
    SynapseDevice dev{180e-9, 100e-12, DeviceState::on};
    CHECK(weight_from_device(dev, 1.0) == 1.0);
}

TEST_CASE("device OFF state scales by the conductance ratio") {
    SynapseDevice dev{180e-9, 100e-12, DeviceState::off};
    // 100 pA / 180 nA = 1 / 1800
    const double expected = 1.0 / 1800.0;
    CHECK(weight_from_device(dev, 1.0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(weight_from_device(dev, 1.0) == doctest::Approx(5.5555555556e-4).epsilon(1e-9));
}

TEST_CASE("device weight rejects bad inputs") {
    SynapseDevice dev;
    CHECK_THROWS_AS(weight_from_device(dev, 0.0), ConfigError);
    CHECK_THROWS_AS(weight_from_device(dev, -1.0), ConfigError);
    CHECK_THROWS_AS(weight_from_device({0.0, 1e-12, DeviceState::on}, 1.0), DomainError);
    CHECK_THROWS_AS(weight_from_device({1e-9, -1e-12, DeviceState::off}, 1.0), DomainError);
    CHECK_THROWS_AS(weight_from_device({1e-12, 1e-9, DeviceState::off}, 1.0), DomainError);
}

TEST_CASE("device weight is monotone in conductance and homogeneous in w_on") {
    double prev = 0.0;
    for (double g_off = 1e-12; g_off < 1e-7; g_off *= 3.0) {
        const double w = weight_from_device({180e-9, g_off, DeviceState::off}, 1.0);
        CHECK(w > prev);
        prev = w;
    }
    for (DeviceState s : {DeviceState::on, DeviceState::off}) {
        SynapseDevice dev{180e-9, 100e-12, s};
        for (double k : {0.25, 2.0, 7.5})
            CHECK(weight_from_device(dev, k * 0.8) == doctest::Approx(k * weight_from_device(dev, 0.8)));
    }
}

TEST_CASE("event stream sorts any permutation by time then row then column") {
    std::mt19937 rng(7);
    std::vector<Event> base;
    for (int i = 0; i < 200; ++i)
        base.push_back({static_cast<int>(rng() % 10), static_cast<int>(rng() % 11), static_cast<double>(rng() % 13) * 0.01});
    for (int trial = 0; trial < 50; ++trial) {
        std::shuffle(base.begin(), base.end(), rng);
        EventStream s(10, 11, base);
        REQUIRE(s.size() == base.size());
        for (std::size_t i = 1; i < s.size(); ++i) {
            const Event &a = s.events()[i - 1], &b = s.events()[i];
            CHECK((a.t < b.t || (a.t == b.t && (a.y < b.y || (a.y == b.y && a.x <= b.x)))));
        }
    }
}

TEST_CASE("event stream validation") {
    CHECK_THROWS_AS(EventStream(10, 11, {{10, 0, 0.0}}), DomainError);
    CHECK_THROWS_AS(EventStream(10, 11, {{0, -1, 0.0}}), DomainError);
    CHECK_THROWS_AS(EventStream(10, 11, {{0, 0, -0.5}}), DomainError);
    CHECK_THROWS_AS(EventStream::from_sorted(10, 11, {{0, 0, 0.2}, {1, 1, 0.1}}), DomainError);
    CHECK_THROWS_AS(EventStream::from_sorted(10, 11, {{3, 2, 0.1}, {1, 1, 0.1}}), DomainError);
    CHECK_NOTHROW(EventStream::from_sorted(10, 11, {{1, 1, 0.1}, {3, 2, 0.1}}));
}

TEST_CASE("neuron parameter constraints") {
    LifParams p = LifParams::make(0.02, 0.5);
    CHECK(p.v_floor == -1.0);
    CHECK_NOTHROW(p.validate());
    auto bad = [&](auto mutate) {
        LifParams q = p;
        mutate(q);
        CHECK_THROWS_AS(q.validate(), ConfigError);
    };
    bad([](LifParams &q) { q.tau_m = 0.0; });
    bad([](LifParams &q) { q.v_th = q.v_reset; });
    bad([](LifParams &q) { q.v_floor = 0.1; });
    bad([](LifParams &q) { q.t_pw = 0.0; });
    bad([](LifParams &q) { q.t_ref = q.t_pw / 2; });
    bad([](LifParams &q) { q.d_out = -1e-6; });
}

TEST_CASE("rate series slicing keeps the time axis") {
    RateSeries s{1.0, 0.5, {1, 2, 3, 4, 5}};
    RateSeries t = s.slice(2, 4);
    CHECK(t.t0 == 2.0);
    CHECK(t.values == std::vector<double>{3, 4});
    CHECK(s.slice(4, 99).size() == 1);
}
