#include <doctest.h>

#include <cmath>

#include "drsim/community.hpp"
#include "drsim/errors.hpp"
#include "drsim/rng.hpp"
#include "drsim/thermal.hpp"

using namespace drsim;

namespace {

constexpr TimeGrid kGrid{288};

ThermostatLoad make_ac(double set_point, std::vector<Interval> windows, int num_states) {
    ThermostatLoad load;
    load.class_name = "AC";
    load.kind = LoadKind::ThermostatCooling;
    load.rated_kw = 5.0;
    load.num_states = num_states;
    load.set_point_F = set_point;
    load.demand_windows = std::move(windows);
    AcParams ac;
    ac.alpha_kwh_per_F = 2.5;
    ac.eer = 10.0;
    load.thermal = ac;
    calibrate_thermostat(kGrid, load);
    return load;
}

ThermostatLoad make_wh(double set_point, std::vector<Interval> windows, int num_states) {
    ThermostatLoad load;
    load.class_name = "WH";
    load.kind = LoadKind::ThermostatHeating;
    load.rated_kw = 2.5;
    load.num_states = num_states;
    load.set_point_F = set_point;
    load.demand_windows = std::move(windows);
    WhParams wh;
    load.thermal = wh;
    calibrate_thermostat(kGrid, load);
    return load;
}

}  // namespace

TEST_CASE("throttle_power: linear states from OFF to rated") {
    CHECK(throttle_power(3, 5, 5.0) == 2.5);
    CHECK(throttle_power(1, 5, 5.0) == 0.0);
    CHECK(throttle_power(1, 2, 7.7) == 0.0);
    CHECK(throttle_power(2, 3, 5.0) == 2.5);
    // Five states throttle at 0/25/50/75/100% of rated power.
    for (int k = 1; k <= 5; ++k)
        CHECK(throttle_power(k, 5, 4.0) == doctest::Approx(4.0 * (k - 1) * 0.25));
    CHECK(throttle_power(5, 5, 4.0) == 4.0);
    CHECK_THROWS_AS(throttle_power(1, 1, 5.0), ModelError);
    CHECK_THROWS_AS(throttle_power(0, 5, 5.0), ModelError);
}

TEST_CASE("cooling_capacity: EER times input watts") {
    AcParams ac;
    ac.eer = 8.0;
    CHECK(cooling_capacity(ac, 1.5) == doctest::Approx(12000.0));  // 1 Ton
    CHECK(cooling_capacity(ac, 0.0) == 0.0);
    ac.eer = 10.0;
    CHECK(cooling_capacity(ac, 5.0) == doctest::Approx(50000.0));
    // Unit round-trip: 12000 BTU/hr is one ton of cooling.
    ac.eer = 8.0;
    CHECK(cooling_capacity(ac, 1.5) / units::kBtuPerHrPerTon == doctest::Approx(1.0));
}

TEST_CASE("ac_step: gain, demand gating, calibrated steady state") {
    const ThermostatLoad load = make_ac(72, {{100, 48}}, 5);
    const AcParams& ac = std::get<AcParams>(load.thermal);
    const double dt_h = kGrid.dt_hours();

    // OFF with positive gain warms the room.
    CHECK(ac_step(72, 1, 5, 5.0, ac, true, 100, dt_h) > 72.0);
    // Undemanded slots never cool, whatever the state says.
    CHECK(ac_step(72, 5, 5, 5.0, ac, false, 100, dt_h) ==
          ac_step(72, 1, 5, 5.0, ac, false, 100, dt_h));
    // Full power balances the calibrated gain exactly.
    CHECK(ac_step(72, 5, 5, 5.0, ac, true, 100, dt_h) == 72.0);
}

TEST_CASE("wh_step: equilibrium, standing loss, full-tank exchange") {
    const double dt_h = kGrid.dt_hours();
    WhParams wh;
    wh.draw_gal.assign(kGrid.slots, 0.0);
    wh.ambient_temp_F.assign(kGrid.slots, 75.0);

    // No draw, no heat, tank at ambient: nothing moves.
    CHECK(wh_step(75.0, 1, 2, 2.5, wh, 0, dt_h) == doctest::Approx(75.0));
    // Hot tank, heater off: standing loss pulls it down.
    CHECK(wh_step(110.0, 1, 2, 2.5, wh, 0, dt_h) < 110.0);

    // Swapping the full tank with inlet water in one slot leaves inlet temp.
    WhParams swap = wh;
    swap.tank_resistance = 1e12;  // loss -> 0
    swap.draw_gal.assign(kGrid.slots, swap.tank_volume_gal);
    CHECK(wh_step(110.0, 1, 2, 2.5, swap, 0, dt_h) == doctest::Approx(swap.inlet_temp_F));
}

TEST_CASE("simulate_temperature: full power pins the set point") {
    for (const ThermostatLoad& load :
         {make_ac(70, {{120, 48}}, 5), make_wh(112, {{96, 18}, {200, 24}}, 5)}) {
        const StateMatrix full =
            StateMatrix::full_power(kGrid.slots, load.num_states, load.demand_windows);
        const auto theta = simulate_temperature(kGrid, load, full, load.set_point_F);
        for (int t : load.window_slots())
            CHECK(theta[t] == doctest::Approx(load.set_point_F).epsilon(1e-9));
    }
}

TEST_CASE("simulate_temperature: all-OFF AC rises monotonically") {
    const ThermostatLoad load = make_ac(70, {{120, 48}}, 2);
    StateMatrix states = StateMatrix::full_power(kGrid.slots, 2, load.demand_windows);
    for (int t : load.window_slots()) states.state[t] = 1;
    const auto theta = simulate_temperature(kGrid, load, states, 70);
    for (int t = 121; t < 168; ++t) CHECK(theta[t] > theta[t - 1]);
}

TEST_CASE("simulate_temperature: two-state sawtooth matches the hand recursion") {
    const ThermostatLoad load = make_ac(70, {{120, 4}}, 2);
    const AcParams& ac = std::get<AcParams>(load.thermal);
    // Per-slot rise when OFF: dt * G / alpha (full power cancels it exactly).
    const double rise = kGrid.dt_hours() * ac.heat_gain_kw[120] / ac.alpha_kwh_per_F;

    StateMatrix states = StateMatrix::full_power(kGrid.slots, 2, load.demand_windows);
    states.state[120] = 1;
    states.state[122] = 1;
    const auto theta = simulate_temperature(kGrid, load, states, 70);
    CHECK(theta[120] == doctest::Approx(70 + rise));
    CHECK(theta[121] == doctest::Approx(70 + rise));  // ON holds, no recovery
    CHECK(theta[122] == doctest::Approx(70 + 2 * rise));
    CHECK(theta[123] == doctest::Approx(70 + 2 * rise));
}

TEST_CASE("thermal property suite: monotonicity, fixed points, purity") {
    Rng rng(42);
    const double dt_h = kGrid.dt_hours();
    for (int i = 0; i < 1000; ++i) {
        const int num_states = 2 + static_cast<int>(rng.uniform_int(0, 4));
        const double rated = rng.uniform(1.0, 8.0);

        AcParams ac;
        ac.alpha_kwh_per_F = rng.uniform(0.5, 5.0);
        ac.eer = rng.uniform(8.0, 14.0);
        ac.heat_gain_kw.assign(1, rng.uniform(0.0, 20.0));
        const double theta0 = rng.uniform(60, 85);
        double prev = ac_step(theta0, 1, num_states, rated, ac, true, 0, dt_h);
        for (int k = 2; k <= num_states; ++k) {
            const double next = ac_step(theta0, k, num_states, rated, ac, true, 0, dt_h);
            CHECK(next < prev);  // more power, cooler room
            prev = next;
        }
        CHECK(ac_step(theta0, 1, num_states, rated, ac, true, 0, dt_h) ==
              ac_step(theta0, 1, num_states, rated, ac, true, 0, dt_h));

        WhParams wh;
        wh.tank_volume_gal = rng.uniform(30, 120);
        wh.tank_area_sqft = rng.uniform(10, 40);
        wh.tank_resistance = rng.uniform(5, 30);
        wh.inlet_temp_F = rng.uniform(40, 70);
        wh.draw_gal.assign(1, rng.uniform(0.0, 3.0));
        wh.ambient_temp_F.assign(1, rng.uniform(60, 90));
        const double tank0 = rng.uniform(90, 130);
        prev = wh_step(tank0, 1, num_states, rated, wh, 0, dt_h);
        for (int k = 2; k <= num_states; ++k) {
            const double next = wh_step(tank0, k, num_states, rated, wh, 0, dt_h);
            CHECK(next > prev);  // more power, hotter water
            prev = next;
        }

        // Equilibrium fixed point: no draw, heater off, tank at ambient.
        WhParams idle = wh;
        idle.draw_gal.assign(1, 0.0);
        const double ambient = idle.ambient_temp_F[0];
        CHECK(wh_step(ambient, 1, num_states, rated, idle, 0, dt_h) ==
              doctest::Approx(ambient));
    }
}
