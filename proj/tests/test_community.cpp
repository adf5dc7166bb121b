#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "drsim/community.hpp"
#include "drsim/errors.hpp"

using namespace drsim;

namespace {

constexpr TimeGrid kGrid{288};

CommunityConfig default_config(int homes) {
    CommunityConfig config;
    config.grid = kGrid;
    config.num_customers = homes;
    config.target_daily_kwh = 41.0;

    ClassSpec ac{"AC", LoadKind::ThermostatCooling, 5.0, 2, 2.5, 10.0, 80, 24, 16, 60, 75};
    ClassSpec wh{"WH", LoadKind::ThermostatHeating, 2.5, 2, 2.5, 10.0, 80, 24, 16, 60, 75};
    ClassSpec cd{"CD", LoadKind::Shiftable, 3.1, 2, 2.5, 10.0, 80, 24, 16, 60, 75};
    ClassSpec dw{"DW", LoadKind::Shiftable, 1.8, 2, 2.5, 10.0, 80, 24, 16, 60, 75};
    config.classes = {ac, wh, cd, dw};

    GenClassSpec gen_ac;
    gen_ac.duration_min_lo = gen_ac.duration_min_hi = 240;
    gen_ac.start_band_lo_min = 640;
    gen_ac.start_band_hi_min = 1160;
    gen_ac.set_point_lo_F = 68;
    gen_ac.set_point_hi_F = 76;
    GenClassSpec gen_wh;
    gen_wh.duration_min_lo = 60;
    gen_wh.duration_min_hi = 120;
    gen_wh.instances_lo = 2;
    gen_wh.instances_hi = 3;
    gen_wh.start_band_lo_min = 300;
    gen_wh.start_band_hi_min = 1320;
    gen_wh.set_point_lo_F = 104;
    gen_wh.set_point_hi_F = 120;
    GenClassSpec gen_cd;
    gen_cd.duration_min_lo = gen_cd.duration_min_hi = 120;
    gen_cd.start_band_lo_min = 540;
    gen_cd.start_band_hi_min = 1200;
    gen_cd.reserve_tail_slots = 12;  // one hour of delay
    GenClassSpec gen_dw;
    gen_dw.duration_min_lo = gen_dw.duration_min_hi = 90;
    gen_dw.start_band_lo_min = 600;
    gen_dw.start_band_hi_min = 1260;
    gen_dw.reserve_tail_slots = 12;
    config.generation = {{"AC", gen_ac}, {"WH", gen_wh}, {"CD", gen_cd}, {"DW", gen_dw}};
    return config;
}

}  // namespace

TEST_CASE("demanded_profile: rated power over the demand window") {
    ShiftableLoad cd{"CD", 3.1, 24, 200};
    const LoadProfile p = demanded_profile(kGrid, cd);
    for (int t = 0; t < kGrid.slots; ++t)
        CHECK(p[t] == ((t >= 200 && t < 224) ? 3.1 : 0.0));

    ThermostatLoad wh;
    wh.class_name = "WH";
    wh.kind = LoadKind::ThermostatHeating;
    wh.rated_kw = 2.5;
    wh.set_point_F = 110;
    wh.demand_windows = {{96, 18}, {200, 24}};
    wh.thermal = WhParams{};
    const LoadProfile q = demanded_profile(kGrid, wh);
    double energy = 0;
    for (int t = 0; t < kGrid.slots; ++t) {
        CHECK(q[t] == (wh.demanded(t) ? 2.5 : 0.0));
        energy += q[t];
    }
    CHECK(energy == doctest::Approx(2.5 * 42));

    ThermostatLoad empty = wh;
    empty.demand_windows.clear();
    CHECK(demanded_profile(kGrid, empty).peak() == 0.0);
}

TEST_CASE("aggregate: pointwise sums") {
    Community community;
    community.grid = kGrid;
    Customer a, b;
    a.id = 0;
    a.base_load = LoadProfile(kGrid.slots, 1.0);
    b.id = 1;
    b.base_load = LoadProfile(kGrid.slots, 1.0);
    community.customers = {a, b};
    const LoadProfile x = aggregate(community);
    for (int t = 0; t < kGrid.slots; ++t) CHECK(x[t] == 2.0);

    community.customers = {a};
    const LoadProfile xa = aggregate(community);
    for (int t = 0; t < kGrid.slots; ++t) CHECK(xa[t] == 1.0);
}

TEST_CASE("aggregate equals a brute-force sum over all device profiles") {
    const Community community = generate_community(default_config(50), 99);
    const LoadProfile x = aggregate(community);
    // Independent summation: accumulate slot by slot straight off the records.
    std::vector<double> expected(kGrid.slots, 0.0);
    for (const Customer& c : community.customers) {
        for (int t = 0; t < kGrid.slots; ++t) expected[t] += c.base_load[t];
        for (const ShiftableLoad& s : c.shiftables)
            for (int t = s.preferred_start_slot; t < s.preferred_start_slot + s.duration_slots; ++t)
                expected[t] += s.rated_kw;
        for (const ThermostatLoad& th : c.thermostats)
            for (const Interval& w : th.demand_windows)
                for (int t = w.start; t < w.end(); ++t) expected[t] += th.rated_kw;
    }
    for (int t = 0; t < kGrid.slots; ++t) CHECK(x[t] == doctest::Approx(expected[t]));
}

TEST_CASE("aggregate is permutation-invariant over customers") {
    Community community = generate_community(default_config(20), 5);
    const LoadProfile x = aggregate(community);
    std::reverse(community.customers.begin(), community.customers.end());
    const LoadProfile y = aggregate(community);
    for (int t = 0; t < kGrid.slots; ++t) CHECK(x[t] == doctest::Approx(y[t]));
}

TEST_CASE("generate_community: determinism and structural invariants") {
    const CommunityConfig config = default_config(40);
    const Community a = generate_community(config, 1234);
    const Community b = generate_community(config, 1234);
    REQUIRE(a.customers.size() == b.customers.size());
    const LoadProfile xa = aggregate(a), xb = aggregate(b);
    for (int t = 0; t < kGrid.slots; ++t) CHECK(xa[t] == xb[t]);

    const Community c = generate_community(config, 1235);
    bool any_diff = false;
    const LoadProfile xc = aggregate(c);
    for (int t = 0; t < kGrid.slots; ++t) any_diff |= xa[t] != xc[t];
    CHECK(any_diff);

    for (const Customer& customer : a.customers) {
        double energy = customer.base_load.energy_kwh(kGrid);
        for (const ShiftableLoad& s : customer.shiftables) {
            energy += s.rated_kw * s.duration_slots * kGrid.dt_hours();
            // Room for the reserved delay before midnight.
            CHECK(s.preferred_start_slot + s.duration_slots + 12 <= kGrid.slots);
        }
        for (const ThermostatLoad& th : customer.thermostats) {
            energy += th.rated_kw * th.demanded_slot_count() * kGrid.dt_hours();
            // Set points on the 1°F lattice inside the band.
            CHECK(th.set_point_F == std::floor(th.set_point_F));
            if (th.kind == LoadKind::ThermostatCooling) {
                CHECK(th.set_point_F >= 68);
                CHECK(th.set_point_F <= 76);
                CHECK(th.demand_windows.size() == 1);
            } else {
                CHECK(th.set_point_F >= 104);
                CHECK(th.set_point_F <= 120);
                CHECK(th.demand_windows.size() >= 2);
                CHECK(th.demand_windows.size() <= 3);
                for (size_t i = 1; i < th.demand_windows.size(); ++i)
                    CHECK(th.demand_windows[i].start > th.demand_windows[i - 1].end());
            }
            for (const Interval& w : th.demand_windows) {
                CHECK(w.start >= 0);
                CHECK(w.end() <= kGrid.slots);
            }
        }
        // Daily energy within ±10% of the target.
        CHECK(energy >= 0.9 * 41.0);
        CHECK(energy <= 1.1 * 41.0);
        for (int t = 0; t < kGrid.slots; ++t) CHECK(customer.base_load[t] >= 0.0);
    }
}

TEST_CASE("generate_community: explicit single home with no devices") {
    CommunityConfig config = default_config(1);
    config.generation.clear();
    config.explicit_customers = {ExplicitCustomerSpec{0.8, {}}};
    const Community community = generate_community(config, 7);
    const LoadProfile x = aggregate(community);
    for (int t = 0; t < kGrid.slots; ++t) CHECK(x[t] == 0.8);
}

TEST_CASE("generate_community: infeasible energy target names the class") {
    CommunityConfig config = default_config(3);
    config.target_daily_kwh = 10.0;  // AC alone already needs 20 kWh
    CHECK_THROWS_WITH_AS(generate_community(config, 1),
                         doctest::Contains("largest class AC"), ConfigError);
}

TEST_CASE("generated 1000-home aggregate peaks near the calibrated target") {
    CommunityConfig config = default_config(1000);
    for (ClassSpec& cls : config.classes)
        if (is_thermostat(cls.kind)) cls.num_states = 5;
    const Community community = generate_community(config, 2024);
    const double peak = aggregate(community).peak();
    // The bundled curve and default usage bands are calibrated so the
    // untouched aggregate peaks near 3701 kW at 1000 homes.
    CHECK(peak > 3701.0 * 0.95);
    CHECK(peak < 3701.0 * 1.05);
}

TEST_CASE("resample_curve: normalization on any grid") {
    const std::vector<double>& curve = bundled_load_curve();
    REQUIRE(curve.size() == 288);
    const auto same = resample_curve(curve, 288);
    CHECK(std::accumulate(same.begin(), same.end(), 0.0) == doctest::Approx(1.0));
    const auto coarse = resample_curve(curve, 96);
    CHECK(std::accumulate(coarse.begin(), coarse.end(), 0.0) == doctest::Approx(1.0));
    CHECK(*std::min_element(coarse.begin(), coarse.end()) >= 0.0);
}
