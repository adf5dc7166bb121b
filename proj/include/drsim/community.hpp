#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "drsim/plan.hpp"
#include "drsim/profile.hpp"
#include "drsim/thermal.hpp"

namespace drsim {

// Half-open slot range [start, start + length).
struct Interval {
    int start = 0;
    int length = 0;

    int end() const { return start + length; }
};

// T×K binary operational-state matrix, stored as one state index per slot.
// state[t] in 1..K on demanded slots (a device operates in exactly one state
// per slot), 0 on slots where the device draws no scheduled power.
struct StateMatrix {
    int num_states = 0;  // K
    std::vector<int> state;

    static StateMatrix full_power(int slots, int num_states, const std::vector<Interval>& windows);

    bool entry(int t, int k) const { return state[t] == k; }
    // Demanded slots not at full rated power (counts against Δd_max).
    int denied_slots(const std::vector<Interval>& windows) const;
};

struct ShiftableLoad {
    std::string class_name;
    double rated_kw = 0.0;
    int duration_slots = 0;
    int preferred_start_slot = 0;
};

struct ThermostatLoad {
    std::string class_name;
    LoadKind kind = LoadKind::ThermostatCooling;
    double rated_kw = 0.0;
    int num_states = 2;  // K >= 2
    double set_point_F = 0.0;
    std::vector<Interval> demand_windows;  // sorted, disjoint
    std::variant<AcParams, WhParams> thermal;

    bool demanded(int t) const;
    std::vector<int> window_slots() const;
    int demanded_slot_count() const;
};

struct Customer {
    int id = 0;
    LoadProfile base_load;  // essential appliances, always served
    std::vector<ShiftableLoad> shiftables;
    std::vector<ThermostatLoad> thermostats;
};

struct Community {
    TimeGrid grid;
    std::vector<Customer> customers;
};

// --- configuration -----------------------------------------------------

// Per-class static properties shared by every instance of the class.
struct ClassSpec {
    std::string name;
    LoadKind kind = LoadKind::Shiftable;
    double rated_kw = 0.0;
    int num_states = 2;  // thermostat classes only
    // AC thermal template (heat gain is calibrated per home).
    double alpha_kwh_per_F = 2.5;
    double eer = 10.0;
    // WH thermal template (draw profile is calibrated per home).
    double tank_volume_gal = 80.0;
    double tank_area_sqft = 24.0;
    double tank_resistance = 16.0;
    double inlet_temp_F = 60.0;
    double ambient_temp_F = 75.0;
};

// How device instances of one class are sampled for a generated community.
struct GenClassSpec {
    // Operating duration band, minutes (single value when lo == hi).
    int duration_min_lo = 0;
    int duration_min_hi = 0;
    // Separate operation instances per day (thermostats may have several).
    int instances_lo = 1;
    int instances_hi = 1;
    // Start-of-window sampling band, minutes since midnight.
    int start_band_lo_min = 0;
    int start_band_hi_min = 0;
    // Set point band, °F, sampled on a 1°F lattice (thermostat classes).
    double set_point_lo_F = 0.0;
    double set_point_hi_F = 0.0;
    // Tail slots reserved for scheduling delay (shiftable classes): the
    // sampled start always leaves room for the largest delay in the scenario.
    int reserve_tail_slots = 0;
};

struct ExplicitDeviceSpec {
    std::string class_name;
    std::optional<double> set_point_F;
    std::optional<int> preferred_start_min;
    std::optional<int> duration_min;               // shiftable classes
    std::vector<std::pair<int, int>> windows_min;  // [start, end) minutes
    std::optional<int> num_states;
};

struct ExplicitCustomerSpec {
    double base_load_kw = 0.0;  // constant base, kW
    std::vector<ExplicitDeviceSpec> devices;
};

struct CommunityConfig {
    TimeGrid grid;
    int num_customers = 0;
    double target_daily_kwh = 41.0;
    std::vector<ClassSpec> classes;
    // Exactly one of the two is used: sampled generation or explicit homes.
    std::map<std::string, GenClassSpec> generation;
    std::vector<ExplicitCustomerSpec> explicit_customers;
    std::vector<double> load_curve;  // normalized daily shape, any length >= 2

    const ClassSpec* find_class(const std::string& name) const;
};

// --- operations ---------------------------------------------------------

// Demanded power vector p = rated * w: rated power over the demand window
// (at the preferred position for shiftables), zero elsewhere.
LoadProfile demanded_profile(const TimeGrid& grid, const ShiftableLoad& load);
LoadProfile demanded_profile(const TimeGrid& grid, const ThermostatLoad& load);

// Pointwise sum of base loads plus all demanded device profiles.
LoadProfile aggregate(const Community& community);

// Deterministic community synthesis: same config and seed, same community.
Community generate_community(const CommunityConfig& config, std::uint64_t seed);

// Bundled normalized summer load-curve shape (288 values, sums to 1).
const std::vector<double>& bundled_load_curve();

// Resamples a normalized shape onto a grid with T slots; output sums to 1.
std::vector<double> resample_curve(const std::vector<double>& curve, int slots);

// Calibration used by the generator and by explicit-community loading:
// full-power operation holds the set point exactly during demand windows.
void calibrate_thermostat(const TimeGrid& grid, ThermostatLoad& load);

}  // namespace drsim
