#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "drsim/community.hpp"
#include "drsim/plan.hpp"

namespace drsim {

struct OrderPolicy {
    enum class Kind { Generation, Shuffle, Explicit };
    Kind kind = Kind::Generation;
    std::uint64_t shuffle_seed = 0;
    std::vector<int> explicit_order;
};

// One sweep value: either a scalar applied to every applicable class or a
// per-class map (e.g. {"AC": 2, "WH": 4}).
struct AxisValue {
    std::optional<double> scalar;
    std::map<std::string, double> per_class;

    std::string label() const;  // compact CSV cell, e.g. "2" or "AC=2|WH=4"
};

struct SweepAxis {
    std::string param;  // num_states | max_duration_min | max_deviation_F |
                        // beta | max_delay_min | reference_temp_F
    std::vector<AxisValue> values;
};

struct ScenarioConfig {
    CommunityConfig community;
    EngagementPlan plan;
    std::uint64_t seed = 0;
    bool thermostat_first = false;
    OrderPolicy order;
    std::vector<SweepAxis> sweep_axes;
};

// Parses a scenario file. Schema problems (missing or mistyped fields) throw
// ConfigError naming the field path. Semantic problems are collected by
// validate_scenario so the validate verb can report them all at once.
ScenarioConfig load_scenario(const std::filesystem::path& path);

// Semantic checks: slot divisibility, midnight spill-over, plan/class
// consistency, thermal sanity, sweep axes. Returns every violation found.
std::vector<std::string> validate_scenario(const ScenarioConfig& config);

// Plan copy with one sweep value applied. Throws on unknown param/class.
void apply_axis_value(const std::string& param, const AxisValue& value, EngagementPlan& plan,
                      std::optional<int>& num_states_override);

}  // namespace drsim
