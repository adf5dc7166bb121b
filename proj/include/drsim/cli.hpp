#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "drsim/config.hpp"
#include "drsim/coordinator.hpp"

namespace drsim {

struct RunOverrides {
    std::optional<std::uint64_t> seed;
};

// Customer processing order per the scenario's order policy.
std::vector<int> resolve_customer_order(const ScenarioConfig& config, int num_customers);

// Builds the seeded community and evaluates the scenario's plan on it.
SimulationReport evaluate_scenario(const ScenarioConfig& config, const Community& community);

// Serialized report (stable field order); the exact bytes written to
// summary.json.
std::string report_to_json(const SimulationReport& report);

// run: summary.json, profiles.csv, schedules.csv, trace.jsonl under out_dir.
int cmd_run(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
            const RunOverrides& overrides);

// sweep: long-format sweep.csv, one row per grid point, under out_dir.
int cmd_sweep(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
              const RunOverrides& overrides, int workers);

// validate: prints violations (or "ok"); exit code reflects validity.
int cmd_validate(const std::filesystem::path& config_path);

}  // namespace drsim
