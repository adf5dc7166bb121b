#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "drsim/community.hpp"
#include "drsim/plan.hpp"
#include "drsim/profile.hpp"

namespace drsim {

// One message of the operator/home exchange. Only profile-level data ever
// crosses the boundary: a digest, a peak and the phase bookkeeping. Set
// points and device records stay inside the home controller.
struct TraceEntry {
    std::string phase;      // "shiftable" | "thermostat"
    int customer_id = 0;
    std::string direction;  // "to_home" | "to_grid"
    std::string profile_digest;
    double peak_kw = 0.0;
};

struct ShiftScheduleRecord {
    std::string class_name;
    double rated_kw = 0.0;
    int duration_slots = 0;
    int preferred_start_slot = 0;
    int assigned_start_slot = 0;
    int delay_slots = 0;
};

struct ThermoScheduleRecord {
    std::string class_name;
    double rated_kw = 0.0;
    int num_states = 0;
    double severity_F = 0.0;
    bool eligible = false;
    int demanded_slots = 0;
    int denied_slots = 0;
    double max_deviation_F = 0.0;  // realized, over demanded slots
    double avg_deviation_F = 0.0;  // realized, over demanded slots
};

struct CustomerScheduleRecord {
    int customer_id = 0;
    std::vector<ShiftScheduleRecord> shiftables;
    std::vector<ThermoScheduleRecord> thermostats;
};

struct SimulationReport {
    int num_customers = 0;
    int slots = 0;
    double dt_minutes = 0.0;
    std::string phase_order;  // "shiftable_first" | "thermostat_first"

    double peak_before_kw = 0.0;
    double peak_after_shiftable_kw = 0.0;   // after the shiftable phase ran
    double peak_after_thermostat_kw = 0.0;  // after the thermostat phase ran
    double percent_peak_reduction = 0.0;    // 100 (max x - max final) / max x

    double energy_before_kwh = 0.0;
    double energy_after_kwh = 0.0;

    // Keyed by thermostat class name.
    std::map<std::string, int> eligible_counts;
    std::map<std::string, double> avg_severity_F;       // mean severity over eligible loads
    std::map<std::string, double> avg_realized_dev_F;   // mean realized deviation, demanded slots

    LoadProfile profile_before;        // x
    LoadProfile profile_after_phase1;  // x_hat
    LoadProfile profile_after_phase2;  // x_tilde

    std::vector<CustomerScheduleRecord> customers;
    std::vector<TraceEntry> trace;
};

struct EvalOptions {
    bool thermostat_first = false;
    std::optional<int> num_states_override;  // replaces K on every thermostat
    std::vector<int> customer_order;         // empty: generation order
};

// Sequential fold over customers: each home controller receives the running
// aggregate with its own class demands removed, schedules, and returns the
// updated aggregate. Only LoadProfiles cross the boundary (trace records the
// exchange). Returns the final profile of the phase.
LoadProfile run_phase_shiftable(const LoadProfile& x, const Community& community,
                                const EngagementPlan& plan, const std::vector<int>& order,
                                SimulationReport& report);
LoadProfile run_phase_thermostat(const LoadProfile& x_hat, const Community& community,
                                 const EngagementPlan& plan, const std::vector<int>& order,
                                 SimulationReport& report);

// Full evaluation: aggregate, both phases in the configured order, metrics,
// and a hard verification of every schedule against the plan constraints.
SimulationReport evaluate_plan(const Community& community, const EngagementPlan& plan,
                               const EvalOptions& options = {});

}  // namespace drsim
