#pragma once

#include <map>
#include <string>

namespace drsim {

enum class LoadKind { Shiftable, ThermostatCooling, ThermostatHeating };

inline bool is_thermostat(LoadKind k) { return k != LoadKind::Shiftable; }

const char* load_kind_name(LoadKind kind);

// Flexible-load class as announced in an engagement plan (e.g. AC, WH, CD).
struct LoadClassId {
    std::string name;
    LoadKind kind = LoadKind::Shiftable;

    bool operator==(const LoadClassId&) const = default;
};

enum class PlanMode { CDP, PDP };

const char* plan_mode_name(PlanMode mode);

// Plan term for a shiftable class: how far its start may be delayed.
struct ShiftablePlanTerm {
    int max_delay_minutes = 0;  // Δs_max
};

// Plan term for a thermostat class. `mode` selects which deviation field
// applies: CDP caps the deviation at max_deviation_F, PDP scales the gap to
// the reference temperature by beta (0 < beta <= 1).
struct ThermostatPlanTerm {
    int max_duration_minutes = 0;   // Δd_max: time denied full rated power
    double reference_temp_F = 0.0;  // bounds output temps, gates eligibility
    PlanMode mode = PlanMode::CDP;
    double max_deviation_F = 0.0;  // CDP only
    double beta = 0.0;             // PDP only
};

// A CDP or PDP: one term per flexible-load class. All thermostat terms share
// the plan's mode; mixed-mode plans are rejected at config load.
struct EngagementPlan {
    PlanMode mode = PlanMode::CDP;
    std::map<std::string, ShiftablePlanTerm> shiftable_terms;
    std::map<std::string, ThermostatPlanTerm> thermostat_terms;

    bool has_shiftable_term(const std::string& class_name) const {
        return shiftable_terms.count(class_name) > 0;
    }
    bool has_thermostat_term(const std::string& class_name) const {
        return thermostat_terms.count(class_name) > 0;
    }
};

// Inconvenience severity: the allowed deviation of the output temperature
// from the customer's set point, given the plan term. Always >= 0.
//
//   CDP cooling:  (min(ref - set, dev_max))+     heating: (min(set - ref, dev_max))+
//   PDP cooling:  beta * (ref - set)+            heating: beta * (set - ref)+
double severity(const ThermostatPlanTerm& term, double set_point_F, LoadKind kind);

// Eligible loads have severity > 0; ineligible loads are never state-controlled.
bool is_eligible(const ThermostatPlanTerm& term, double set_point_F, LoadKind kind);

}  // namespace drsim
