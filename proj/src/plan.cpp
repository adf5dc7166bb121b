#include "drsim/plan.hpp"

#include <algorithm>

#include "drsim/errors.hpp"

namespace drsim {

const char* load_kind_name(LoadKind kind) {
    switch (kind) {
        case LoadKind::Shiftable: return "shiftable";
        case LoadKind::ThermostatCooling: return "thermostat_cooling";
        case LoadKind::ThermostatHeating: return "thermostat_heating";
    }
    return "?";
}

const char* plan_mode_name(PlanMode mode) { return mode == PlanMode::CDP ? "CDP" : "PDP"; }

double severity(const ThermostatPlanTerm& term, double set_point_F, LoadKind kind) {
    if (!is_thermostat(kind)) throw ModelError("severity: shiftable class has no severity");
    // Gap toward the reference: positive when the set point lies on the
    // intervention side of the reference temperature.
    const double gap = kind == LoadKind::ThermostatCooling
                           ? term.reference_temp_F - set_point_F
                           : set_point_F - term.reference_temp_F;
    double dev;
    if (term.mode == PlanMode::CDP) {
        dev = std::min(gap, term.max_deviation_F);
    } else {
        dev = term.beta * std::max(gap, 0.0);
    }
    return std::max(dev, 0.0);
}

bool is_eligible(const ThermostatPlanTerm& term, double set_point_F, LoadKind kind) {
    return severity(term, set_point_F, kind) > 0.0;
}

}  // namespace drsim
