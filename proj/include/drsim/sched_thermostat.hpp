#pragma once

#include <vector>

#include "drsim/community.hpp"
#include "drsim/plan.hpp"
#include "drsim/profile.hpp"

namespace drsim {

namespace thermostat {

// The `count` slots of `window_slots` carrying the largest profile values,
// ordered by descending value; ties go to the earlier slot. `count` is
// clamped to the window size; an empty window yields an empty vector.
std::vector<int> find_local_peaks(const LoadProfile& profile, const std::vector<int>& window_slots,
                                  int count);

struct ThermostatResult {
    StateMatrix states;
    std::vector<double> theta_F;          // realized temperature, length T
    std::vector<double> severity_trace;   // |theta - set point| on demanded slots, else 0
    std::vector<int> peak_slots;          // the targeted local peaks, descending by value
    LoadProfile power;                    // scheduled consumption (Q ⊙ C) 1
    int denied_slots = 0;                 // demanded slots not at full rated power
};

// Deny full power at the window's highest local peaks, then escalate power
// states from the least significant peak upward until the temperature stays
// within `severity_F` of the set point at every demanded slot. `background`
// must exclude this device's own demanded power.
ThermostatResult control_device(const LoadProfile& background, const TimeGrid& grid,
                                const ThermostatLoad& device, double severity_F,
                                int duration_slots);

struct ThermoCustomerResult {
    LoadProfile profile;                       // background + all devices as controlled
    std::vector<int> device_order;             // best order over eligible devices
    std::vector<ThermostatResult> results;     // indexed like customer.thermostats
    std::vector<double> severities;            // severity per device
    double peak = 0.0;
};

// Runs control_device over every permutation of the customer's eligible
// thermostats and keeps the order with the lowest final peak. `background`
// must exclude this customer's thermostat demands; ineligible devices are
// added back untouched at full power before any control decision.
ThermoCustomerResult schedule_customer(const LoadProfile& background, const TimeGrid& grid,
                                       const Customer& customer, const EngagementPlan& plan);

inline constexpr int kMaxThermostatDevices = 8;

}  // namespace thermostat
}  // namespace drsim
