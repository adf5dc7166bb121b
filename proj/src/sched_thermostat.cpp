#include "drsim/sched_thermostat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "drsim/errors.hpp"

namespace drsim {
namespace thermostat {

std::vector<int> find_local_peaks(const LoadProfile& profile, const std::vector<int>& window_slots,
                                  int count) {
    std::vector<int> slots = window_slots;
    std::sort(slots.begin(), slots.end(), [&](int a, int b) {
        if (profile[a] != profile[b]) return profile[a] > profile[b];
        return a < b;
    });
    if (static_cast<int>(slots.size()) > count) slots.resize(std::max(count, 0));
    return slots;
}

namespace {

LoadProfile scheduled_power(const TimeGrid& grid, const ThermostatLoad& device,
                            const StateMatrix& states) {
    LoadProfile p(grid.slots);
    for (const Interval& w : device.demand_windows)
        for (int t = w.start; t < w.end(); ++t)
            p[t] = throttle_power(states.state[t], device.num_states, device.rated_kw);
    return p;
}

// Worst violation of |theta - set| <= severity across demanded slots, or a
// negative value when the constraint holds everywhere.
double worst_violation(const ThermostatLoad& device, const std::vector<double>& theta,
                       double severity_F) {
    double worst = -1.0;
    for (const Interval& w : device.demand_windows)
        for (int t = w.start; t < w.end(); ++t)
            worst = std::max(worst, std::abs(theta[t] - device.set_point_F) - severity_F);
    return worst;
}

}  // namespace

ThermostatResult control_device(const LoadProfile& background, const TimeGrid& grid,
                                const ThermostatLoad& device, double severity_F,
                                int duration_slots) {
    ThermostatResult result;
    result.states = StateMatrix::full_power(grid.slots, device.num_states, device.demand_windows);

    const std::vector<int> window = device.window_slots();
    const bool untouched = severity_F <= 0.0 || duration_slots <= 0 || window.empty();
    if (!untouched) {
        result.peak_slots = find_local_peaks(background, window, duration_slots);
        for (int t : result.peak_slots) result.states.state[t] = 1;  // OFF

        result.theta_F = simulate_temperature(grid, device, result.states, device.set_point_F);
        // Escalate one state at a time starting from the least significant
        // peak; a slot that reaches full power stops being a candidate. All
        // peaks at full power reproduces the untouched schedule, which holds
        // the set point exactly, so the loop always terminates.
        int pos = static_cast<int>(result.peak_slots.size()) - 1;
        while (worst_violation(device, result.theta_F, severity_F) > 0.0) {
            while (pos >= 0 && result.states.state[result.peak_slots[pos]] >= device.num_states)
                --pos;
            if (pos < 0)
                throw ModelError("thermostat escalation exhausted all states with the severity "
                                 "constraint still violated; thermal calibration is broken");
            result.states.state[result.peak_slots[pos]] += 1;
            result.theta_F = simulate_temperature(grid, device, result.states, device.set_point_F);
        }
    } else {
        result.theta_F = simulate_temperature(grid, device, result.states, device.set_point_F);
    }

    result.severity_trace.assign(grid.slots, 0.0);
    for (int t : window) result.severity_trace[t] = std::abs(result.theta_F[t] - device.set_point_F);
    result.power = scheduled_power(grid, device, result.states);
    result.denied_slots = result.states.denied_slots(device.demand_windows);
    return result;
}

ThermoCustomerResult schedule_customer(const LoadProfile& background, const TimeGrid& grid,
                                       const Customer& customer, const EngagementPlan& plan) {
    const int n = static_cast<int>(customer.thermostats.size());
    if (n > kMaxThermostatDevices)
        throw ConfigError("customer " + std::to_string(customer.id) + " has " + std::to_string(n) +
                          " thermostat devices; the factorial order search is capped at " +
                          std::to_string(kMaxThermostatDevices));

    ThermoCustomerResult best;
    best.results.resize(n);
    best.severities.assign(n, 0.0);

    // Severity and duration per device from the plan; devices without a term
    // are handled by the coordinator and never reach this point, but treat
    // them as ineligible for direct calls.
    std::vector<int> duration_slots(n, 0);
    std::vector<bool> eligible(n, false);
    for (int i = 0; i < n; ++i) {
        const ThermostatLoad& dev = customer.thermostats[i];
        const auto it = plan.thermostat_terms.find(dev.class_name);
        if (it == plan.thermostat_terms.end()) continue;
        const int slots = grid.minutes_to_slots(it->second.max_duration_minutes);
        if (slots < 0)
            throw ConfigError("class " + dev.class_name +
                              ": max_duration_min is not a multiple of the slot length");
        duration_slots[i] = slots;
        best.severities[i] = severity(it->second, dev.set_point_F, dev.kind);
        eligible[i] = best.severities[i] > 0.0 && slots > 0;
    }

    // Ineligible devices run untouched at full power; fold them into the
    // working background once so peak selection sees their demand.
    LoadProfile base = background;
    std::vector<int> controlled;
    for (int i = 0; i < n; ++i) {
        if (eligible[i]) {
            controlled.push_back(i);
        } else {
            best.results[i] = control_device(base, grid, customer.thermostats[i], 0.0, 0);
            base += best.results[i].power;
        }
    }

    if (controlled.empty()) {
        best.profile = base;
        best.peak = base.peak();
        return best;
    }

    bool first = true;
    std::vector<int> order = controlled;
    do {
        LoadProfile running = base;
        std::vector<ThermostatResult> results(n);
        for (int idx : order) {
            results[idx] =
                control_device(running, grid, customer.thermostats[idx], best.severities[idx],
                               duration_slots[idx]);
            running += results[idx].power;
        }
        const double peak = running.peak();
        if (first || peak < best.peak) {
            for (int idx : order) best.results[idx] = std::move(results[idx]);
            best.device_order = order;
            best.profile = std::move(running);
            best.peak = peak;
            first = false;
        }
    } while (std::next_permutation(order.begin(), order.end()));

    return best;
}

}  // namespace thermostat
}  // namespace drsim
