#include "drsim/sched_shiftable.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

#include "drsim/errors.hpp"

namespace drsim {

LoadProfile circular_shift(const LoadProfile& profile) {
    LoadProfile out(profile.size());
    if (profile.size() == 0) return out;
    out[0] = profile[profile.size() - 1];
    for (int t = 1; t < profile.size(); ++t) out[t] = profile[t - 1];
    return out;
}

namespace shiftable {

Placement place_device(const LoadProfile& background, const LoadProfile& device_profile,
                       int max_delay_slots) {
    Placement best;
    LoadProfile shifted = device_profile;
    for (int delay = 0; delay <= max_delay_slots; ++delay) {
        const LoadProfile candidate = background + shifted;
        const double peak = candidate.peak();
        if (delay == 0 || peak < best.peak) {
            best.delay_slots = delay;
            best.combined = candidate;
            best.peak = peak;
        }
        shifted = circular_shift(shifted);
    }
    return best;
}

ShiftResult schedule_customer(const LoadProfile& background, const TimeGrid& grid,
                              const Customer& customer, const EngagementPlan& plan) {
    const int n = static_cast<int>(customer.shiftables.size());
    if (n > kMaxShiftableDevices)
        throw ConfigError("customer " + std::to_string(customer.id) + " has " + std::to_string(n) +
                          " shiftable devices; the factorial order search is capped at " +
                          std::to_string(kMaxShiftableDevices) +
                          " (sample or split the device set)");

    ShiftResult best;
    if (n == 0) {
        best.profile = background;
        best.peak = background.peak();
        return best;
    }

    std::vector<LoadProfile> profiles;
    std::vector<int> max_delay(n, 0);
    for (int i = 0; i < n; ++i) {
        const ShiftableLoad& dev = customer.shiftables[i];
        profiles.push_back(demanded_profile(grid, dev));
        if (const auto it = plan.shiftable_terms.find(dev.class_name);
            it != plan.shiftable_terms.end()) {
            const int slots = grid.minutes_to_slots(it->second.max_delay_minutes);
            if (slots < 0)
                throw ConfigError("class " + dev.class_name +
                                  ": max_delay_min is not a multiple of the slot length");
            max_delay[i] = slots;
        }
        // The spill-over rule is validated at load time; assert it here so a
        // wrapped shift can never silently corrupt a schedule.
        assert(dev.preferred_start_slot + dev.duration_slots + max_delay[i] <= grid.slots);
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    bool first = true;
    do {
        LoadProfile running = background;
        std::vector<int> delays(n, 0);
        for (int idx : order) {
            Placement placed = place_device(running, profiles[idx], max_delay[idx]);
            delays[idx] = placed.delay_slots;
            running = std::move(placed.combined);
        }
        const double peak = running.peak();
        // Strict improvement keeps the lexicographically first best order
        // (std::next_permutation enumerates orders in lexicographic order).
        if (first || peak < best.peak) {
            best.delay_slots = delays;
            best.device_order = order;
            best.profile = std::move(running);
            best.peak = peak;
            first = false;
        }
    } while (std::next_permutation(order.begin(), order.end()));

    return best;
}

}  // namespace shiftable
}  // namespace drsim
