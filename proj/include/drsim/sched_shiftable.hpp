#pragma once

#include <vector>

#include "drsim/community.hpp"
#include "drsim/plan.hpp"
#include "drsim/profile.hpp"

namespace drsim {

// Rotate one slot to the right; the last entry wraps to the front.
LoadProfile circular_shift(const LoadProfile& profile);

namespace shiftable {

struct Placement {
    int delay_slots = 0;     // l*
    LoadProfile combined;    // background + device at the chosen delay
    double peak = 0.0;
};

// Try every delay in 0..max_delay_slots and keep the one minimizing the peak
// of background + shifted device. Ties break toward the smallest delay.
Placement place_device(const LoadProfile& background, const LoadProfile& device_profile,
                       int max_delay_slots);

struct ShiftResult {
    std::vector<int> delay_slots;    // per device, indexed like customer.shiftables
    std::vector<int> device_order;   // m*: processing order of device indexes
    LoadProfile profile;             // background + all devices as placed
    double peak = 0.0;
};

// Greedy placement (one device at a time onto the running profile) repeated
// for every device permutation; returns the best order's result. `background`
// must already exclude this customer's shiftable demands. Devices without a
// plan term keep their preferred slot (delay 0 with an empty candidate set).
ShiftResult schedule_customer(const LoadProfile& background, const TimeGrid& grid,
                              const Customer& customer, const EngagementPlan& plan);

// Largest device count the factorial order search will accept.
inline constexpr int kMaxShiftableDevices = 8;

}  // namespace shiftable
}  // namespace drsim
