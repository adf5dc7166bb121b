#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drsim/units.hpp"

namespace drsim {

// The discretized day: T slots of dt = 1440/T minutes each.
struct TimeGrid {
    int slots = 0;  // T

    double dt_minutes() const { return units::kMinutesPerDay / slots; }
    double dt_hours() const { return 24.0 / slots; }

    // Converts a duration in minutes to a whole number of slots.
    // Returns -1 when the duration is not a multiple of dt.
    int minutes_to_slots(double minutes) const;

    bool valid() const { return slots >= 1; }
};

// kW time series of length T. All entries stay >= 0 for physical loads;
// intermediate arithmetic (removing a device from an aggregate) may dip
// below only to be restored before the value escapes a scheduler.
struct LoadProfile {
    std::vector<double> kw;

    LoadProfile() = default;
    explicit LoadProfile(int slots, double fill = 0.0) : kw(slots, fill) {}

    int size() const { return static_cast<int>(kw.size()); }
    double& operator[](int t) { return kw[t]; }
    double operator[](int t) const { return kw[t]; }

    double peak() const;
    int peak_slot() const;  // earliest slot attaining the peak
    double total_kw() const;
    double energy_kwh(const TimeGrid& grid) const { return total_kw() * grid.dt_hours(); }

    LoadProfile& operator+=(const LoadProfile& other);
    LoadProfile& operator-=(const LoadProfile& other);
};

LoadProfile operator+(LoadProfile lhs, const LoadProfile& rhs);
LoadProfile operator-(LoadProfile lhs, const LoadProfile& rhs);

// FNV-1a over the raw double bits; used for the protocol trace digest.
std::uint64_t profile_digest(const LoadProfile& profile);
std::string digest_hex(std::uint64_t digest);

}  // namespace drsim
