#include "drsim/profile.hpp"

#include <cassert>
#include <cmath>
#include <cstdio>
#include <cstring>

namespace drsim {

int TimeGrid::minutes_to_slots(double minutes) const {
    const double slots_exact = minutes * slots / units::kMinutesPerDay;
    const double rounded = std::round(slots_exact);
    if (std::abs(slots_exact - rounded) > 1e-9) return -1;
    return static_cast<int>(rounded);
}

double LoadProfile::peak() const {
    double best = 0.0;
    for (double v : kw) best = std::max(best, v);
    return best;
}

int LoadProfile::peak_slot() const {
    int best = 0;
    for (int t = 1; t < size(); ++t)
        if (kw[t] > kw[best]) best = t;
    return best;
}

double LoadProfile::total_kw() const {
    double sum = 0.0;
    for (double v : kw) sum += v;
    return sum;
}

LoadProfile& LoadProfile::operator+=(const LoadProfile& other) {
    assert(kw.size() == other.kw.size());
    for (size_t t = 0; t < kw.size(); ++t) kw[t] += other.kw[t];
    return *this;
}

LoadProfile& LoadProfile::operator-=(const LoadProfile& other) {
    assert(kw.size() == other.kw.size());
    for (size_t t = 0; t < kw.size(); ++t) kw[t] -= other.kw[t];
    return *this;
}

LoadProfile operator+(LoadProfile lhs, const LoadProfile& rhs) {
    lhs += rhs;
    return lhs;
}

LoadProfile operator-(LoadProfile lhs, const LoadProfile& rhs) {
    lhs -= rhs;
    return lhs;
}

std::uint64_t profile_digest(const LoadProfile& profile) {
    std::uint64_t h = 14695981039346656037ULL;
    for (double v : profile.kw) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xffULL;
            h *= 1099511628211ULL;
        }
    }
    return h;
}

std::string digest_hex(std::uint64_t digest) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(digest));
    return buf;
}

}  // namespace drsim
