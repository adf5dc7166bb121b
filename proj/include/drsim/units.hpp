#pragma once

// Unit conversion constants. Everything downstream works in kW, kWh, °F,
// gallons and minutes; conversions go through this table only.

namespace drsim::units {

inline constexpr double kBtuPerKwh = 3412.14;

// Heat capacity of water: 1 BTU/(lb·°F) at 8.33 lb/gal, expressed in kWh.
inline constexpr double kWaterBtuPerGalF = 8.33;
inline constexpr double kWaterKwhPerGalF = kWaterBtuPerGalF / kBtuPerKwh;

// 1 ton of cooling capacity.
inline constexpr double kBtuPerHrPerTon = 12000.0;

inline constexpr double kMinutesPerDay = 1440.0;

}  // namespace drsim::units
