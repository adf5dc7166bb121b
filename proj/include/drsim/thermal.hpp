#pragma once

#include <vector>

#include "drsim/profile.hpp"

namespace drsim {

struct ThermostatLoad;
struct StateMatrix;

// AC thermal parameters. The room warms at heat_gain_kw(t) and the AC removes
// heat at EER * input watts (BTU/hr). alpha is the energy for a 1°F rise of
// the conditioned space.
struct AcParams {
    double alpha_kwh_per_F = 2.5;
    double eer = 10.0;  // BTU/hr per W of input; US floor is 8.0
    std::vector<double> heat_gain_kw;  // length T, thermal gain G(t)
};

// WH tank parameters. draw_gal(t) is the hot water drawn during slot t
// (already a per-slot quantity, not a rate); it never exceeds the tank.
struct WhParams {
    double tank_volume_gal = 80.0;
    double tank_area_sqft = 24.0;
    double tank_resistance = 16.0;  // h·ft²·°F per BTU
    double inlet_temp_F = 60.0;
    double water_kwh_per_gal_F = units::kWaterKwhPerGalF;
    std::vector<double> draw_gal;        // length T
    std::vector<double> ambient_temp_F;  // length T
};

// Power drawn in state k of K: linear throttle from 0 (k=1) to rated (k=K).
double throttle_power(int k, int num_states, double rated_kw);

// Cooling capacity in BTU/hr for an AC drawing q kW: EER * (q * 1000).
double cooling_capacity(const AcParams& params, double q_kw);

// One slot of room temperature evolution. Cooling acts only while the AC is
// demanded (w = 1); the capacity term is subtracted since it removes heat.
double ac_step(double theta_F, int k, int num_states, double rated_kw, const AcParams& params,
               bool demanded, int t, double dt_hours);

// One slot of tank temperature evolution: inlet mixing, electric heating,
// standing loss to ambient.
double wh_step(double theta_F, int k, int num_states, double rated_kw, const WhParams& params,
               int t, double dt_hours);

// Forward recursion over the whole day driven by a state matrix. Temperature
// is pinned to the set point at the start of every demand window (the device
// tracked its set point before intervention); outside windows the device is
// undemanded (w=0 for AC, q=0 and no draw for WH).
std::vector<double> simulate_temperature(const TimeGrid& grid, const ThermostatLoad& load,
                                         const StateMatrix& states, double initial_temp_F);

}  // namespace drsim
