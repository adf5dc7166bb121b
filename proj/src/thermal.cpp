#include "drsim/thermal.hpp"

#include <cmath>

#include "drsim/community.hpp"
#include "drsim/errors.hpp"

namespace drsim {

double throttle_power(int k, int num_states, double rated_kw) {
    if (num_states < 2) throw ModelError("throttle_power: K must be >= 2");
    if (k < 1 || k > num_states) throw ModelError("throttle_power: state out of range");
    return rated_kw * static_cast<double>(k - 1) / static_cast<double>(num_states - 1);
}

double cooling_capacity(const AcParams& params, double q_kw) {
    return params.eer * q_kw * 1000.0;  // EER is BTU/hr per input watt
}

double ac_step(double theta_F, int k, int num_states, double rated_kw, const AcParams& params,
               bool demanded, int t, double dt_hours) {
    const double gain = dt_hours * params.heat_gain_kw[t] / params.alpha_kwh_per_F;
    double cooling = 0.0;
    if (demanded) {
        const double q_kw = throttle_power(k, num_states, rated_kw);
        const double capacity_kw = cooling_capacity(params, q_kw) / units::kBtuPerKwh;
        cooling = dt_hours * capacity_kw / params.alpha_kwh_per_F;
    }
    return theta_F + gain - cooling;
}

double wh_step(double theta_F, int k, int num_states, double rated_kw, const WhParams& params,
               int t, double dt_hours) {
    const double volume = params.tank_volume_gal;
    const double draw = params.draw_gal[t];  // gal drawn this slot
    const double mixed = (theta_F * (volume - draw) + params.inlet_temp_F * draw) / volume;
    const double q_kw = throttle_power(k, num_states, rated_kw);
    const double loss_kw = params.tank_area_sqft * (theta_F - params.ambient_temp_F[t]) /
                           params.tank_resistance / units::kBtuPerKwh;
    return mixed + (q_kw - loss_kw) * dt_hours / (params.water_kwh_per_gal_F * volume);
}

std::vector<double> simulate_temperature(const TimeGrid& grid, const ThermostatLoad& load,
                                         const StateMatrix& states, double initial_temp_F) {
    const int slots = grid.slots;
    const double dt_h = grid.dt_hours();
    std::vector<double> theta(slots, initial_temp_F);

    double prev = initial_temp_F;
    for (int t = 0; t < slots; ++t) {
        const bool demanded = load.demanded(t);
        const bool window_start = demanded && (t == 0 || !load.demanded(t - 1));
        if (window_start) prev = initial_temp_F;

        // Undemanded slots idle: AC gains heat with no cooling, WH sits OFF
        // with standing losses only. theta[t] is the temperature after
        // operating in state[t] during slot t.
        const int k = demanded ? states.state[t] : 1;
        if (std::holds_alternative<AcParams>(load.thermal)) {
            theta[t] = ac_step(prev, k, load.num_states, load.rated_kw,
                               std::get<AcParams>(load.thermal), demanded, t, dt_h);
        } else {
            theta[t] = wh_step(prev, k, load.num_states, load.rated_kw,
                               std::get<WhParams>(load.thermal), t, dt_h);
        }
        prev = theta[t];
    }
    return theta;
}

}  // namespace drsim
