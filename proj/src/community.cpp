#include "drsim/community.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "drsim/errors.hpp"
#include "drsim/rng.hpp"

namespace drsim {

// --- StateMatrix ----------------------------------------------------------

StateMatrix StateMatrix::full_power(int slots, int num_states,
                                    const std::vector<Interval>& windows) {
    StateMatrix m;
    m.num_states = num_states;
    m.state.assign(slots, 0);
    for (const Interval& w : windows)
        for (int t = w.start; t < w.end(); ++t) m.state[t] = num_states;
    return m;
}

int StateMatrix::denied_slots(const std::vector<Interval>& windows) const {
    int denied = 0;
    for (const Interval& w : windows)
        for (int t = w.start; t < w.end(); ++t)
            if (state[t] != num_states) ++denied;
    return denied;
}

// --- ThermostatLoad -------------------------------------------------------

bool ThermostatLoad::demanded(int t) const {
    for (const Interval& w : demand_windows)
        if (t >= w.start && t < w.end()) return true;
    return false;
}

std::vector<int> ThermostatLoad::window_slots() const {
    std::vector<int> slots;
    for (const Interval& w : demand_windows)
        for (int t = w.start; t < w.end(); ++t) slots.push_back(t);
    return slots;
}

int ThermostatLoad::demanded_slot_count() const {
    int n = 0;
    for (const Interval& w : demand_windows) n += w.length;
    return n;
}

// --- profiles ---------------------------------------------------------------

LoadProfile demanded_profile(const TimeGrid& grid, const ShiftableLoad& load) {
    LoadProfile p(grid.slots);
    for (int t = load.preferred_start_slot; t < load.preferred_start_slot + load.duration_slots; ++t)
        p[t] = load.rated_kw;
    return p;
}

LoadProfile demanded_profile(const TimeGrid& grid, const ThermostatLoad& load) {
    LoadProfile p(grid.slots);
    for (const Interval& w : load.demand_windows)
        for (int t = w.start; t < w.end(); ++t) p[t] = load.rated_kw;
    return p;
}

LoadProfile aggregate(const Community& community) {
    LoadProfile x(community.grid.slots);
    for (const Customer& c : community.customers) {
        x += c.base_load;
        for (const ShiftableLoad& s : c.shiftables) x += demanded_profile(community.grid, s);
        for (const ThermostatLoad& th : c.thermostats) x += demanded_profile(community.grid, th);
    }
    return x;
}

// --- thermal calibration ----------------------------------------------------

const ClassSpec* CommunityConfig::find_class(const std::string& name) const {
    for (const ClassSpec& c : classes)
        if (c.name == name) return &c;
    return nullptr;
}

// Fixes the exogenous thermal drivers so that continuous full-power operation
// holds the set point exactly during demand windows:
//   AC: heat gain G = full-power cooling capacity (in kW thermal).
//   WH: per-slot draw such that full-power heating balances mixing plus loss.
void calibrate_thermostat(const TimeGrid& grid, ThermostatLoad& load) {
    if (std::holds_alternative<AcParams>(load.thermal)) {
        AcParams& ac = std::get<AcParams>(load.thermal);
        const double gain_kw = cooling_capacity(ac, load.rated_kw) / units::kBtuPerKwh;
        ac.heat_gain_kw.assign(grid.slots, gain_kw);
    } else {
        WhParams& wh = std::get<WhParams>(load.thermal);
        if (wh.ambient_temp_F.empty()) wh.ambient_temp_F.assign(grid.slots, 75.0);
        wh.draw_gal.assign(grid.slots, 0.0);
        const double loss_kw = wh.tank_area_sqft * (load.set_point_F - wh.ambient_temp_F[0]) /
                               wh.tank_resistance / units::kBtuPerKwh;
        if (load.rated_kw <= loss_kw) {
            std::ostringstream os;
            os << "class " << load.class_name << ": rated power " << load.rated_kw
               << " kW cannot sustain set point " << load.set_point_F << " F against standing loss";
            throw ConfigError(os.str());
        }
        if (load.set_point_F <= wh.inlet_temp_F) {
            std::ostringstream os;
            os << "class " << load.class_name << ": set point " << load.set_point_F
               << " F must exceed inlet temperature " << wh.inlet_temp_F << " F";
            throw ConfigError(os.str());
        }
        const double draw = (load.rated_kw - loss_kw) * grid.dt_hours() /
                            (wh.water_kwh_per_gal_F * (load.set_point_F - wh.inlet_temp_F));
        for (const Interval& w : load.demand_windows)
            for (int t = w.start; t < w.end(); ++t) wh.draw_gal[t] = draw;
        if (draw > wh.tank_volume_gal) {
            std::ostringstream os;
            os << "class " << load.class_name << ": per-slot draw " << draw
               << " gal exceeds tank volume";
            throw ConfigError(os.str());
        }
    }
}

// --- generation ---------------------------------------------------------------

namespace {

// Sample a start slot so the window (plus any reserved delay tail) fits the day.
int sample_start_slot(Rng& rng, const TimeGrid& grid, const GenClassSpec& gen,
                      const std::string& class_name, int duration_slots) {
    const int lo = grid.minutes_to_slots(gen.start_band_lo_min);
    int hi = grid.minutes_to_slots(gen.start_band_hi_min);
    if (lo < 0 || hi < 0)
        throw ConfigError("class " + class_name + ": start band not aligned to slot grid");
    const int latest = grid.slots - duration_slots - gen.reserve_tail_slots;
    hi = std::min(hi, latest);
    if (hi < lo) {
        std::ostringstream os;
        os << "class " << class_name << ": start band [" << gen.start_band_lo_min << ", "
           << gen.start_band_hi_min << "] min leaves no feasible start (duration "
           << duration_slots << " slots, reserved delay " << gen.reserve_tail_slots
           << " slots, T=" << grid.slots << ")";
        throw ConfigError(os.str());
    }
    return static_cast<int>(rng.uniform_int(lo, hi));
}

int sample_duration_slots(Rng& rng, const TimeGrid& grid, const GenClassSpec& gen,
                          const std::string& class_name) {
    const int lo = grid.minutes_to_slots(gen.duration_min_lo);
    const int hi = grid.minutes_to_slots(gen.duration_min_hi);
    if (lo <= 0 || hi < lo)
        throw ConfigError("class " + class_name + ": duration band not aligned to slot grid");
    return static_cast<int>(rng.uniform_int(lo, hi));
}

// Set points land on a 1°F lattice inside the configured band.
double sample_set_point(Rng& rng, const GenClassSpec& gen) {
    const int lo = static_cast<int>(std::ceil(gen.set_point_lo_F));
    const int hi = static_cast<int>(std::floor(gen.set_point_hi_F));
    return static_cast<double>(rng.uniform_int(lo, hi));
}

// Two or three separate instances: disjoint windows with at least one idle
// slot between them.
std::vector<Interval> sample_windows(Rng& rng, const TimeGrid& grid, const GenClassSpec& gen,
                                     const std::string& class_name) {
    const int instances = static_cast<int>(rng.uniform_int(gen.instances_lo, gen.instances_hi));
    std::vector<Interval> windows;
    for (int attempt = 0; attempt < 200 && static_cast<int>(windows.size()) < instances; ++attempt) {
        const int dur = sample_duration_slots(rng, grid, gen, class_name);
        const int start = sample_start_slot(rng, grid, gen, class_name, dur);
        const Interval cand{start, dur};
        bool overlaps = false;
        for (const Interval& w : windows)
            if (cand.start <= w.end() && w.start <= cand.end()) overlaps = true;
        if (!overlaps) windows.push_back(cand);
    }
    if (static_cast<int>(windows.size()) < instances)
        throw ConfigError("class " + class_name +
                          ": could not place disjoint demand windows; widen the start band");
    std::sort(windows.begin(), windows.end(),
              [](const Interval& a, const Interval& b) { return a.start < b.start; });
    return windows;
}

}  // namespace

std::vector<double> resample_curve(const std::vector<double>& curve, int slots) {
    if (static_cast<int>(curve.size()) == slots) {
        std::vector<double> out = curve;
        const double sum = std::accumulate(out.begin(), out.end(), 0.0);
        for (double& v : out) v /= sum;
        return out;
    }
    // Piecewise-linear resample on the circular day, then renormalize.
    const int n = static_cast<int>(curve.size());
    std::vector<double> out(slots);
    for (int t = 0; t < slots; ++t) {
        const double pos = (t + 0.5) / slots * n - 0.5;
        const double base = std::floor(pos);
        const double frac = pos - base;
        const int i0 = (static_cast<int>(base) % n + n) % n;
        const int i1 = (i0 + 1) % n;
        out[t] = curve[i0] * (1.0 - frac) + curve[i1] * frac;
    }
    const double sum = std::accumulate(out.begin(), out.end(), 0.0);
    for (double& v : out) v /= sum;
    return out;
}

Community generate_community(const CommunityConfig& config, std::uint64_t seed) {
    if (!config.grid.valid()) throw ConfigError("time.slots_per_day must be >= 1");
    Community community;
    community.grid = config.grid;
    const TimeGrid& grid = config.grid;

    // Explicit mode: customers are given verbatim; only calibration runs.
    if (!config.explicit_customers.empty()) {
        int id = 0;
        for (const ExplicitCustomerSpec& spec : config.explicit_customers) {
            Customer customer;
            customer.id = id++;
            customer.base_load = LoadProfile(grid.slots, spec.base_load_kw);
            for (const ExplicitDeviceSpec& dev : spec.devices) {
                const ClassSpec* cls = config.find_class(dev.class_name);
                if (!cls) throw ConfigError("unknown device class " + dev.class_name);
                if (cls->kind == LoadKind::Shiftable) {
                    ShiftableLoad load;
                    load.class_name = cls->name;
                    load.rated_kw = cls->rated_kw;
                    if (!dev.duration_min || !dev.preferred_start_min)
                        throw ConfigError("class " + cls->name +
                                          ": explicit shiftable device needs duration_min and "
                                          "preferred_start_min");
                    load.duration_slots = grid.minutes_to_slots(*dev.duration_min);
                    load.preferred_start_slot = grid.minutes_to_slots(*dev.preferred_start_min);
                    if (load.duration_slots <= 0 || load.preferred_start_slot < 0)
                        throw ConfigError("class " + cls->name +
                                          ": device timing not aligned to slot grid");
                    if (load.preferred_start_slot + load.duration_slots > grid.slots)
                        throw ConfigError("class " + cls->name + ": device runs past midnight");
                    customer.shiftables.push_back(load);
                } else {
                    ThermostatLoad load;
                    load.class_name = cls->name;
                    load.kind = cls->kind;
                    load.rated_kw = cls->rated_kw;
                    load.num_states = dev.num_states.value_or(cls->num_states);
                    if (!dev.set_point_F)
                        throw ConfigError("class " + cls->name +
                                          ": explicit thermostat device needs set_point_F");
                    load.set_point_F = *dev.set_point_F;
                    for (auto [start_min, end_min] : dev.windows_min) {
                        const int s = grid.minutes_to_slots(start_min);
                        const int e = grid.minutes_to_slots(end_min);
                        if (s < 0 || e < 0 || e <= s || e > grid.slots)
                            throw ConfigError("class " + cls->name + ": bad demand window");
                        load.demand_windows.push_back({s, e - s});
                    }
                    std::sort(load.demand_windows.begin(), load.demand_windows.end(),
                              [](const Interval& a, const Interval& b) { return a.start < b.start; });
                    for (size_t w = 1; w < load.demand_windows.size(); ++w)
                        if (load.demand_windows[w].start < load.demand_windows[w - 1].end())
                            throw ConfigError("class " + cls->name +
                                              ": overlapping demand windows");
                    if (cls->kind == LoadKind::ThermostatCooling) {
                        AcParams ac;
                        ac.alpha_kwh_per_F = cls->alpha_kwh_per_F;
                        ac.eer = cls->eer;
                        load.thermal = ac;
                    } else {
                        WhParams wh;
                        wh.tank_volume_gal = cls->tank_volume_gal;
                        wh.tank_area_sqft = cls->tank_area_sqft;
                        wh.tank_resistance = cls->tank_resistance;
                        wh.inlet_temp_F = cls->inlet_temp_F;
                        wh.ambient_temp_F.assign(grid.slots, cls->ambient_temp_F);
                        load.thermal = wh;
                    }
                    calibrate_thermostat(grid, load);
                    customer.thermostats.push_back(load);
                }
            }
            community.customers.push_back(std::move(customer));
        }
        return community;
    }

    // Sampled mode.
    community.customers.reserve(config.num_customers);
    for (int j = 0; j < config.num_customers; ++j) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(j)));
        Customer customer;
        customer.id = j;
        customer.base_load = LoadProfile(grid.slots);
        for (const ClassSpec& cls : config.classes) {
            const auto it = config.generation.find(cls.name);
            if (it == config.generation.end()) continue;  // class not owned in this scenario
            const GenClassSpec& gen = it->second;
            if (cls.kind == LoadKind::Shiftable) {
                ShiftableLoad load;
                load.class_name = cls.name;
                load.rated_kw = cls.rated_kw;
                load.duration_slots = sample_duration_slots(rng, grid, gen, cls.name);
                load.preferred_start_slot =
                    sample_start_slot(rng, grid, gen, cls.name, load.duration_slots);
                customer.shiftables.push_back(load);
            } else {
                ThermostatLoad load;
                load.class_name = cls.name;
                load.kind = cls.kind;
                load.rated_kw = cls.rated_kw;
                load.num_states = cls.num_states;
                load.set_point_F = sample_set_point(rng, gen);
                load.demand_windows = sample_windows(rng, grid, gen, cls.name);
                if (cls.kind == LoadKind::ThermostatCooling) {
                    AcParams ac;
                    ac.alpha_kwh_per_F = cls.alpha_kwh_per_F;
                    ac.eer = cls.eer;
                    load.thermal = ac;
                } else {
                    WhParams wh;
                    wh.tank_volume_gal = cls.tank_volume_gal;
                    wh.tank_area_sqft = cls.tank_area_sqft;
                    wh.tank_resistance = cls.tank_resistance;
                    wh.inlet_temp_F = cls.inlet_temp_F;
                    wh.ambient_temp_F.assign(grid.slots, cls.ambient_temp_F);
                    load.thermal = wh;
                }
                calibrate_thermostat(grid, load);
                customer.thermostats.push_back(load);
            }
        }
        community.customers.push_back(std::move(customer));
    }

    // Base load: the shaped residual between the community's target profile
    // and the flexible demand, apportioned per home by its energy shortfall.
    LoadProfile flexible(grid.slots);
    std::vector<double> flex_energy(config.num_customers, 0.0);
    for (int j = 0; j < config.num_customers; ++j) {
        const Customer& c = community.customers[j];
        LoadProfile home(grid.slots);
        for (const ShiftableLoad& s : c.shiftables) home += demanded_profile(grid, s);
        for (const ThermostatLoad& th : c.thermostats) home += demanded_profile(grid, th);
        flex_energy[j] = home.energy_kwh(grid);
        flexible += home;
    }

    std::vector<double> base_energy(config.num_customers, 0.0);
    double total_base_energy = 0.0;
    for (int j = 0; j < config.num_customers; ++j) {
        if (flex_energy[j] > 1.1 * config.target_daily_kwh) {
            // Name the class contributing the most energy.
            std::map<std::string, double> by_class;
            for (const ShiftableLoad& s : community.customers[j].shiftables)
                by_class[s.class_name] += s.rated_kw * s.duration_slots * grid.dt_hours();
            for (const ThermostatLoad& th : community.customers[j].thermostats)
                by_class[th.class_name] +=
                    th.rated_kw * th.demanded_slot_count() * grid.dt_hours();
            std::string worst;
            double worst_kwh = -1.0;
            for (const auto& [name, kwh] : by_class)
                if (kwh > worst_kwh) worst = name, worst_kwh = kwh;
            std::ostringstream os;
            os << "customer " << j << ": flexible energy " << flex_energy[j]
               << " kWh exceeds daily target " << config.target_daily_kwh
               << " kWh (+10%); largest class " << worst;
            throw ConfigError(os.str());
        }
        base_energy[j] = std::max(0.0, config.target_daily_kwh - flex_energy[j]);
        total_base_energy += base_energy[j];
    }

    if (total_base_energy > 0.0) {
        const std::vector<double> shape =
            resample_curve(config.load_curve.empty() ? bundled_load_curve() : config.load_curve,
                           grid.slots);
        const double total_target_kwh = config.target_daily_kwh * config.num_customers;
        LoadProfile residual(grid.slots);
        double residual_energy = 0.0;
        for (int t = 0; t < grid.slots; ++t) {
            const double target_kw = total_target_kwh * shape[t] / grid.dt_hours();
            residual[t] = std::max(0.0, target_kw - flexible[t]);
            residual_energy += residual[t] * grid.dt_hours();
        }
        for (int j = 0; j < config.num_customers; ++j) {
            if (base_energy[j] <= 0.0) continue;
            Customer& c = community.customers[j];
            if (residual_energy > 0.0) {
                const double scale = base_energy[j] / residual_energy;
                for (int t = 0; t < grid.slots; ++t) c.base_load[t] = residual[t] * scale;
            } else {
                c.base_load = LoadProfile(grid.slots, base_energy[j] / 24.0);
            }
        }
    }

    return community;
}

}  // namespace drsim
