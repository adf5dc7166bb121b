#include "drsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "drsim/errors.hpp"

namespace drsim {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

const json& require(const json& j, const char* key, const std::string& path) {
    const auto it = j.find(key);
    if (it == j.end()) fail(path + "." + key, "missing required field");
    return *it;
}

double require_number(const json& j, const char* key, const std::string& path) {
    const json& v = require(j, key, path);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<double>();
}

int require_int(const json& j, const char* key, const std::string& path) {
    const json& v = require(j, key, path);
    if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
    return v.get<int>();
}

std::string require_string(const json& j, const char* key, const std::string& path) {
    const json& v = require(j, key, path);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

double opt_number(const json& j, const char* key, double fallback) {
    const auto it = j.find(key);
    return it == j.end() ? fallback : it->get<double>();
}

// Accepts 120 or [60, 120]; returns {lo, hi}.
std::pair<int, int> int_band(const json& j, const char* key, const std::string& path) {
    const json& v = require(j, key, path);
    if (v.is_number_integer()) return {v.get<int>(), v.get<int>()};
    if (v.is_array() && v.size() == 2 && v[0].is_number_integer() && v[1].is_number_integer())
        return {v[0].get<int>(), v[1].get<int>()};
    fail(path + "." + key, "expected an integer or [lo, hi]");
}

LoadKind parse_kind(const std::string& s, const std::string& path) {
    if (s == "shiftable") return LoadKind::Shiftable;
    if (s == "thermostat_cooling") return LoadKind::ThermostatCooling;
    if (s == "thermostat_heating") return LoadKind::ThermostatHeating;
    fail(path, "unknown load kind '" + s + "'");
}

std::vector<double> load_curve_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("community.load_curve_csv: cannot open " + path.string());
    std::vector<double> curve;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            curve.push_back(std::stod(line));
        } catch (const std::exception&) {
            throw ConfigError("community.load_curve_csv: bad value '" + line + "' at row " +
                              std::to_string(curve.size() + 1));
        }
    }
    if (curve.size() != 288)
        throw ConfigError("community.load_curve_csv: expected 288 rows, got " +
                          std::to_string(curve.size()));
    for (size_t i = 0; i < curve.size(); ++i)
        if (curve[i] < 0.0)
            throw ConfigError("community.load_curve_csv: negative value at row " +
                              std::to_string(i + 1));
    return curve;
}

GenClassSpec parse_generation(const json& j, const ClassSpec& cls, const std::string& path) {
    GenClassSpec gen;
    std::tie(gen.duration_min_lo, gen.duration_min_hi) = int_band(j, "duration_min", path);
    const auto band = int_band(j, "start_band_min", path);
    gen.start_band_lo_min = band.first;
    gen.start_band_hi_min = band.second;
    if (j.contains("instances")) {
        std::tie(gen.instances_lo, gen.instances_hi) = int_band(j, "instances", path);
    }
    if (is_thermostat(cls.kind)) {
        const json& sp = require(j, "set_point_band_F", path);
        if (!sp.is_array() || sp.size() != 2) fail(path + ".set_point_band_F", "expected [lo, hi]");
        gen.set_point_lo_F = sp[0].get<double>();
        gen.set_point_hi_F = sp[1].get<double>();
    }
    return gen;
}

AxisValue parse_axis_value(const json& v, const std::string& path) {
    AxisValue value;
    if (v.is_number()) {
        value.scalar = v.get<double>();
    } else if (v.is_object()) {
        for (const auto& [name, x] : v.items()) {
            if (!x.is_number()) fail(path + "." + name, "expected a number");
            value.per_class[name] = x.get<double>();
        }
        if (value.per_class.empty()) fail(path, "empty per-class value");
    } else {
        fail(path, "expected a number or a class->number object");
    }
    return value;
}

}  // namespace

std::string AxisValue::label() const {
    std::ostringstream os;
    if (scalar) {
        os << *scalar;
    } else {
        bool sep = false;
        for (const auto& [name, v] : per_class) {
            if (sep) os << "|";
            os << name << "=" << v;
            sep = true;
        }
    }
    return os.str();
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file " + path.string());
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("scenario file " + path.string() + ": " + e.what());
    }

    ScenarioConfig config;

    if (root.contains("units")) {
        const std::string unit = require_string(root["units"], "temperature", "units");
        if (unit != "F")
            fail("units.temperature",
                 "only 'F' is supported; convert the scenario instead of mixing units");
    }

    const json& time = require(root, "time", "");
    config.community.grid.slots = require_int(time, "slots_per_day", "time");
    if (config.community.grid.slots < 1) fail("time.slots_per_day", "must be >= 1");

    if (root.contains("seed")) config.seed = root["seed"].get<std::uint64_t>();

    if (root.contains("phase_order")) {
        const std::string order = root["phase_order"].get<std::string>();
        if (order == "thermostat_first")
            config.thermostat_first = true;
        else if (order != "shiftable_first")
            fail("phase_order", "expected 'shiftable_first' or 'thermostat_first'");
    }

    if (root.contains("customer_order")) {
        const json& oc = root["customer_order"];
        const std::string policy = require_string(oc, "policy", "customer_order");
        if (policy == "generation") {
            config.order.kind = OrderPolicy::Kind::Generation;
        } else if (policy == "shuffle") {
            config.order.kind = OrderPolicy::Kind::Shuffle;
            config.order.shuffle_seed = require(oc, "seed", "customer_order").get<std::uint64_t>();
        } else if (policy == "explicit") {
            config.order.kind = OrderPolicy::Kind::Explicit;
            const json& arr = require(oc, "order", "customer_order");
            if (!arr.is_array()) fail("customer_order.order", "expected an array");
            for (const json& v : arr) config.order.explicit_order.push_back(v.get<int>());
        } else {
            fail("customer_order.policy", "expected generation|shuffle|explicit");
        }
    }

    // classes
    const json& classes = require(root, "classes", "");
    if (!classes.is_array() || classes.empty()) fail("classes", "expected a non-empty array");
    for (size_t i = 0; i < classes.size(); ++i) {
        const std::string path_i = "classes[" + std::to_string(i) + "]";
        const json& jc = classes[i];
        ClassSpec cls;
        cls.name = require_string(jc, "name", path_i);
        cls.kind = parse_kind(require_string(jc, "kind", path_i), path_i + ".kind");
        cls.rated_kw = require_number(jc, "rated_kw", path_i);
        if (config.community.find_class(cls.name) != nullptr)
            fail(path_i + ".name", "duplicate class '" + cls.name + "'");
        if (is_thermostat(cls.kind)) {
            cls.num_states = require_int(jc, "num_states", path_i);
            const json& th = require(jc, "thermal", path_i);
            if (cls.kind == LoadKind::ThermostatCooling) {
                cls.alpha_kwh_per_F = opt_number(th, "alpha_kwh_per_degF", cls.alpha_kwh_per_F);
                cls.eer = opt_number(th, "eer", cls.eer);
            } else {
                cls.tank_volume_gal = opt_number(th, "tank_volume_gal", cls.tank_volume_gal);
                cls.tank_area_sqft = opt_number(th, "tank_area_sqft", cls.tank_area_sqft);
                cls.tank_resistance =
                    opt_number(th, "tank_resistance_hr_sqft_F_per_btu", cls.tank_resistance);
                cls.inlet_temp_F = opt_number(th, "inlet_temp_F", cls.inlet_temp_F);
                cls.ambient_temp_F = opt_number(th, "ambient_temp_F", cls.ambient_temp_F);
            }
        }
        config.community.classes.push_back(cls);
    }

    // community
    const json& community = require(root, "community", "");
    config.community.target_daily_kwh =
        opt_number(community, "target_daily_energy_kwh", config.community.target_daily_kwh);
    if (community.contains("load_curve_csv") && !community["load_curve_csv"].is_null()) {
        std::filesystem::path curve_path = community["load_curve_csv"].get<std::string>();
        if (curve_path.is_relative()) curve_path = path.parent_path() / curve_path;
        config.community.load_curve = load_curve_csv(curve_path);
    }

    const bool has_gen = community.contains("generation");
    const bool has_explicit = community.contains("customers");
    if (has_gen == has_explicit)
        fail("community", "expected exactly one of 'generation' or 'customers'");

    if (has_gen) {
        config.community.num_customers = require_int(community, "num_customers", "community");
        if (config.community.num_customers < 0) fail("community.num_customers", "must be >= 0");
        const json& gen = community["generation"];
        for (const auto& [name, jg] : gen.items()) {
            const ClassSpec* cls = config.community.find_class(name);
            if (!cls) fail("community.generation." + name, "unknown class");
            config.community.generation[name] =
                parse_generation(jg, *cls, "community.generation." + name);
        }
    } else {
        const json& customers = community["customers"];
        if (!customers.is_array()) fail("community.customers", "expected an array");
        config.community.num_customers = static_cast<int>(customers.size());
        for (size_t j = 0; j < customers.size(); ++j) {
            const std::string path_j = "community.customers[" + std::to_string(j) + "]";
            const json& jc = customers[j];
            ExplicitCustomerSpec spec;
            spec.base_load_kw = opt_number(jc, "base_load_kw", 0.0);
            if (jc.contains("devices")) {
                for (size_t d = 0; d < jc["devices"].size(); ++d) {
                    const std::string path_d = path_j + ".devices[" + std::to_string(d) + "]";
                    const json& jd = jc["devices"][d];
                    ExplicitDeviceSpec dev;
                    dev.class_name = require_string(jd, "class", path_d);
                    const ClassSpec* cls = config.community.find_class(dev.class_name);
                    if (!cls) fail(path_d + ".class", "unknown class '" + dev.class_name + "'");
                    if (cls->kind == LoadKind::Shiftable) {
                        dev.preferred_start_min = require_int(jd, "preferred_start_min", path_d);
                        dev.duration_min = require_int(jd, "duration_min", path_d);
                    } else {
                        dev.set_point_F = require_number(jd, "set_point_F", path_d);
                        const json& windows = require(jd, "windows_min", path_d);
                        if (!windows.is_array() || windows.empty())
                            fail(path_d + ".windows_min", "expected a non-empty array");
                        for (const json& w : windows) {
                            if (!w.is_array() || w.size() != 2)
                                fail(path_d + ".windows_min", "expected [start, end) pairs");
                            dev.windows_min.emplace_back(w[0].get<int>(), w[1].get<int>());
                        }
                        if (jd.contains("num_states")) dev.num_states = jd["num_states"].get<int>();
                    }
                    spec.devices.push_back(std::move(dev));
                }
            }
            config.community.explicit_customers.push_back(std::move(spec));
        }
    }

    // plan
    const json& plan = require(root, "plan", "");
    const std::string mode = require_string(plan, "mode", "plan");
    if (mode == "CDP")
        config.plan.mode = PlanMode::CDP;
    else if (mode == "PDP")
        config.plan.mode = PlanMode::PDP;
    else
        fail("plan.mode", "expected 'CDP' or 'PDP'");

    const json& terms = require(plan, "terms", "plan");
    for (const auto& [name, jt] : terms.items()) {
        const std::string path_t = "plan.terms." + name;
        const ClassSpec* cls = config.community.find_class(name);
        if (!cls) fail(path_t, "unknown class '" + name + "'");
        if (cls->kind == LoadKind::Shiftable) {
            ShiftablePlanTerm term;
            term.max_delay_minutes = require_int(jt, "max_delay_min", path_t);
            config.plan.shiftable_terms[name] = term;
        } else {
            ThermostatPlanTerm term;
            term.mode = config.plan.mode;
            term.max_duration_minutes = require_int(jt, "max_duration_min", path_t);
            term.reference_temp_F = require_number(jt, "reference_temp_F", path_t);
            if (config.plan.mode == PlanMode::CDP) {
                if (jt.contains("beta"))
                    fail(path_t + ".beta", "PDP field in a CDP plan; mixed-mode plans are rejected");
                term.max_deviation_F = require_number(jt, "max_deviation_F", path_t);
            } else {
                if (jt.contains("max_deviation_F"))
                    fail(path_t + ".max_deviation_F",
                         "CDP field in a PDP plan; mixed-mode plans are rejected");
                term.beta = require_number(jt, "beta", path_t);
            }
            config.plan.thermostat_terms[name] = term;
        }
    }

    // sweep
    if (root.contains("sweep")) {
        const json& axes = require(root["sweep"], "axes", "sweep");
        if (!axes.is_array()) fail("sweep.axes", "expected an array");
        for (size_t a = 0; a < axes.size(); ++a) {
            const std::string path_a = "sweep.axes[" + std::to_string(a) + "]";
            SweepAxis axis;
            axis.param = require_string(axes[a], "param", path_a);
            const json& values = require(axes[a], "values", path_a);
            if (!values.is_array() || values.empty())
                fail(path_a + ".values", "expected a non-empty array");
            for (size_t v = 0; v < values.size(); ++v)
                axis.values.push_back(
                    parse_axis_value(values[v], path_a + ".values[" + std::to_string(v) + "]"));
            config.sweep_axes.push_back(std::move(axis));
        }
    }

    // Reserve delay room in shiftable start bands so every sweep point
    // satisfies the spill-over rule by construction.
    for (auto& [name, gen] : config.community.generation) {
        const ClassSpec* cls = config.community.find_class(name);
        if (cls->kind != LoadKind::Shiftable) continue;
        int max_delay_min = 0;
        if (const auto it = config.plan.shiftable_terms.find(name);
            it != config.plan.shiftable_terms.end())
            max_delay_min = it->second.max_delay_minutes;
        for (const SweepAxis& axis : config.sweep_axes) {
            if (axis.param != "max_delay_min") continue;
            for (const AxisValue& value : axis.values) {
                if (value.scalar) max_delay_min = std::max(max_delay_min, int(*value.scalar));
                if (const auto it = value.per_class.find(name); it != value.per_class.end())
                    max_delay_min = std::max(max_delay_min, int(it->second));
            }
        }
        const int slots = config.community.grid.minutes_to_slots(max_delay_min);
        gen.reserve_tail_slots = std::max(slots, 0);
    }

    return config;
}

void apply_axis_value(const std::string& param, const AxisValue& value, EngagementPlan& plan,
                      std::optional<int>& num_states_override) {
    const auto apply_thermostat = [&](auto&& setter) {
        if (value.scalar) {
            for (auto& [name, term] : plan.thermostat_terms) setter(term, *value.scalar);
        } else {
            for (const auto& [name, v] : value.per_class) {
                const auto it = plan.thermostat_terms.find(name);
                if (it == plan.thermostat_terms.end())
                    throw ConfigError("sweep: class '" + name + "' has no thermostat plan term");
                setter(it->second, v);
            }
        }
    };

    if (param == "num_states") {
        if (!value.scalar) throw ConfigError("sweep: num_states takes scalar values");
        num_states_override = static_cast<int>(*value.scalar);
    } else if (param == "max_duration_min") {
        apply_thermostat(
            [](ThermostatPlanTerm& t, double v) { t.max_duration_minutes = static_cast<int>(v); });
    } else if (param == "reference_temp_F") {
        apply_thermostat([](ThermostatPlanTerm& t, double v) { t.reference_temp_F = v; });
    } else if (param == "max_deviation_F") {
        if (plan.mode != PlanMode::CDP)
            throw ConfigError("sweep: max_deviation_F applies to CDP plans only");
        apply_thermostat([](ThermostatPlanTerm& t, double v) { t.max_deviation_F = v; });
    } else if (param == "beta") {
        if (plan.mode != PlanMode::PDP)
            throw ConfigError("sweep: beta applies to PDP plans only");
        apply_thermostat([](ThermostatPlanTerm& t, double v) { t.beta = v; });
    } else if (param == "max_delay_min") {
        if (value.scalar) {
            for (auto& [name, term] : plan.shiftable_terms)
                term.max_delay_minutes = static_cast<int>(*value.scalar);
        } else {
            for (const auto& [name, v] : value.per_class) {
                const auto it = plan.shiftable_terms.find(name);
                if (it == plan.shiftable_terms.end())
                    throw ConfigError("sweep: class '" + name + "' has no shiftable plan term");
                it->second.max_delay_minutes = static_cast<int>(v);
            }
        }
    } else {
        throw ConfigError("sweep: unknown param '" + param + "'");
    }
}

std::vector<std::string> validate_scenario(const ScenarioConfig& config) {
    std::vector<std::string> issues;
    const TimeGrid& grid = config.community.grid;
    const auto check_minutes = [&](int minutes, const std::string& what) {
        if (grid.minutes_to_slots(minutes) < 0) {
            std::ostringstream os;
            os << what << ": " << minutes << " min is not a multiple of the slot length ("
               << grid.dt_minutes() << " min)";
            issues.push_back(os.str());
        }
    };

    // plan terms
    for (const auto& [name, term] : config.plan.shiftable_terms) {
        const ClassSpec* cls = config.community.find_class(name);
        if (!cls) {
            issues.push_back("plan.terms." + name + ": unknown class");
            continue;
        }
        if (cls->kind != LoadKind::Shiftable)
            issues.push_back("plan.terms." + name + ": shiftable term on a thermostat class");
        if (term.max_delay_minutes < 0)
            issues.push_back("plan.terms." + name + ".max_delay_min: must be >= 0");
        check_minutes(term.max_delay_minutes, "plan.terms." + name + ".max_delay_min");
    }
    for (const auto& [name, term] : config.plan.thermostat_terms) {
        const ClassSpec* cls = config.community.find_class(name);
        if (!cls) {
            issues.push_back("plan.terms." + name + ": unknown class");
            continue;
        }
        if (!is_thermostat(cls->kind))
            issues.push_back("plan.terms." + name + ": thermostat term on a shiftable class");
        if (term.max_duration_minutes < 0)
            issues.push_back("plan.terms." + name + ".max_duration_min: must be >= 0");
        check_minutes(term.max_duration_minutes, "plan.terms." + name + ".max_duration_min");
        if (term.mode == PlanMode::CDP && term.max_deviation_F < 0)
            issues.push_back("plan.terms." + name + ".max_deviation_F: must be >= 0");
        if (term.mode == PlanMode::PDP && (term.beta <= 0.0 || term.beta > 1.0))
            issues.push_back("plan.terms." + name + ".beta: must be in (0, 1]");
    }

    // class thermal sanity
    for (const ClassSpec& cls : config.community.classes) {
        const std::string path = "classes." + cls.name;
        if (cls.rated_kw <= 0) issues.push_back(path + ".rated_kw: must be > 0");
        if (is_thermostat(cls.kind) && cls.num_states < 2)
            issues.push_back(path + ".num_states: must be >= 2");
        if (cls.kind == LoadKind::ThermostatCooling) {
            if (cls.alpha_kwh_per_F <= 0) issues.push_back(path + ".alpha_kwh_per_degF: must be > 0");
            if (cls.eer < 8.0)
                issues.push_back(path + ".eer: below the 8.0 appliance-standard floor");
        }
        if (cls.kind == LoadKind::ThermostatHeating) {
            if (cls.tank_volume_gal <= 0) issues.push_back(path + ".tank_volume_gal: must be > 0");
            if (cls.tank_area_sqft <= 0) issues.push_back(path + ".tank_area_sqft: must be > 0");
            if (cls.tank_resistance <= 0)
                issues.push_back(path + ".tank_resistance_hr_sqft_F_per_btu: must be > 0");
        }
    }

    // generation bands
    for (const auto& [name, gen] : config.community.generation) {
        const ClassSpec* cls = config.community.find_class(name);
        const std::string path = "community.generation." + name;
        check_minutes(gen.duration_min_lo, path + ".duration_min");
        check_minutes(gen.duration_min_hi, path + ".duration_min");
        check_minutes(gen.start_band_lo_min, path + ".start_band_min");
        check_minutes(gen.start_band_hi_min, path + ".start_band_min");
        if (gen.duration_min_lo <= 0 || gen.duration_min_hi < gen.duration_min_lo)
            issues.push_back(path + ".duration_min: bad band");
        if (gen.start_band_hi_min < gen.start_band_lo_min)
            issues.push_back(path + ".start_band_min: bad band");
        if (gen.instances_lo < 1 || gen.instances_hi < gen.instances_lo)
            issues.push_back(path + ".instances: bad band");
        if (cls && is_thermostat(cls->kind) && gen.set_point_hi_F < gen.set_point_lo_F)
            issues.push_back(path + ".set_point_band_F: bad band");
        if (cls && cls->kind == LoadKind::ThermostatHeating &&
            gen.set_point_lo_F <= cls->inlet_temp_F)
            issues.push_back(path + ".set_point_band_F: must exceed inlet temperature");
        // Spill-over rule: preferred start + duration + delay fits the day.
        const int tail_min =
            static_cast<int>(std::lround(gen.reserve_tail_slots * grid.dt_minutes()));
        if (cls && cls->kind == LoadKind::Shiftable &&
            gen.start_band_lo_min + gen.duration_min_hi + tail_min >
                static_cast<int>(units::kMinutesPerDay))
            issues.push_back(path + ": start band leaves no room for duration plus the scheduling "
                             "delay before midnight (spill-over rule)");
    }

    // explicit customers
    for (size_t j = 0; j < config.community.explicit_customers.size(); ++j) {
        const ExplicitCustomerSpec& spec = config.community.explicit_customers[j];
        for (size_t d = 0; d < spec.devices.size(); ++d) {
            const ExplicitDeviceSpec& dev = spec.devices[d];
            const std::string path = "community.customers[" + std::to_string(j) + "].devices[" +
                                     std::to_string(d) + "](" + dev.class_name + ")";
            const ClassSpec* cls = config.community.find_class(dev.class_name);
            if (!cls) continue;  // already a load error
            if (cls->kind == LoadKind::Shiftable) {
                check_minutes(*dev.preferred_start_min, path + ".preferred_start_min");
                check_minutes(*dev.duration_min, path + ".duration_min");
                int max_delay_min = 0;
                if (const auto it = config.plan.shiftable_terms.find(dev.class_name);
                    it != config.plan.shiftable_terms.end())
                    max_delay_min = it->second.max_delay_minutes;
                if (*dev.preferred_start_min + *dev.duration_min + max_delay_min >
                    static_cast<int>(units::kMinutesPerDay))
                    issues.push_back(path + ": task cannot finish before midnight at the maximum "
                                     "delay (spill-over rule)");
            } else {
                for (const auto& [start_min, end_min] : dev.windows_min) {
                    check_minutes(start_min, path + ".windows_min");
                    check_minutes(end_min, path + ".windows_min");
                    if (end_min <= start_min || end_min > static_cast<int>(units::kMinutesPerDay))
                        issues.push_back(path + ".windows_min: bad window");
                }
                if (dev.num_states && *dev.num_states < 2)
                    issues.push_back(path + ".num_states: must be >= 2");
            }
        }
    }

    // order policy
    if (config.order.kind == OrderPolicy::Kind::Explicit &&
        static_cast<int>(config.order.explicit_order.size()) != config.community.num_customers)
        issues.push_back("customer_order.order: must list every customer exactly once");

    // sweep axes
    for (const SweepAxis& axis : config.sweep_axes) {
        if (axis.values.empty()) issues.push_back("sweep.axes(" + axis.param + "): empty values");
        EngagementPlan probe = config.plan;
        std::optional<int> k_probe;
        for (const AxisValue& value : axis.values) {
            try {
                apply_axis_value(axis.param, value, probe, k_probe);
            } catch (const ConfigError& e) {
                issues.push_back(e.what());
                break;
            }
            if (k_probe && *k_probe < 2) {
                issues.push_back("sweep.axes(num_states): values must be >= 2");
                break;
            }
        }
    }

    return issues;
}

}  // namespace drsim
