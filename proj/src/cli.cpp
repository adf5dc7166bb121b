#include "drsim/cli.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <thread>

#include <json.hpp>

#include "drsim/errors.hpp"
#include "drsim/rng.hpp"

namespace drsim {

using ordered_json = nlohmann::ordered_json;

namespace {

// All CSV numbers go through this: 6 significant digits, locale-free.
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << contents;
}

std::string profiles_csv(const SimulationReport& report) {
    std::string csv = "slot,minutes,x,x_hat,x_tilde\n";
    for (int t = 0; t < report.slots; ++t) {
        csv += std::to_string(t);
        csv += ',';
        csv += fmt(t * report.dt_minutes);
        csv += ',';
        csv += fmt(report.profile_before[t]);
        csv += ',';
        csv += fmt(report.profile_after_phase1[t]);
        csv += ',';
        csv += fmt(report.profile_after_phase2[t]);
        csv += '\n';
    }
    return csv;
}

std::string schedules_csv(const SimulationReport& report) {
    std::string csv =
        "customer,class,kind,rated_kw,pref_start_slot,assigned_start_slot,delay_slots,"
        "severity_F,eligible,demanded_slots,denied_slots,max_dev_F,avg_dev_F\n";
    for (const CustomerScheduleRecord& rec : report.customers) {
        for (const ShiftScheduleRecord& s : rec.shiftables) {
            csv += std::to_string(rec.customer_id) + ',' + s.class_name + ",shiftable," +
                   fmt(s.rated_kw) + ',' + std::to_string(s.preferred_start_slot) + ',' +
                   std::to_string(s.assigned_start_slot) + ',' + std::to_string(s.delay_slots) +
                   ",,,,,,\n";
        }
        for (const ThermoScheduleRecord& th : rec.thermostats) {
            csv += std::to_string(rec.customer_id) + ',' + th.class_name + ",thermostat," +
                   fmt(th.rated_kw) + ",,,," + fmt(th.severity_F) + ',' +
                   (th.eligible ? "1" : "0") + ',' + std::to_string(th.demanded_slots) + ',' +
                   std::to_string(th.denied_slots) + ',' + fmt(th.max_deviation_F) + ',' +
                   fmt(th.avg_deviation_F) + '\n';
        }
    }
    return csv;
}

std::string trace_jsonl(const SimulationReport& report) {
    std::string out;
    for (const TraceEntry& e : report.trace) {
        ordered_json j;
        j["phase"] = e.phase;
        j["customer_id"] = e.customer_id;
        j["direction"] = e.direction;
        j["profile_digest"] = e.profile_digest;
        j["peak_kw"] = e.peak_kw;
        out += j.dump();
        out += '\n';
    }
    return out;
}

struct LoadedScenario {
    ScenarioConfig config;
    Community community;
};

LoadedScenario prepare(const std::filesystem::path& config_path, const RunOverrides& overrides) {
    LoadedScenario loaded{load_scenario(config_path), {}};
    if (overrides.seed) loaded.config.seed = *overrides.seed;
    const std::vector<std::string> issues = validate_scenario(loaded.config);
    if (!issues.empty()) {
        std::string msg = "invalid scenario:";
        for (const std::string& issue : issues) msg += "\n  " + issue;
        throw ConfigError(msg);
    }
    loaded.community = generate_community(loaded.config.community, loaded.config.seed);
    return loaded;
}

// Thermostat class names in plan order (the stable column set for sweeps).
std::vector<std::string> thermostat_class_names(const EngagementPlan& plan) {
    std::vector<std::string> names;
    for (const auto& [name, term] : plan.thermostat_terms) names.push_back(name);
    return names;
}

int effective_num_states(const ScenarioConfig& config, const std::optional<int>& override_k) {
    if (override_k) return *override_k;
    int k = 0;
    bool uniform = true;
    for (const ClassSpec& cls : config.community.classes) {
        if (!is_thermostat(cls.kind)) continue;
        if (k == 0)
            k = cls.num_states;
        else if (k != cls.num_states)
            uniform = false;
    }
    return uniform ? k : 0;  // 0: devices disagree, column left blank
}

}  // namespace

std::vector<int> resolve_customer_order(const ScenarioConfig& config, int num_customers) {
    std::vector<int> order(num_customers);
    std::iota(order.begin(), order.end(), 0);
    switch (config.order.kind) {
        case OrderPolicy::Kind::Generation:
            break;
        case OrderPolicy::Kind::Shuffle: {
            Rng rng(config.order.shuffle_seed);
            rng.shuffle(order);
            break;
        }
        case OrderPolicy::Kind::Explicit:
            order = config.order.explicit_order;
            break;
    }
    return order;
}

SimulationReport evaluate_scenario(const ScenarioConfig& config, const Community& community) {
    EvalOptions options;
    options.thermostat_first = config.thermostat_first;
    options.customer_order =
        resolve_customer_order(config, static_cast<int>(community.customers.size()));
    return evaluate_plan(community, config.plan, options);
}

std::string report_to_json(const SimulationReport& report) {
    ordered_json j;
    j["num_customers"] = report.num_customers;
    j["slots"] = report.slots;
    j["dt_minutes"] = report.dt_minutes;
    j["phase_order"] = report.phase_order;
    j["peak_before_kw"] = report.peak_before_kw;
    j["peak_after_shiftable_kw"] = report.peak_after_shiftable_kw;
    j["peak_after_thermostat_kw"] = report.peak_after_thermostat_kw;
    j["percent_peak_reduction"] = report.percent_peak_reduction;
    j["energy_before_kwh"] = report.energy_before_kwh;
    j["energy_after_kwh"] = report.energy_after_kwh;
    j["eligible_counts"] = report.eligible_counts;
    j["avg_severity_F"] = report.avg_severity_F;
    j["avg_realized_dev_F"] = report.avg_realized_dev_F;
    ordered_json customers = ordered_json::array();
    for (const CustomerScheduleRecord& rec : report.customers) {
        ordered_json jc;
        jc["id"] = rec.customer_id;
        ordered_json shiftables = ordered_json::array();
        for (const ShiftScheduleRecord& s : rec.shiftables) {
            ordered_json js;
            js["class"] = s.class_name;
            js["pref_start_slot"] = s.preferred_start_slot;
            js["assigned_start_slot"] = s.assigned_start_slot;
            js["delay_slots"] = s.delay_slots;
            shiftables.push_back(std::move(js));
        }
        jc["shiftables"] = std::move(shiftables);
        ordered_json thermostats = ordered_json::array();
        for (const ThermoScheduleRecord& th : rec.thermostats) {
            ordered_json jt;
            jt["class"] = th.class_name;
            jt["num_states"] = th.num_states;
            jt["severity_F"] = th.severity_F;
            jt["eligible"] = th.eligible;
            jt["demanded_slots"] = th.demanded_slots;
            jt["denied_slots"] = th.denied_slots;
            jt["max_dev_F"] = th.max_deviation_F;
            jt["avg_dev_F"] = th.avg_deviation_F;
            thermostats.push_back(std::move(jt));
        }
        jc["thermostats"] = std::move(thermostats);
        customers.push_back(std::move(jc));
    }
    j["customers"] = std::move(customers);
    return j.dump(2) + "\n";
}

int cmd_run(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
            const RunOverrides& overrides) {
    const LoadedScenario loaded = prepare(config_path, overrides);
    const SimulationReport report = evaluate_scenario(loaded.config, loaded.community);

    std::filesystem::create_directories(out_dir);
    write_file(out_dir / "summary.json", report_to_json(report));
    write_file(out_dir / "profiles.csv", profiles_csv(report));
    write_file(out_dir / "schedules.csv", schedules_csv(report));
    write_file(out_dir / "trace.jsonl", trace_jsonl(report));

    std::cout << "peak " << fmt(report.peak_before_kw) << " kW -> "
              << fmt(report.profile_after_phase2.peak()) << " kW ("
              << fmt(report.percent_peak_reduction) << "% reduction)\n";
    return 0;
}

int cmd_sweep(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
              const RunOverrides& overrides, int workers) {
    const LoadedScenario loaded = prepare(config_path, overrides);
    const ScenarioConfig& config = loaded.config;
    if (config.sweep_axes.empty())
        throw ConfigError("sweep: scenario has no sweep.axes");

    // Grid point count and per-axis strides (row-major, first axis slowest).
    size_t num_points = 1;
    for (const SweepAxis& axis : config.sweep_axes) num_points *= axis.values.size();

    const std::vector<int> order =
        resolve_customer_order(config, static_cast<int>(loaded.community.customers.size()));

    struct Row {
        std::vector<std::string> axis_labels;
        int num_states = 0;
        double peak_before_kw = 0.0;
        double peak_after_kw = 0.0;
        double percent_reduction = 0.0;
        std::map<std::string, int> eligible;
        std::map<std::string, double> theta_ave;
        std::map<std::string, double> severity_ave;
    };
    std::vector<Row> rows(num_points);
    std::atomic<size_t> next{0};
    std::vector<std::string> errors(num_points);

    const auto evaluate_point = [&](size_t index) {
        EngagementPlan plan = config.plan;
        std::optional<int> k_override;
        Row& row = rows[index];
        size_t rem = index;
        for (size_t a = config.sweep_axes.size(); a-- > 0;) {
            const SweepAxis& axis = config.sweep_axes[a];
            const size_t v = rem % axis.values.size();
            rem /= axis.values.size();
            apply_axis_value(axis.param, axis.values[v], plan, k_override);
            row.axis_labels.insert(row.axis_labels.begin(), axis.values[v].label());
        }
        EvalOptions options;
        options.thermostat_first = config.thermostat_first;
        options.num_states_override = k_override;
        options.customer_order = order;
        const SimulationReport report = evaluate_plan(loaded.community, plan, options);
        row.num_states = effective_num_states(config, k_override);
        row.peak_before_kw = report.peak_before_kw;
        row.peak_after_kw = report.profile_after_phase2.peak();
        row.percent_reduction = report.percent_peak_reduction;
        row.eligible = report.eligible_counts;
        row.theta_ave = report.avg_realized_dev_F;
        row.severity_ave = report.avg_severity_F;
    };

    const int n_workers = std::max(1, workers);
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) {
        pool.emplace_back([&] {
            for (size_t i = next.fetch_add(1); i < num_points; i = next.fetch_add(1)) {
                try {
                    evaluate_point(i);
                } catch (const std::exception& e) {
                    errors[i] = e.what();
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    for (size_t i = 0; i < num_points; ++i)
        if (!errors[i].empty())
            throw ConfigError("sweep point " + std::to_string(i) + ": " + errors[i]);

    // Long-format CSV: axis columns, then the metric columns.
    const std::vector<std::string> thermo_classes = thermostat_class_names(config.plan);
    std::string csv;
    for (const SweepAxis& axis : config.sweep_axes) csv += axis.param + ',';
    csv += "K,peak_before_kw,peak_after_kw,percent_peak_reduction";
    for (const std::string& name : thermo_classes) csv += ",eligible_" + name;
    for (const std::string& name : thermo_classes) csv += ",theta_ave_" + name;
    for (const std::string& name : thermo_classes) csv += ",severity_ave_" + name;
    csv += '\n';
    for (const Row& row : rows) {
        for (const std::string& label : row.axis_labels) csv += label + ',';
        csv += row.num_states > 0 ? std::to_string(row.num_states) : std::string();
        csv += ',' + fmt(row.peak_before_kw) + ',' + fmt(row.peak_after_kw) + ',' +
               fmt(row.percent_reduction);
        const auto count_of = [&](const std::string& name) {
            const auto it = row.eligible.find(name);
            return it == row.eligible.end() ? 0 : it->second;
        };
        const auto metric_of = [&](const std::map<std::string, double>& m,
                                   const std::string& name) {
            const auto it = m.find(name);
            return it == m.end() ? 0.0 : it->second;
        };
        for (const std::string& name : thermo_classes)
            csv += ',' + std::to_string(count_of(name));
        for (const std::string& name : thermo_classes)
            csv += ',' + fmt(metric_of(row.theta_ave, name));
        for (const std::string& name : thermo_classes)
            csv += ',' + fmt(metric_of(row.severity_ave, name));
        csv += '\n';
    }

    std::filesystem::create_directories(out_dir);
    write_file(out_dir / "sweep.csv", csv);
    std::cout << "evaluated " << num_points << " grid points -> "
              << (out_dir / "sweep.csv").string() << "\n";
    return 0;
}

int cmd_validate(const std::filesystem::path& config_path) {
    ScenarioConfig config;
    try {
        config = load_scenario(config_path);
    } catch (const ConfigError& e) {
        std::cout << e.what() << "\n";
        return 1;
    }
    const std::vector<std::string> issues = validate_scenario(config);
    if (issues.empty()) {
        std::cout << "ok\n";
        return 0;
    }
    for (const std::string& issue : issues) std::cout << issue << "\n";
    return 1;
}

}  // namespace drsim
