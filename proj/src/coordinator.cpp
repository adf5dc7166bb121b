#include "drsim/coordinator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "drsim/errors.hpp"
#include "drsim/sched_shiftable.hpp"
#include "drsim/sched_thermostat.hpp"

namespace drsim {

namespace {

constexpr double kSeverityTol = 1e-9;  // FP slack on temperature constraints

void add_trace(SimulationReport& report, const char* phase, int customer_id, const char* direction,
               const LoadProfile& profile) {
    report.trace.push_back(TraceEntry{phase, customer_id, direction,
                                      digest_hex(profile_digest(profile)), profile.peak()});
}

// Devices whose class is absent from the plan are essential load: their
// demanded profile moves into the base load and they drop out of scheduling.
// The optional K override replaces the state count of every thermostat.
Community effective_community(const Community& community, const EngagementPlan& plan,
                              const std::optional<int>& num_states_override) {
    if (num_states_override && *num_states_override < 2)
        throw ConfigError("num_states override must be >= 2");
    Community eff;
    eff.grid = community.grid;
    eff.customers.reserve(community.customers.size());
    for (const Customer& src : community.customers) {
        Customer customer;
        customer.id = src.id;
        customer.base_load = src.base_load;
        for (const ShiftableLoad& dev : src.shiftables) {
            if (plan.has_shiftable_term(dev.class_name))
                customer.shiftables.push_back(dev);
            else
                customer.base_load += demanded_profile(community.grid, dev);
        }
        for (const ThermostatLoad& dev : src.thermostats) {
            if (plan.has_thermostat_term(dev.class_name)) {
                customer.thermostats.push_back(dev);
                if (num_states_override)
                    customer.thermostats.back().num_states = *num_states_override;
            } else {
                customer.base_load += demanded_profile(community.grid, dev);
            }
        }
        eff.customers.push_back(std::move(customer));
    }
    return eff;
}

[[noreturn]] void constraint_failure(const char* what, int customer_id,
                                     const std::string& class_name, int t) {
    std::ostringstream os;
    os << "constraint violation (" << what << ") at customer " << customer_id << ", class "
       << class_name << ", slot " << t;
    throw ModelError(os.str());
}

// Start-time constraint: the chosen delay stays within the plan's budget and
// the task still completes before midnight.
void verify_shift_schedule(const TimeGrid& grid, const Customer& customer,
                           const EngagementPlan& plan, const shiftable::ShiftResult& result) {
    for (size_t i = 0; i < customer.shiftables.size(); ++i) {
        const ShiftableLoad& dev = customer.shiftables[i];
        const int delay = result.delay_slots[i];
        int max_delay = 0;
        if (const auto it = plan.shiftable_terms.find(dev.class_name);
            it != plan.shiftable_terms.end())
            max_delay = grid.minutes_to_slots(it->second.max_delay_minutes);
        if (delay < 0 || delay > max_delay)
            constraint_failure("delay budget", customer.id, dev.class_name,
                               dev.preferred_start_slot + delay);
        if (dev.preferred_start_slot + delay + dev.duration_slots > grid.slots)
            constraint_failure("midnight spill-over", customer.id, dev.class_name,
                               dev.preferred_start_slot + delay);
    }
}

// State-matrix constraints: one state per demanded slot, no scheduled state
// elsewhere, denied-slot budget, and the severity bound on every demanded slot.
void verify_thermo_schedule(const TimeGrid& grid, const Customer& customer,
                            const EngagementPlan& plan, const thermostat::ThermoCustomerResult& result) {
    for (size_t i = 0; i < customer.thermostats.size(); ++i) {
        const ThermostatLoad& dev = customer.thermostats[i];
        const thermostat::ThermostatResult& r = result.results[i];
        for (int t = 0; t < grid.slots; ++t) {
            const int k = r.states.state[t];
            if (dev.demanded(t)) {
                if (k < 1 || k > dev.num_states)
                    constraint_failure("one state per demanded slot", customer.id, dev.class_name,
                                       t);
            } else if (k != 0) {
                constraint_failure("power outside demand window", customer.id, dev.class_name, t);
            }
        }
        const auto it = plan.thermostat_terms.find(dev.class_name);
        const int duration_slots =
            it == plan.thermostat_terms.end()
                ? 0
                : grid.minutes_to_slots(it->second.max_duration_minutes);
        if (r.denied_slots > duration_slots)
            constraint_failure("inconvenience duration", customer.id, dev.class_name,
                               r.peak_slots.empty() ? 0 : r.peak_slots.back());
        const double allowed = result.severities[i];
        for (int t = 0; t < grid.slots; ++t)
            if (dev.demanded(t) && r.severity_trace[t] > allowed + kSeverityTol)
                constraint_failure("inconvenience severity", customer.id, dev.class_name, t);
    }
}

std::vector<int> resolve_order(const Community& community, const std::vector<int>& requested) {
    const int n = static_cast<int>(community.customers.size());
    if (requested.empty()) {
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        return order;
    }
    std::vector<bool> seen(n, false);
    for (int j : requested) {
        if (j < 0 || j >= n || seen[j]) throw ConfigError("customer order is not a permutation");
        seen[j] = true;
    }
    if (static_cast<int>(requested.size()) != n)
        throw ConfigError("customer order must list every customer exactly once");
    return requested;
}

}  // namespace

LoadProfile run_phase_shiftable(const LoadProfile& x, const Community& community,
                                const EngagementPlan& plan, const std::vector<int>& order,
                                SimulationReport& report) {
    LoadProfile running = x;
    for (int j : order) {
        const Customer& customer = community.customers[j];
        add_trace(report, "shiftable", customer.id, "to_home", running);

        LoadProfile background = running;
        for (const ShiftableLoad& dev : customer.shiftables)
            background -= demanded_profile(community.grid, dev);

        shiftable::ShiftResult result =
            shiftable::schedule_customer(background, community.grid, customer, plan);
        verify_shift_schedule(community.grid, customer, plan, result);
        running = std::move(result.profile);
        add_trace(report, "shiftable", customer.id, "to_grid", running);

        CustomerScheduleRecord& record = report.customers[j];
        record.shiftables.clear();
        for (size_t i = 0; i < customer.shiftables.size(); ++i) {
            const ShiftableLoad& dev = customer.shiftables[i];
            record.shiftables.push_back(ShiftScheduleRecord{
                dev.class_name, dev.rated_kw, dev.duration_slots, dev.preferred_start_slot,
                dev.preferred_start_slot + result.delay_slots[i], result.delay_slots[i]});
        }
    }
    return running;
}

LoadProfile run_phase_thermostat(const LoadProfile& x_hat, const Community& community,
                                 const EngagementPlan& plan, const std::vector<int>& order,
                                 SimulationReport& report) {
    LoadProfile running = x_hat;
    for (int j : order) {
        const Customer& customer = community.customers[j];
        add_trace(report, "thermostat", customer.id, "to_home", running);

        LoadProfile background = running;
        for (const ThermostatLoad& dev : customer.thermostats)
            background -= demanded_profile(community.grid, dev);

        thermostat::ThermoCustomerResult result =
            thermostat::schedule_customer(background, community.grid, customer, plan);
        verify_thermo_schedule(community.grid, customer, plan, result);
        running = std::move(result.profile);
        add_trace(report, "thermostat", customer.id, "to_grid", running);

        CustomerScheduleRecord& record = report.customers[j];
        record.thermostats.clear();
        for (size_t i = 0; i < customer.thermostats.size(); ++i) {
            const ThermostatLoad& dev = customer.thermostats[i];
            const thermostat::ThermostatResult& r = result.results[i];
            ThermoScheduleRecord rec;
            rec.class_name = dev.class_name;
            rec.rated_kw = dev.rated_kw;
            rec.num_states = dev.num_states;
            rec.severity_F = result.severities[i];
            rec.eligible = result.severities[i] > 0.0;
            rec.demanded_slots = dev.demanded_slot_count();
            rec.denied_slots = r.denied_slots;
            double sum_dev = 0.0, max_dev = 0.0;
            for (int t : dev.window_slots()) {
                sum_dev += r.severity_trace[t];
                max_dev = std::max(max_dev, r.severity_trace[t]);
            }
            rec.max_deviation_F = max_dev;
            rec.avg_deviation_F = rec.demanded_slots > 0 ? sum_dev / rec.demanded_slots : 0.0;
            record.thermostats.push_back(rec);
        }
    }
    return running;
}

SimulationReport evaluate_plan(const Community& community, const EngagementPlan& plan,
                               const EvalOptions& options) {
    const Community eff = effective_community(community, plan, options.num_states_override);
    const std::vector<int> order = resolve_order(eff, options.customer_order);

    SimulationReport report;
    report.num_customers = static_cast<int>(eff.customers.size());
    report.slots = eff.grid.slots;
    report.dt_minutes = eff.grid.dt_minutes();
    report.phase_order = options.thermostat_first ? "thermostat_first" : "shiftable_first";
    report.customers.resize(eff.customers.size());
    for (size_t j = 0; j < eff.customers.size(); ++j)
        report.customers[j].customer_id = eff.customers[j].id;

    const LoadProfile x = aggregate(eff);
    report.profile_before = x;
    report.peak_before_kw = x.peak();
    report.energy_before_kwh = x.energy_kwh(eff.grid);

    if (options.thermostat_first) {
        report.profile_after_phase1 = run_phase_thermostat(x, eff, plan, order, report);
        report.peak_after_thermostat_kw = report.profile_after_phase1.peak();
        report.profile_after_phase2 =
            run_phase_shiftable(report.profile_after_phase1, eff, plan, order, report);
        report.peak_after_shiftable_kw = report.profile_after_phase2.peak();
    } else {
        report.profile_after_phase1 = run_phase_shiftable(x, eff, plan, order, report);
        report.peak_after_shiftable_kw = report.profile_after_phase1.peak();
        report.profile_after_phase2 =
            run_phase_thermostat(report.profile_after_phase1, eff, plan, order, report);
        report.peak_after_thermostat_kw = report.profile_after_phase2.peak();
    }
    report.energy_after_kwh = report.profile_after_phase2.energy_kwh(eff.grid);

    // Each phase only reduces or preserves the peak; shifting preserves
    // energy while throttling can only remove it.
    const double p0 = report.peak_before_kw;
    const double p1 = report.profile_after_phase1.peak();
    const double p2 = report.profile_after_phase2.peak();
    if (p1 > p0 + 1e-9 || p2 > p1 + 1e-9)
        throw ModelError("phase increased the aggregated peak");
    const double energy_tol = 1e-6 * std::max(1.0, report.energy_before_kwh);
    if (report.energy_after_kwh > report.energy_before_kwh + energy_tol)
        throw ModelError("evaluation increased total energy");
    report.percent_peak_reduction = p0 > 0.0 ? 100.0 * (p0 - p2) / p0 : 0.0;

    // Eligibility counts and mean severities straight from the plan terms;
    // realized deviations from the schedule records.
    std::map<std::string, double> dev_sum;
    std::map<std::string, int> dev_count;
    for (size_t j = 0; j < eff.customers.size(); ++j) {
        for (size_t i = 0; i < eff.customers[j].thermostats.size(); ++i) {
            const ThermostatLoad& dev = eff.customers[j].thermostats[i];
            const auto it = plan.thermostat_terms.find(dev.class_name);
            if (it == plan.thermostat_terms.end()) continue;
            const double sev = severity(it->second, dev.set_point_F, dev.kind);
            report.eligible_counts.try_emplace(dev.class_name, 0);
            report.avg_severity_F.try_emplace(dev.class_name, 0.0);
            report.avg_realized_dev_F.try_emplace(dev.class_name, 0.0);
            if (sev > 0.0) {
                report.eligible_counts[dev.class_name] += 1;
                report.avg_severity_F[dev.class_name] += sev;
                dev_sum[dev.class_name] += report.customers[j].thermostats[i].avg_deviation_F;
                dev_count[dev.class_name] += 1;
            }
        }
    }
    for (auto& [name, total] : report.avg_severity_F) {
        const int n = report.eligible_counts[name];
        if (n > 0) total /= n;
        if (dev_count[name] > 0) report.avg_realized_dev_F[name] = dev_sum[name] / dev_count[name];
    }

    return report;
}

}  // namespace drsim
