#include <doctest.h>

#include <set>

#include "drsim/cli.hpp"
#include "drsim/config.hpp"
#include "drsim/coordinator.hpp"
#include "drsim/errors.hpp"
#include "drsim/rng.hpp"
#include "drsim/sched_shiftable.hpp"
#include "drsim/sched_thermostat.hpp"

using namespace drsim;

namespace {

const std::filesystem::path kScenarios =
    std::filesystem::path(DRSIM_SOURCE_DIR) / "scenarios";

ScenarioConfig scenario(const char* name) { return load_scenario(kScenarios / name); }

EngagementPlan cdp_plan(double dev_ac, double ref_ac, double dev_wh, double ref_wh,
                        int duration_min, int delay_min) {
    EngagementPlan plan;
    plan.mode = PlanMode::CDP;
    ThermostatPlanTerm ac;
    ac.mode = PlanMode::CDP;
    ac.max_duration_minutes = duration_min;
    ac.max_deviation_F = dev_ac;
    ac.reference_temp_F = ref_ac;
    ThermostatPlanTerm wh = ac;
    wh.max_deviation_F = dev_wh;
    wh.reference_temp_F = ref_wh;
    plan.thermostat_terms["AC"] = ac;
    plan.thermostat_terms["WH"] = wh;
    plan.shiftable_terms["CD"] = {delay_min};
    plan.shiftable_terms["DW"] = {delay_min};
    return plan;
}

}  // namespace

TEST_CASE("phase folds: trivial communities") {
    const ScenarioConfig config = scenario("community100.json");
    CommunityConfig small = config.community;
    small.num_customers = 5;
    const Community community = generate_community(small, 42);

    // A plan with no shiftable terms leaves phase 1 as the identity.
    EngagementPlan thermostats_only = config.plan;
    thermostats_only.shiftable_terms.clear();
    const SimulationReport r1 = evaluate_plan(community, thermostats_only);
    for (int t = 0; t < r1.slots; ++t)
        CHECK(r1.profile_after_phase1[t] == doctest::Approx(r1.profile_before[t]));

    // All-ineligible thermostats leave phase 2 as the identity.
    EngagementPlan ineligible = config.plan;
    ineligible.thermostat_terms["AC"].reference_temp_F = 60.0;   // below every set point
    ineligible.thermostat_terms["WH"].reference_temp_F = 130.0;  // above every set point
    const SimulationReport r2 = evaluate_plan(community, ineligible);
    for (int t = 0; t < r2.slots; ++t)
        CHECK(r2.profile_after_phase2[t] == doctest::Approx(r2.profile_after_phase1[t]));
    for (const auto& [name, count] : r2.eligible_counts) CHECK(count == 0);
}

TEST_CASE("three-customer fold equals the hand-spliced sequence") {
    const ScenarioConfig config = scenario("community100.json");
    CommunityConfig small = config.community;
    small.num_customers = 3;
    const Community community = generate_community(small, 17);
    const EngagementPlan& plan = config.plan;

    const SimulationReport report = evaluate_plan(community, plan);

    LoadProfile running = aggregate(community);
    for (const Customer& customer : community.customers) {
        LoadProfile background = running;
        for (const ShiftableLoad& dev : customer.shiftables)
            background -= demanded_profile(community.grid, dev);
        running = shiftable::schedule_customer(background, community.grid, customer, plan).profile;
    }
    for (int t = 0; t < community.grid.slots; ++t)
        CHECK(report.profile_after_phase1[t] == doctest::Approx(running[t]));

    for (const Customer& customer : community.customers) {
        LoadProfile background = running;
        for (const ThermostatLoad& dev : customer.thermostats)
            background -= demanded_profile(community.grid, dev);
        running = thermostat::schedule_customer(background, community.grid, customer, plan).profile;
    }
    for (int t = 0; t < community.grid.slots; ++t)
        CHECK(report.profile_after_phase2[t] == doctest::Approx(running[t]));
}

TEST_CASE("evaluate_plan: zero budgets change nothing") {
    const ScenarioConfig config = scenario("community100.json");
    CommunityConfig small = config.community;
    small.num_customers = 10;
    const Community community = generate_community(small, 3);

    const EngagementPlan plan = cdp_plan(0.0, 80, 0.0, 96, 0, 0);
    const SimulationReport report = evaluate_plan(community, plan);
    CHECK(report.percent_peak_reduction == 0.0);
    for (int t = 0; t < report.slots; ++t)
        CHECK(report.profile_after_phase2[t] == doctest::Approx(report.profile_before[t]));
}

TEST_CASE("evaluate_plan: peak ordering, energy accounting, reporting") {
    const ScenarioConfig config = scenario("community100.json");
    CommunityConfig small = config.community;
    small.num_customers = 50;
    const Community community = generate_community(small, 2024);

    const EngagementPlan plan = cdp_plan(2, 80, 4, 96, 60, 60);
    EvalOptions k2, k5;
    k2.num_states_override = 2;
    k5.num_states_override = 5;
    const SimulationReport r2 = evaluate_plan(community, plan, k2);
    const SimulationReport r5 = evaluate_plan(community, plan, k5);

    for (const SimulationReport* r : {&r2, &r5}) {
        CHECK(r->profile_after_phase1.peak() <= r->peak_before_kw + 1e-9);
        CHECK(r->profile_after_phase2.peak() <= r->profile_after_phase1.peak() + 1e-9);
        CHECK(r->percent_peak_reduction >= 0.0);
        CHECK(r->percent_peak_reduction <= 100.0);
        // Shifting preserves energy; throttling can only remove it.
        CHECK(r->profile_after_phase1.energy_kwh(community.grid) ==
              doctest::Approx(r->energy_before_kwh));
        CHECK(r->energy_after_kwh <= r->energy_before_kwh + 1e-9);
    }
    CHECK(r2.percent_peak_reduction > 0.0);
    CHECK(r2.percent_peak_reduction <= r5.percent_peak_reduction);
}

TEST_CASE("evaluate_plan: deterministic down to the serialized report") {
    const ScenarioConfig config = scenario("community100.json");
    CommunityConfig small = config.community;
    small.num_customers = 20;
    const Community community = generate_community(small, 99);
    const SimulationReport a = evaluate_plan(community, config.plan);
    const SimulationReport b = evaluate_plan(community, config.plan);
    CHECK(report_to_json(a) == report_to_json(b));
    for (int t = 0; t < a.slots; ++t)
        CHECK(a.profile_after_phase2[t] == b.profile_after_phase2[t]);
}

TEST_CASE("customer order changes the fold; explicit orders are honored") {
    const ScenarioConfig config = scenario("community100.json");
    CommunityConfig small = config.community;
    small.num_customers = 6;
    const Community community = generate_community(small, 12);

    EvalOptions reversed;
    reversed.customer_order = {5, 4, 3, 2, 1, 0};
    const SimulationReport a = evaluate_plan(community, config.plan);
    const SimulationReport b = evaluate_plan(community, config.plan, reversed);
    CHECK(b.trace.front().customer_id == 5);
    CHECK(a.trace.front().customer_id == 0);

    EvalOptions bad;
    bad.customer_order = {0, 0, 1, 2, 3, 4};
    CHECK_THROWS_AS(evaluate_plan(community, config.plan, bad), ConfigError);
}

TEST_CASE("phase order flag swaps the pipeline") {
    const ScenarioConfig config = scenario("community100.json");
    CommunityConfig small = config.community;
    small.num_customers = 8;
    const Community community = generate_community(small, 4);

    EvalOptions swapped;
    swapped.thermostat_first = true;
    const SimulationReport report = evaluate_plan(community, config.plan, swapped);
    CHECK(report.phase_order == "thermostat_first");
    CHECK(report.trace.front().phase == "thermostat");
    CHECK(report.trace.back().phase == "shiftable");
    CHECK(report.profile_after_phase2.peak() <= report.profile_after_phase1.peak() + 1e-9);
}

TEST_CASE("privacy: the trace carries only profile-level data") {
    const ScenarioConfig config = scenario("table1_cdp.json");
    const Community community = generate_community(config.community, config.seed);
    const SimulationReport report = evaluate_plan(community, config.plan);
    // Two messages per customer per phase.
    CHECK(report.trace.size() == 2 * 2 * community.customers.size());
    std::set<std::string> digests;
    for (const TraceEntry& e : report.trace) {
        CHECK((e.phase == "shiftable" || e.phase == "thermostat"));
        CHECK((e.direction == "to_home" || e.direction == "to_grid"));
        CHECK(e.profile_digest.size() == 16);
        CHECK(e.peak_kw >= 0.0);
        digests.insert(e.profile_digest);
    }
    CHECK(digests.size() >= 2);
}

TEST_CASE("fuzz: random communities and plans evaluate cleanly") {
    // evaluate_plan re-verifies every schedule and throws on any constraint
    // violation, so driving random scenarios through it is a broad net.
    const ScenarioConfig base = scenario("community100.json");
    Rng rng(8888);
    for (int trial = 0; trial < 40; ++trial) {
        CommunityConfig cc = base.community;
        cc.num_customers = 1 + static_cast<int>(rng.uniform_int(0, 7));
        for (ClassSpec& cls : cc.classes)
            if (is_thermostat(cls.kind))
                cls.num_states = 2 + static_cast<int>(rng.uniform_int(0, 3));
        const Community community = generate_community(cc, rng.uniform_int(0, 1 << 20));

        EngagementPlan plan;
        const bool pdp = rng.uniform01() < 0.5;
        plan.mode = pdp ? PlanMode::PDP : PlanMode::CDP;
        for (const char* name : {"AC", "WH"}) {
            ThermostatPlanTerm term;
            term.mode = plan.mode;
            term.max_duration_minutes = 5 * static_cast<int>(rng.uniform_int(0, 24));
            term.reference_temp_F = rng.uniform(60, 125);
            if (pdp)
                term.beta = rng.uniform(0.05, 1.0);
            else
                term.max_deviation_F = rng.uniform(0, 8);
            plan.thermostat_terms[name] = term;
        }
        for (const char* name : {"CD", "DW"})
            plan.shiftable_terms[name] = {5 * static_cast<int>(rng.uniform_int(0, 12))};

        EvalOptions options;
        options.thermostat_first = rng.uniform01() < 0.5;
        const SimulationReport report = evaluate_plan(community, plan, options);
        CHECK(report.profile_after_phase1.peak() <= report.peak_before_kw + 1e-9);
        CHECK(report.profile_after_phase2.peak() <=
              report.profile_after_phase1.peak() + 1e-9);
        CHECK(report.energy_after_kwh <= report.energy_before_kwh + 1e-6);
        CHECK(report.percent_peak_reduction >= 0.0);
        CHECK(report.percent_peak_reduction <= 100.0);
        for (int t = 0; t < report.slots; ++t) {
            CHECK(report.profile_after_phase1[t] >= -1e-9);
            CHECK(report.profile_after_phase2[t] >= -1e-9);
        }
    }
}

TEST_CASE("unplanned device classes are folded into the base load") {
    const ScenarioConfig config = scenario("community100.json");
    CommunityConfig small = config.community;
    small.num_customers = 4;
    const Community community = generate_community(small, 66);

    EngagementPlan no_wh = config.plan;
    no_wh.thermostat_terms.erase("WH");
    const SimulationReport report = evaluate_plan(community, no_wh);
    CHECK(report.eligible_counts.count("WH") == 0);
    for (const CustomerScheduleRecord& rec : report.customers)
        for (const ThermoScheduleRecord& th : rec.thermostats) CHECK(th.class_name != "WH");
    // The aggregate still contains the WH demand (as essential load).
    CHECK(report.energy_before_kwh ==
          doctest::Approx(aggregate(community).energy_kwh(community.grid)));
}
