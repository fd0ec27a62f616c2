#include "qrp/oracle.hpp"
#include "qrp/simulator.hpp"
#include "support/toys.hpp"

#include <gtest/gtest.h>

using namespace qrp;

namespace {

Sampler expected() { return Sampler(RngStream(1), SamplingMode::expected); }

PolicyParams no_pm() {
    PolicyParams p;
    p.n_u = 0;
    return p;
}

SimOptions no_suspension() {
    SimOptions o;
    o.pm_suspension = false;
    return o;
}

SchedulePlan chain(const ProblemInstance& inst, std::vector<JobId> ids, MachineId k = 1) {
    SchedulePlan plan;
    for (const auto& m : inst.machines) plan.machines.push_back({m.id, {}});
    for (auto id : ids) plan.on(k).slots.push_back({id, inst.job(id).job_type, 0, 0});
    replan_times(plan, inst);
    return plan;
}

// A short trace with a CM, built on a toy whose second job is ineligible.
std::pair<ProblemInstance, ScheduleTrace> cm_trace() {
    auto inst = fixtures::toy_instance({{2}, {3}, {1}});
    inst.jobs[1].initial_quality = 11.0;
    auto t = simulate(chain(inst, {0, 1, 2}), inst, no_pm(), expected());
    return {inst, t};
}

}  // namespace

TEST(Feasibility, SimulatedTraceIsFeasible) {
    auto [inst, t] = cm_trace();
    ASSERT_EQ(t.maintenance.size(), 1u);
    auto rep = check_feasibility(t, inst);
    EXPECT_TRUE(rep.feasible()) << rep.violations.front().description;
}

TEST(Feasibility, FlagsEachInjectedFault) {
    auto [inst, t] = cm_trace();

    auto dup = t;
    dup.jobs.push_back(dup.jobs.front());
    EXPECT_GE(check_feasibility(dup, inst).count("C4"), 1u);

    auto missing = t;
    missing.jobs.pop_back();
    EXPECT_GE(check_feasibility(missing, inst).count("C4"), 1u);

    auto overlap = t;
    overlap.jobs[2].start -= 0.5;
    overlap.jobs[2].end -= 0.5;
    EXPECT_GE(check_feasibility(overlap, inst).count("C13"), 1u);

    auto two = t;
    two.maintenance.clear();
    two.jobs[1].start = 1.0;
    two.jobs[1].end = 4.0;
    EXPECT_GE(check_feasibility(two, inst).count("C5"), 1u);

    auto slow = t;
    slow.jobs[0].p = 2.5;
    slow.jobs[0].end = 2.5;
    EXPECT_GE(check_feasibility(slow, inst).count("C8"), 1u);

    auto off = t;
    off.jobs[0].end = 2.25;
    EXPECT_GE(check_feasibility(off, inst).count("C9"), 1u);

    auto no_cm = t;
    no_cm.maintenance.clear();
    EXPECT_GE(check_feasibility(no_cm, inst).count("C17"), 1u);

    // A PM stacked right after the CM.
    auto stacked = t;
    MaintenanceRecord pm = stacked.maintenance[0];
    pm.event.kind = MaintenanceKind::PM;
    pm.event.group_id = 0;
    pm.event.time = pm.event.time + pm.event.duration;
    pm.event.duration = 0.0;
    stacked.maintenance.push_back(pm);
    EXPECT_GE(check_feasibility(stacked, inst).count("C13"), 1u);

    auto ungrouped = stacked;
    ungrouped.maintenance.back().event.group_id.reset();
    EXPECT_GE(check_feasibility(ungrouped, inst).count("C15"), 1u);

    auto falling = t;
    falling.jobs[1].w_after = falling.jobs[1].w_before - 0.1;
    EXPECT_GE(check_feasibility(falling, inst).count("W"), 1u);
}

TEST(Feasibility, IncapableMachineIsC4) {
    auto inst = fixtures::toy_instance({{2, 2}}, 2);
    auto t = simulate(chain(inst, {0}), inst, no_pm(), expected());
    inst.jobs[0].nominal_times.erase(1);
    EXPECT_GE(check_feasibility(t, inst).count("C4"), 1u);
}

TEST(Enumerate, TwoIdenticalJobsOnTwoMachines) {
    auto inst = fixtures::toy_instance({{3, 3}, {3, 3}}, 2);
    auto r = enumerate(inst);
    EXPECT_DOUBLE_EQ(r.best.objectives.makespan, 3.0);
    EXPECT_DOUBLE_EQ(r.best.objectives.maintenance_cost, 0.0);
    ASSERT_EQ(r.pareto.size(), 1u);
    EXPECT_EQ(r.best.qualified, 2);
}

TEST(Enumerate, SingleMachineSumsTimes) {
    auto inst = fixtures::toy_instance({{1}, {2}, {4}});
    auto r = enumerate(inst);
    EXPECT_DOUBLE_EQ(r.best.objectives.makespan, 7.0);
}

TEST(Enumerate, RespectsSizeLimits) {
    std::vector<std::vector<double>> nine(9, {1.0});
    EXPECT_THROW((void)enumerate(fixtures::toy_instance(nine)), OracleSizeLimit);
    EXPECT_THROW((void)enumerate(fixtures::toy_instance({{1, 1, 1, 1}}, 4)), OracleSizeLimit);
}

TEST(Enumerate, EvaluateSequenceByHand) {
    // W0 0.6, wear 0.1 per unit of nominal time, theta 0.5, eta 0.
    auto inst = fixtures::toy_instance({{2}, {3}});
    auto& m = inst.machines[0];
    m.W0 = 0.6;
    m.mu_plus = 0.1;
    m.sigma_plus = 1e-9;
    m.beta = 0.0;
    // No PM: 0.6 -> 0.8 -> 1.1 > L, CM at the end.
    auto plain = evaluate_sequence(inst, 0, {{0, false}, {1, false}});
    EXPECT_DOUBLE_EQ(plain.objectives.makespan, 5.0);
    EXPECT_DOUBLE_EQ(plain.objectives.maintenance_cost, 50.0);
    // PM first: 0.3 -> 0.5 -> 0.8, no CM.
    auto pm = evaluate_sequence(inst, 0, {{0, true}, {1, false}});
    EXPECT_DOUBLE_EQ(pm.objectives.makespan, 6.0);
    EXPECT_DOUBLE_EQ(pm.objectives.maintenance_cost, 10.0);
    auto r = enumerate(inst);
    ASSERT_EQ(r.pareto.size(), 2u);
    EXPECT_DOUBLE_EQ(r.pareto[0].objectives.maintenance_cost, 50.0);
    EXPECT_DOUBLE_EQ(r.pareto[1].objectives.makespan, 6.0);
}

TEST(Enumerate, FrontCoversSimulatedPlans) {
    RngStream rng(77);
    for (int t = 0; t < 8; ++t) {
        auto inst = fixtures::pm_tradeoff_toy(rng, 5);
        auto oracle = enumerate(inst);
        for (int s = 0; s < 30; ++s) {
            Chromosome ch;
            for (std::size_t i = 0; i < inst.jobs.size(); ++i)
                ch.keys.push_back(1.0 + static_cast<double>(rng.below(2)) + rng.uniform());
            ch.zeta = rng.uniform(0.4, 1.0);
            ch.n_u = static_cast<int>(rng.below(3));
            auto plan = decode(ch, inst);
            auto trace = simulate(plan, inst, PolicyParams::from(ch), expected(), no_suspension());
            EXPECT_TRUE(check_feasibility(trace, inst).feasible());
            bool covered = false;
            for (const auto& p : oracle.pareto)
                covered |= p.objectives.makespan <= trace.objectives.makespan + 1e-9 &&
                           p.objectives.maintenance_cost <= trace.objectives.maintenance_cost + 1e-9;
            EXPECT_TRUE(covered) << "instance " << t << " sample " << s;
        }
    }
}
