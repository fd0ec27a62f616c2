#include "qrp/simulator.hpp"
#include "support/toys.hpp"

#include <gtest/gtest.h>

using namespace qrp;

namespace {

Sampler expected(std::uint64_t seed = 1) { return Sampler(RngStream(seed), SamplingMode::expected); }

PolicyParams no_pm() {
    PolicyParams p;
    p.n_u = 0;
    return p;
}

SchedulePlan chain(const ProblemInstance& inst, std::vector<JobId> ids, MachineId k = 1) {
    SchedulePlan plan;
    for (const auto& m : inst.machines) plan.machines.push_back({m.id, {}});
    for (auto id : ids) plan.on(k).slots.push_back({id, inst.job(id).job_type, 0, 0});
    replan_times(plan, inst);
    return plan;
}

}  // namespace

TEST(Simulate, DeterministicSum) {
    auto inst = fixtures::toy_instance({{2}, {3}});
    auto t = simulate(chain(inst, {0, 1}), inst, no_pm(), expected());
    EXPECT_NEAR(t.objectives.makespan, 5.0, 1e-9);
    EXPECT_EQ(t.objectives.maintenance_cost, 0.0);
    EXPECT_EQ(t.qualified, 2);
}

TEST(Simulate, IneligibleJobForcesOneCm) {
    ProblemInstance inst = base_machine_table();
    Job j;
    j.id = 0;
    j.job_type = 1;
    j.nominal_times = {{1, 2.616}};
    j.initial_quality = 42.72 + 0.1;
    inst.jobs.push_back(j);
    std::vector<MachineSnapshot> start;
    for (const auto& m : inst.machines) start.push_back({MachineState::initial(m), 0.0, true});
    start[0].state.W = 0.34;
    SimOptions opt;
    opt.start = &start;
    auto t = simulate(chain(inst, {0}), inst, no_pm(), expected(), opt);
    ASSERT_EQ(t.maintenance.size(), 1u);
    EXPECT_EQ(t.maintenance[0].event.kind, MaintenanceKind::CM);
    EXPECT_DOUBLE_EQ(t.maintenance[0].event.duration, 44.75);
    EXPECT_DOUBLE_EQ(t.maintenance[0].event.cost, 1312);
    EXPECT_DOUBLE_EQ(t.objectives.maintenance_cost, 1312);
}

TEST(Simulate, ReworkTriggerFiresAtFourthCompletion) {
    auto inst = fixtures::toy_instance({{1}, {1}, {1}, {1}, {1}});
    inst.machines[0].mu_minus = 0.0;
    inst.jobs[1].initial_quality = 11.0;
    inst.jobs[3].initial_quality = 11.0;
    PolicyParams p = no_pm();
    p.thr_r = 0.5;
    SimOptions opt;
    opt.mode = SimMode::ONLINE;
    auto t = simulate(chain(inst, {0, 1, 2, 3, 4}), inst, p, expected(), opt);
    ASSERT_GE(t.reschedules.size(), 1u);
    EXPECT_NEAR(t.reschedules[0].time, 4.0, 1e-6);
    EXPECT_FALSE(t.reschedules[0].flush);
    // The two copies are processed after the trigger and conform.
    int copies = 0;
    for (const auto& j : t.jobs)
        if (j.rework()) {
            ++copies;
            EXPECT_GE(j.start, 4.0 - 1e-9);
            EXPECT_TRUE(j.conforming);
        }
    EXPECT_EQ(copies, 2);
    EXPECT_EQ(t.qualified, 5);
}

TEST(Simulate, StaticModeNeverReschedules) {
    auto inst = fixtures::toy_instance({{1}, {1}, {1}, {1}});
    for (auto& j : inst.jobs) j.initial_quality = 11.0;
    inst.machines[0].mu_minus = 0.0;
    auto t = simulate(chain(inst, {0, 1, 2, 3}), inst, no_pm(), expected());
    EXPECT_TRUE(t.reschedules.empty());
    EXPECT_EQ(t.nonconforming, 4);
    EXPECT_EQ(t.jobs.size(), 4u);
}

TEST(Simulate, PmFiresAtThreshold) {
    auto inst = fixtures::toy_instance({{1}, {1}, {1}, {1}});
    inst.machines[0].mu_plus = 0.3;
    PolicyParams p;
    p.zeta = 0.5;
    p.n_u = 5;
    SimOptions opt;
    opt.pm_suspension = false;
    auto t = simulate(chain(inst, {0, 1, 2, 3}), inst, p, expected(), opt);
    ASSERT_FALSE(t.maintenance.empty());
    EXPECT_EQ(t.maintenance[0].event.kind, MaintenanceKind::PM);
    EXPECT_NEAR(t.maintenance[0].w_before, 0.6, 1e-6);
    EXPECT_NEAR(t.maintenance[0].w_after, 0.3, 1e-6);
}

TEST(Simulate, Determinism) {
    auto inst = base_machine_table();
    RngStream g(3);
    for (int i = 0; i < 30; ++i) {
        Job j;
        j.id = i;
        j.job_type = 1;
        j.nominal_times = {{1, g.uniform(2.3, 2.9)}, {3, g.uniform(2.3, 2.9)}, {4, g.uniform(2.3, 2.9)}};
        inst.jobs.push_back(j);
    }
    auto plan = nominal_plan(inst);
    SimOptions opt;
    opt.mode = SimMode::ONLINE;
    Sampler s(RngStream(99));
    auto a = simulate(plan, inst, {}, s, opt);
    auto b = simulate(plan, inst, {}, s, opt);
    ASSERT_EQ(a.jobs.size(), b.jobs.size());
    for (std::size_t i = 0; i < a.jobs.size(); ++i) {
        EXPECT_EQ(a.jobs[i].start, b.jobs[i].start);
        EXPECT_EQ(a.jobs[i].D, b.jobs[i].D);
    }
    EXPECT_EQ(a.objectives, b.objectives);
}

TEST(Fitness, StaticFormula) {
    EXPECT_NEAR(fitness_static(10, 100, 50), 0.02, 1e-12);
    EXPECT_EQ(fitness_static(0, 100, 50), 0.0);
    EXPECT_NEAR(fitness_static(10, 100, 100), 0.01, 1e-12);
    EXPECT_NEAR(fitness_static(10, 0, 50), 100.0 / 50.0, 1e-12);  // cost floor of 1
}

TEST(Fitness, ReschedFormula) {
    EXPECT_NEAR(fitness_resched(4, 80, 20), 0.01, 1e-12);
    EXPECT_EQ(fitness_resched(0, 80, 20), 0.0);
    EXPECT_NEAR(fitness_resched(4, 80 * 3, 20 * 3), 0.01 / 9, 1e-12);
}

TEST(Fitness, EvalFormula) {
    EXPECT_NEAR(fitness_eval(100, 50, 1), 2e-4, 1e-15);
    EXPECT_GT(fitness_eval(100, 50, 1), fitness_eval(100, 50, 1.2));
    EXPECT_GT(fitness_eval(100, 50, 1), fitness_eval(110, 50, 1));
}

TEST(Objectives, MakespanAndCost) {
    ScheduleTrace t;
    for (double e : {5.0, 9.0, 7.0}) {
        JobRecord r;
        r.end = e;
        t.jobs.push_back(r);
    }
    EXPECT_EQ(objectives(t), (ObjectivePair{9, 0}));
    auto base = base_machine_table();
    MaintenanceRecord cm;
    cm.event = {MaintenanceKind::CM, 3, 1.0, std::nullopt, base.machines[2].T_cm, base.machines[2].C_cm};
    t.maintenance.push_back(cm);
    auto pm = group_pms({{4, 2.0}}, 0.0, base.machines);
    t.maintenance.push_back({pm[0], 0, 0, 0});
    EXPECT_DOUBLE_EQ(objectives(t).maintenance_cost, 876 + 195);
}

TEST(Deviation, Surrogate) {
    auto inst = fixtures::toy_instance(std::vector<std::vector<double>>(10, {1.0, 1.0}), 2);
    SchedulePlan plan;
    plan.machines = {{1, {}}, {2, {}}};
    for (int i = 0; i < 10; ++i) plan.on(1).slots.push_back({i, 1, 0, 0});
    replan_times(plan, inst);
    ScheduleTrace t;
    for (const auto& s : plan.on(1).slots) {
        JobRecord r;
        r.job = s.job;
        r.machine = 1;
        r.start = s.planned_start;
        t.jobs.push_back(r);
    }
    EXPECT_DOUBLE_EQ(deviation(plan, t), 1.0);
    t.jobs[3].machine = 2;
    EXPECT_NEAR(deviation(plan, t), 1.1, 1e-12);
    t.jobs[3].machine = 1;
    double sum_s = 0.0;
    for (auto& r : t.jobs) {
        sum_s += r.start;
        r.start *= 1.1;
    }
    EXPECT_NEAR(deviation(plan, t), 1.0 + 0.1 * sum_s / 10.0, 1e-12);
}

TEST(IdleSpaces, ZeroWhenEverythingConforms) {
    auto inst = fixtures::toy_instance({{1}, {2}, {1}});
    auto n = idle_space_count(inst, expected());
    EXPECT_EQ(n.at(1), 0);
}

TEST(IdleSpaces, CeilingOfNonconformingPerMachine) {
    auto inst = fixtures::toy_instance({{1, 1}, {1, 1}, {1, 1}, {1, 1}, {1, 1}}, 2);
    for (auto& m : inst.machines) m.mu_minus = 0.0;
    for (auto& j : inst.jobs) j.initial_quality = 11.0;
    EXPECT_EQ(idle_space_count(inst, expected()).at(1), 3);
}
