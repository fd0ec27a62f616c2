#include "qrp/maintenance.hpp"
#include "qrp/rng.hpp"

#include <gtest/gtest.h>

using namespace qrp;

namespace {

MachineParams machine(int k) { return base_machine_table().machines.at(static_cast<std::size_t>(k - 1)); }

MachineState at(double w, int n_pm = 0) {
    MachineState s;
    s.machine_id = 1;
    s.W = w;
    s.n_pm_since_cm = n_pm;
    return s;
}

}  // namespace

TEST(ImperfectPm, UsesCountBeforeIncrement) {
    auto s = imperfect_pm(at(0.3), 0.2, 0.08);
    EXPECT_NEAR(s.W, 0.06, 1e-12);
    EXPECT_EQ(s.n_pm_since_cm, 1);
    EXPECT_NEAR(imperfect_pm(at(0.3, 3), 0.2, 0.08).W, 0.30, 1e-12);
    EXPECT_EQ(imperfect_pm(at(0.3, 2), 0.0, 0.0).W, 0.0);
}

TEST(ImperfectPm, NeverNegative) {
    RngStream rng(1);
    for (int i = 0; i < 10000; ++i) {
        auto s = imperfect_pm(at(rng.uniform(0, 2), static_cast<int>(rng.below(5))), rng.uniform(1e-9, 1.0),
                              rng.uniform(0, 1));
        ASSERT_GE(s.W, 0.0);
    }
}

TEST(Corrective, RestoresAndResets) {
    auto m = machine(1);
    auto s = at(0.36, 2);
    s.suspended = true;
    s.lifecycle = {10, 30.0, 430.0};
    auto r = corrective_maintenance(s, m);
    EXPECT_DOUBLE_EQ(r.W, 0.1);
    EXPECT_EQ(r.n_pm_since_cm, 0);
    EXPECT_FALSE(r.suspended);
    EXPECT_EQ(r.lifecycle.n_jobs, 0);
    EXPECT_THROW((void)corrective_maintenance(at(0.35), m), std::logic_error);
}

TEST(Corrective, ThresholdIsStrict) {
    EXPECT_FALSE(cm_required(at(0.35), machine(1)));
    EXPECT_TRUE(cm_required(at(0.4025 + 1e-12), machine(2)));
    EXPECT_FALSE(cm_required(at(0.0), machine(1)));
}

TEST(PmDue, Rule) {
    auto m = machine(1);
    EXPECT_TRUE(pm_due(at(0.29), m, 0.8, 2));
    auto s = at(0.34);
    s.suspended = true;
    EXPECT_FALSE(pm_due(s, m, 0.8, 2));
    EXPECT_FALSE(pm_due(at(0.34, 2), m, 0.8, 2));
    EXPECT_FALSE(pm_due(at(0.27), m, 0.8, 2));
}

TEST(GroupPms, SingleMachine) {
    auto inst = base_machine_table();
    auto g = group_pms({{1, 5.0}}, 0.5, inst.machines);
    ASSERT_EQ(g.size(), 1u);
    EXPECT_GE(g[0].duration, 25.14 - 1e-12);
    EXPECT_GE(g[0].cost, 430.0);
    EXPECT_EQ(g[0].kind, MaintenanceKind::PM);
}

TEST(GroupPms, SimultaneousPairMerges) {
    auto inst = base_machine_table();
    auto g = group_pms({{1, 5.0}, {2, 5.0}}, 1.0, inst.machines);
    ASSERT_EQ(g.size(), 2u);
    EXPECT_EQ(g[0].group_id, g[1].group_id);
    EXPECT_DOUBLE_EQ(g[0].duration, std::max(12.54 + 12.6, 10.92 + 10.85));
    EXPECT_DOUBLE_EQ(g[1].duration, g[0].duration);
}

TEST(GroupPms, ZeroWindowKeepsGroupsApart) {
    auto inst = base_machine_table();
    auto g = group_pms({{1, 5.0}, {2, 5.0}, {3, 6.0}}, 0.0, inst.machines);
    ASSERT_EQ(g.size(), 3u);
    EXPECT_NE(g[0].group_id, g[1].group_id);
    EXPECT_NE(g[1].group_id, g[2].group_id);
}

TEST(GroupPms, SetupCostSharedEvenly) {
    auto inst = base_machine_table();
    inst.machines[0].C_ps = 40.0;
    inst.machines[1].C_ps = 40.0;
    auto g = group_pms({{1, 0.0}, {2, 1.0}}, 1.0, inst.machines);
    ASSERT_EQ(g.size(), 2u);
    EXPECT_DOUBLE_EQ(g[0].cost, 430.0 + 20.0);
    EXPECT_DOUBLE_EQ(g[1].cost, 275.0 + 20.0);
    EXPECT_DOUBLE_EQ(g[0].time, 1.0);  // the group waits for its last member
}

TEST(Suspension, Examples) {
    MachineParams m;
    m.T_pm = 3.0;
    m.C_pm = 20.0;
    LifecycleStats s{10, 10.0, 100.0};  // T ratio 0.3, C ratio 0.2
    EXPECT_TRUE(pm_suspension_check(s, m, 1));
    EXPECT_FALSE(pm_suspension_check(s, m, 3));
    EXPECT_TRUE(pm_suspension_check(s, m, 0));
    EXPECT_THROW((void)pm_suspension_check({0, 10.0, 100.0}, m, 1), UndefinedStatistics);
    EXPECT_THROW((void)pm_suspension_check({3, 0.0, 100.0}, m, 1), UndefinedStatistics);
}

TEST(Suspension, ConsequentInequalityHolds) {
    RngStream rng(5);
    int checked = 0;
    for (int i = 0; i < 20000; ++i) {
        double nc = rng.uniform(0.1, 100), npm = rng.uniform(0.01, 50);
        double tc = rng.uniform(0.1, 100), tpm = rng.uniform(0.01, 50);
        double cc = rng.uniform(0.1, 1000), cpm = rng.uniform(0.01, 500);
        if (!(npm / nc < std::min(tpm / tc, cpm / cc))) continue;
        ++checked;
        ASSERT_GT(nc * nc / (tc * cc), (nc + npm) * (nc + npm) / ((tc + tpm) * (cc + cpm)));
    }
    EXPECT_GT(checked, 1000);
}

TEST(CountPms, Examples) {
    auto pm = [](double t) { return MaintenanceEvent{MaintenanceKind::PM, 1, t, 0, 1.0, 1.0}; };
    auto cm = [](double t) { return MaintenanceEvent{MaintenanceKind::CM, 1, t, std::nullopt, 1.0, 1.0}; };
    EXPECT_EQ(count_pms_since_cm({pm(5), cm(10), pm(15)}, 1, 20), 1);
    EXPECT_EQ(count_pms_since_cm({}, 1, 20), 0);
    EXPECT_EQ(count_pms_since_cm({pm(5), pm(8)}, 1, 6), 1);
    EXPECT_EQ(count_pms_since_cm({pm(5), pm(8)}, 2, 10), 0);
}
