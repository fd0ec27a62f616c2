#include "qrp/schedule.hpp"
#include "support/toys.hpp"

#include <gtest/gtest.h>

using namespace qrp;

TEST(Decode, SortsByFraction) {
    auto inst = fixtures::toy_instance({{1, 1}, {1, 1}, {1, 1}}, 2);
    Chromosome ch;
    ch.keys = {1.3, 1.1, 2.5};
    auto plan = decode(ch, inst);
    ASSERT_EQ(plan.on(1).slots.size(), 2u);
    EXPECT_EQ(plan.on(1).slots[0].job, 1);
    EXPECT_EQ(plan.on(1).slots[1].job, 0);
    ASSERT_EQ(plan.on(2).slots.size(), 1u);
    EXPECT_EQ(plan.on(2).slots[0].job, 2);
}

TEST(Decode, SingleChainAndTies) {
    auto inst = fixtures::toy_instance({{1}, {2}, {3}, {4}});
    Chromosome ch;
    ch.keys = {1.5, 1.25, 1.5, 1.0};
    auto plan = decode(ch, inst);
    std::vector<JobId> order;
    for (const auto& s : plan.on(1).slots) order.push_back(s.job);
    EXPECT_EQ(order, (std::vector<JobId>{3, 1, 0, 2}));
    EXPECT_DOUBLE_EQ(plan.on(1).slots[3].planned_start, 4 + 2 + 1);
}

TEST(Decode, IncapableMachineThrows) {
    ProblemInstance inst = base_machine_table();
    Job j;
    j.id = 0;
    j.job_type = 1;
    j.nominal_times = {{1, 2.6}, {3, 2.6}, {4, 2.6}};
    inst.jobs.push_back(j);
    Chromosome ch;
    ch.keys = {2.4};
    EXPECT_THROW((void)decode(ch, inst), IncapableMachine);
    ch.keys = {3.4};
    EXPECT_NO_THROW((void)decode(ch, inst));
}

TEST(Decode, IdleSlotsTakeMeanDuration) {
    auto inst = fixtures::toy_instance({{2}, {4}});
    Chromosome ch;
    ch.keys = {1.1, 1.9, 1.5};
    ch.idle_types = {1};
    auto plan = decode(ch, inst);
    ASSERT_EQ(plan.on(1).slots.size(), 3u);
    EXPECT_TRUE(plan.on(1).slots[1].idle());
    EXPECT_DOUBLE_EQ(plan.on(1).slots[1].planned_duration, 3.0);
    EXPECT_EQ(plan.job_count(), 2u);
}

TEST(Compact, RemovesGapsAndIsIdempotent) {
    auto inst = fixtures::toy_instance({{2}, {3}});
    Chromosome ch;
    ch.keys = {1.1, 1.2};
    auto plan = decode(ch, inst);
    plan.on(1).slots[1].planned_start += 5.0;
    EXPECT_DOUBLE_EQ(plan.nominal_makespan(), 10.0);
    auto c = compact(plan);
    EXPECT_DOUBLE_EQ(c.nominal_makespan(), 5.0);
    auto cc = compact(c);
    EXPECT_DOUBLE_EQ(cc.on(1).slots[1].planned_start, c.on(1).slots[1].planned_start);
}
