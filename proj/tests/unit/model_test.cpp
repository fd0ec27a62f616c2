#include "qrp/model.hpp"
#include "support/toys.hpp"

#include <gtest/gtest.h>

using namespace qrp;

namespace {

ProblemInstance base_with_jobs() {
    ProblemInstance inst = base_machine_table();
    for (int i = 0; i < 4; ++i) {
        Job j;
        j.id = i;
        j.job_type = i % 2 == 0 ? 1 : 2;
        if (j.job_type == 1)
            j.nominal_times = {{1, 2.6}, {3, 2.5}, {4, 2.7}};
        else
            j.nominal_times = {{2, 1.9}, {4, 2.0}};
        inst.jobs.push_back(j);
    }
    return inst;
}

}  // namespace

TEST(Model, BaseInstanceIsValid) { EXPECT_TRUE(validate_instance(base_with_jobs()).empty()); }

TEST(Model, BaseTableMatchesPublishedParameters) {
    auto inst = base_machine_table();
    ASSERT_EQ(inst.machines.size(), 4u);
    EXPECT_DOUBLE_EQ(inst.machines[0].mu_minus, 82.4);
    EXPECT_DOUBLE_EQ(inst.machines[0].T_cm, 44.75);
    EXPECT_DOUBLE_EQ(inst.machines[0].C_cm, 1312);
    EXPECT_DOUBLE_EQ(inst.machines[1].L, 0.4025);
    EXPECT_DOUBLE_EQ(inst.machines[2].C_cm, 876);
    EXPECT_DOUBLE_EQ(inst.machines[3].C_pm, 195);
    EXPECT_DOUBLE_EQ(inst.machines[3].beta, 6.085e-05);
    EXPECT_DOUBLE_EQ(inst.machines[0].alternate.a, 0.0112);
    EXPECT_TRUE(inst.machines[3].can_process(1));
    EXPECT_TRUE(inst.machines[3].can_process(2));
    EXPECT_FALSE(inst.machines[1].can_process(1));
    EXPECT_DOUBLE_EQ(inst.quality.at(2).xi, 0.07);
}

TEST(Model, EmptyNominalTimesIsOneViolationNamingTheJob) {
    auto inst = base_with_jobs();
    inst.jobs[2].nominal_times.clear();
    auto v = validate_instance(inst);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_NE(v[0].find("job 2"), std::string::npos);
}

TEST(Model, ZeroSigmaMinusIsOneViolationNamingTheField) {
    auto inst = base_with_jobs();
    inst.machines[1].sigma_minus = 0.0;
    auto v = validate_instance(inst);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_NE(v[0].find("sigma_minus"), std::string::npos);
    EXPECT_NE(v[0].find("machine 2"), std::string::npos);
}

TEST(Model, ValidateIsIdempotent) {
    auto inst = base_with_jobs();
    inst.jobs[0].nominal_times[2] = 1.0;  // incapable machine
    inst.globals.theta = 0.0;
    auto a = validate_instance(inst);
    auto b = validate_instance(inst);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.size(), 2u);
}

TEST(Model, ReworkCopyNeedsRealOrigin) {
    auto inst = base_with_jobs();
    Job c = inst.jobs[0];
    c.id = 99;
    c.is_rework_copy = true;
    c.origin_id = 42;
    inst.jobs.push_back(c);
    EXPECT_EQ(validate_instance(inst).size(), 1u);
    inst.jobs.back().origin_id = 0;
    EXPECT_TRUE(validate_instance(inst).empty());
}

TEST(Model, DominanceIsWeakPareto) {
    EXPECT_TRUE(dominates({1, 1}, {1, 2}));
    EXPECT_FALSE(dominates({1, 1}, {1, 1}));
    EXPECT_FALSE(dominates({1, 3}, {2, 2}));
}

TEST(Model, MeanNominalTime) {
    auto inst = base_with_jobs();
    EXPECT_DOUBLE_EQ(inst.mean_nominal_time(2, 4), 2.0);
    EXPECT_DOUBLE_EQ(inst.mean_nominal_time(1, 2), 0.0);
    EXPECT_EQ(inst.capable_machines(1), (std::vector<MachineId>{1, 3, 4}));
}
