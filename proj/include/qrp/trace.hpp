#pragma once

#include "qrp/maintenance.hpp"
#include "qrp/model.hpp"

#include <vector>

namespace qrp {

struct JobRecord {
    JobId job = 0;
    JobId origin = 0;  ///< the original job a rework chain started from
    int attempt = 0;   ///< 0 for the first pass, k for the k-th rework
    MachineId machine = 0;
    JobType type = 1;
    double start = 0.0;
    double end = 0.0;
    double p = 0.0;
    double w_before = 0.0;
    double w_after = 0.0;
    double input_quality = 0.0;
    double D = 0.0;
    bool conforming = true;
    int round = 0;

    [[nodiscard]] bool rework() const { return attempt > 0; }
};

struct MaintenanceRecord {
    MaintenanceEvent event;
    double w_before = 0.0;
    double w_after = 0.0;
    int round = 0;
};

/// Time reserved by an idle space in a static plan.
struct IdleRecord {
    MachineId machine = 0;
    JobType type = 1;
    double start = 0.0;
    double end = 0.0;
    double w_before = 0.0;
    double w_after = 0.0;
};

/// A machine screened out of PM until its next CM.
struct SuspensionRecord {
    MachineId machine = 0;
    double time = 0.0;
};

struct ReschedulePoint {
    double time = 0.0;
    int round = 0;     ///< round closed by this point
    bool flush = false;  ///< issued because only rework copies were left
};

struct RoundStats {
    double start = 0.0;
    double end = 0.0;
    int n_jobs = 0;
    int qualified = 0;
    double maint_cost = 0.0;

    [[nodiscard]] double span() const { return end - start; }
};

struct ScheduleTrace {
    std::vector<MachineId> machines;
    std::vector<JobRecord> jobs;  ///< in start order
    std::vector<MaintenanceRecord> maintenance;
    std::vector<IdleRecord> idles;
    std::vector<SuspensionRecord> suspensions;
    std::vector<ReschedulePoint> reschedules;
    std::vector<RoundStats> rounds;
    ObjectivePair objectives;
    int qualified = 0;
    int nonconforming = 0;
    int scrapped = 0;  ///< rework chains abandoned at the attempt cap
};

}  // namespace qrp
