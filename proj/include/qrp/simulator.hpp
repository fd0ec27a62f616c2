#pragma once

#include "qrp/maintenance.hpp"
#include "qrp/physics.hpp"
#include "qrp/schedule.hpp"
#include "qrp/trace.hpp"

#include <functional>
#include <vector>

namespace qrp {

enum class SimMode { STATIC, ONLINE };

/// Sub-stream tags, so every draw category stays independent of the others.
namespace stream_tag {
inline constexpr std::uint64_t quality = 1;
inline constexpr std::uint64_t noise = 2;
inline constexpr std::uint64_t wear = 3;
inline constexpr std::uint64_t gap = 4;
inline constexpr std::uint64_t idle = 5;
inline constexpr std::uint64_t projection = 6;
inline constexpr std::uint64_t reschedule = 7;
}  // namespace stream_tag

struct MachineSnapshot {
    MachineState state;
    double free_time = 0.0;
    bool pm_allowed = true;  ///< false right after a PM or CM (no job in between)
};

struct RescheduleContext {
    double trigger_time = 0.0;
    int round = 0;
    bool flush = false;
    /// Machines in instance order.
    std::vector<MachineSnapshot> machines;
    /// Unstarted slots, one entry per machine in instance order.
    SchedulePlan remaining;
    /// Rework copies waiting for a slot.
    std::vector<Job> pending;
    /// Every rework copy created so far, placed or not.
    std::vector<Job> copies;
    PolicyParams policy;
    bool pm_suspension = true;
    Sampler sampler{RngStream{}};
};

/// Returns the new unstarted plan. It must contain each remaining job and
/// each pending copy exactly once.
using Rescheduler = std::function<SchedulePlan(const RescheduleContext&)>;

struct SimOptions {
    SimMode mode = SimMode::STATIC;
    bool pm_suspension = true;
    /// The non-conforming window must hold at least this many jobs to trigger.
    int trigger_min_jobs = 4;
    int max_rework_attempts = 20;
    /// In static mode idle spaces consume time like a conforming job of mean
    /// nominal length. When false they are skipped.
    bool idle_as_phantom = true;
    Rescheduler rescheduler;  ///< empty: right-shift placement of copies
    /// Resume from a snapshot instead of the initial machine states.
    const std::vector<MachineSnapshot>* start = nullptr;
    double start_time = 0.0;
    int first_round = 0;
    /// Rework copies referenced by the plan.
    std::vector<Job> extra_jobs;
};

/// Rework copy id for attempt `attempt` of `origin`.
[[nodiscard]] JobId rework_copy_id(const ProblemInstance& inst, JobId origin, int attempt);

/// Executes a plan event by event.
[[nodiscard]] ScheduleTrace simulate(const SchedulePlan& plan, const ProblemInstance& inst, const PolicyParams& policy,
                                     const Sampler& sampler, const SimOptions& opt = {});

/// Default placement of rework copies: the first idle space of the copy's
/// type on a capable machine, else appended to the capable machine whose
/// queue ends earliest. Jobs already queued keep their order.
[[nodiscard]] SchedulePlan right_shift(const RescheduleContext& ctx, const ProblemInstance& inst);

/// Idle spaces per job type: a pilot static run of the nominal plan counts
/// non-conforming products per type, divided by the capable machine count
/// and rounded up.
[[nodiscard]] std::map<JobType, int> idle_space_count(const ProblemInstance& inst, const Sampler& sampler);

/// Job-per-machine round robin over capable machines, in job order.
[[nodiscard]] SchedulePlan nominal_plan(const ProblemInstance& inst);

// Fitness and objectives.

/// (sum q)^2 / (max(C^m, 1) C_max)
[[nodiscard]] double fitness_static(const ScheduleTrace& t);
[[nodiscard]] double fitness_static(double qualified, double maint_cost, double makespan);
/// q^2 / (C T) for one rescheduling round; C is floored at 1.
[[nodiscard]] double fitness_resched(double qualified, double maint_cost, double span);
/// 1 / (sum C * sum T * d)
[[nodiscard]] double fitness_eval(double cost_sum, double time_sum, double deviation);
/// Online fitness of a trace against the plan it started from.
[[nodiscard]] double fitness_eval(const ScheduleTrace& t, const SchedulePlan& baseline);
[[nodiscard]] ObjectivePair objectives(const ScheduleTrace& t);

/// 1 + sum |S_real - S_plan| / sum p_plan + reassigned / n over the
/// baseline's jobs.
[[nodiscard]] double deviation(const SchedulePlan& baseline, const ScheduleTrace& realized);

}  // namespace qrp
