#pragma once

#include "qrp/model.hpp"

#include <stdexcept>
#include <vector>

namespace qrp {

/// Random-key genotype. Slot i < jobs.size() is job i of the instance (in
/// instance order); the remaining slots are idle spaces with the listed types.
struct Chromosome {
    std::vector<double> keys;
    std::vector<JobType> idle_types;
    double zeta = 0.8;
    double psi = 0.5;
    double thr_r = 0.5;
    int n_u = 2;

    friend bool operator==(const Chromosome&, const Chromosome&) = default;
};

struct PolicyParams {
    double zeta = 0.8;
    double psi = 0.5;
    double thr_r = 0.5;
    int n_u = 2;

    static PolicyParams from(const Chromosome& c) { return {c.zeta, c.psi, c.thr_r, c.n_u}; }
};

inline constexpr int kIdleJob = -1;

struct PlanSlot {
    JobId job = kIdleJob;  ///< kIdleJob marks an idle space
    JobType type = 1;
    double planned_start = 0.0;
    double planned_duration = 0.0;

    [[nodiscard]] bool idle() const { return job == kIdleJob; }
};

struct MachinePlan {
    MachineId machine = 0;
    std::vector<PlanSlot> slots;
};

struct SchedulePlan {
    std::vector<MachinePlan> machines;

    [[nodiscard]] MachinePlan& on(MachineId id);
    [[nodiscard]] const MachinePlan& on(MachineId id) const;
    /// Machine a job is planned on, or -1.
    [[nodiscard]] MachineId machine_of(JobId job) const;
    [[nodiscard]] const PlanSlot* find(JobId job) const;
    [[nodiscard]] std::size_t job_count() const;
    [[nodiscard]] double nominal_makespan() const;
};

struct IncapableMachine : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Machine id encoded by a key (its integer part).
[[nodiscard]] inline MachineId key_machine(double key) { return static_cast<MachineId>(key); }
/// Sequencing part of a key.
[[nodiscard]] double key_fraction(double key);

/// Sorts each machine's slots by key fraction (ties by job id, idle slots
/// after jobs) and assigns compact nominal start times. Throws
/// IncapableMachine when a key routes a slot to a machine lacking its type.
[[nodiscard]] SchedulePlan decode(const Chromosome& ch, const ProblemInstance& inst);

/// Type of slot i of a chromosome.
[[nodiscard]] JobType slot_type(const Chromosome& ch, const ProblemInstance& inst, std::size_t i);

/// Nominal duration of a slot on machine k (mean type time for idle slots).
[[nodiscard]] double slot_duration(const ProblemInstance& inst, const PlanSlot& s, MachineId k);

/// Left-shifts every planned start so each slot begins when its predecessor
/// ends. Order is unchanged.
[[nodiscard]] SchedulePlan compact(SchedulePlan plan);

/// Re-derives planned starts and durations from slot order, starting each
/// machine at `origin[k]` (0 when absent).
void replan_times(SchedulePlan& plan, const ProblemInstance& inst, const std::vector<Job>& extra_jobs = {},
                  const std::vector<double>& origin = {});

}  // namespace qrp
