#pragma once

#include "qrp/rng.hpp"
#include "qrp/simulator.hpp"

namespace qrp {

/// Places `slot` on machine m in the first position j where its nominal time
/// lies between the times of slots j and j+1; appends when no such j exists.
/// Throws IncapableMachine when m cannot process the slot.
[[nodiscard]] SchedulePlan ji_insert(SchedulePlan plan, const PlanSlot& slot, MachineId m,
                                     const ProblemInstance& inst, const std::vector<Job>& copies = {});

/// Exchanges two job slots of one machine. Throws std::out_of_range for a bad
/// position and std::invalid_argument when either slot is an idle space.
[[nodiscard]] SchedulePlan js_swap(SchedulePlan plan, MachineId m, std::size_t j, std::size_t j2);

/// Rescheduling fitness of an unstarted plan: a static run of the suffix from
/// the trigger snapshot, scored as q^2 / (max(C, 1) T) with T measured from the
/// trigger time. Idle spaces are skipped. Returns 0 for an empty plan.
[[nodiscard]] double suffix_fitness(const RescheduleContext& ctx, const ProblemInstance& inst,
                                    const SchedulePlan& plan, const Sampler& sampler);

/// Local search over the unstarted plan. Starts from the right-shift
/// placement of pending copies, then per iteration applies an insertion move
/// (odd) or an in-machine swap (even) followed by one cross-machine swap, and
/// keeps the candidate when its suffix fitness does not drop. With nothing
/// pending the remaining plan is returned unchanged.
[[nodiscard]] SchedulePlan reschedule(const RescheduleContext& ctx, const ProblemInstance& inst, int budget,
                                      RngStream rng);

/// Rescheduler hook for simulate(). Each call draws its own sub-stream by
/// round. `inst` must outlive the returned function.
[[nodiscard]] Rescheduler make_rescheduler(const ProblemInstance& inst, int budget, RngStream rng);

}  // namespace qrp
