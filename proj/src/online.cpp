#include "qrp/online.hpp"

#include <algorithm>
#include <stdexcept>

namespace qrp {

namespace {

const Job* lookup(const ProblemInstance& inst, const std::vector<Job>& copies, JobId id) {
    for (const auto& c : copies)
        if (c.id == id) return &c;
    return &inst.job(id);
}

bool capable(const ProblemInstance& inst, const std::vector<Job>& copies, const PlanSlot& s, MachineId k) {
    if (s.idle()) return inst.machine(k).can_process(s.type);
    return lookup(inst, copies, s.job)->nominal_times.count(k) > 0;
}

double nominal(const ProblemInstance& inst, const std::vector<Job>& copies, const PlanSlot& s, MachineId k) {
    if (s.idle()) return inst.mean_nominal_time(s.type, k);
    return lookup(inst, copies, s.job)->nominal_times.at(k);
}

std::vector<std::size_t> job_positions(const MachinePlan& mp) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < mp.slots.size(); ++i)
        if (!mp.slots[i].idle()) out.push_back(i);
    return out;
}

// Nominal completion per machine from the trigger snapshot. Idle spaces are
// skipped online, so they count for nothing.
std::vector<double> planned_ends(const RescheduleContext& ctx, const ProblemInstance& inst, const SchedulePlan& plan) {
    std::vector<double> ends;
    for (std::size_t i = 0; i < plan.machines.size(); ++i) {
        double e = std::max(ctx.machines[i].free_time, ctx.trigger_time);
        for (const auto& s : plan.machines[i].slots)
            if (!s.idle()) e += nominal(inst, ctx.copies, s, plan.machines[i].machine);
        ends.push_back(e);
    }
    return ends;
}

void insertion_move(SchedulePlan& plan, const RescheduleContext& ctx, const ProblemInstance& inst, RngStream& rng) {
    auto ends = planned_ends(ctx, inst, plan);
    std::size_t key = 0;
    for (std::size_t i = 1; i < ends.size(); ++i)
        if (ends[i] > ends[key]) key = i;
    auto pos = job_positions(plan.machines[key]);
    if (pos.empty()) return;
    std::size_t at = pos[rng.below(pos.size())];
    auto& slots = plan.machines[key].slots;
    PlanSlot slot = slots[at];
    slots.erase(slots.begin() + static_cast<std::ptrdiff_t>(at));
    ends = planned_ends(ctx, inst, plan);
    std::size_t erl = plan.machines.size();
    for (std::size_t i = 0; i < plan.machines.size(); ++i) {
        if (!capable(inst, ctx.copies, slot, plan.machines[i].machine)) continue;
        if (erl == plan.machines.size() || ends[i] < ends[erl]) erl = i;
    }
    MachineId target = plan.machines[erl].machine;
    plan = ji_insert(std::move(plan), slot, target, inst, ctx.copies);
}

void swap_move(SchedulePlan& plan, RngStream& rng) {
    for (std::size_t i = 0; i < plan.machines.size(); ++i) {
        auto pos = job_positions(plan.machines[i]);
        if (pos.size() < 2) continue;
        std::size_t a = pos[rng.below(pos.size())];
        std::size_t b = pos[rng.below(pos.size())];
        MachineId m = plan.machines[i].machine;
        plan = js_swap(std::move(plan), m, a, b);
    }
}

void cross_swap(SchedulePlan& plan, const RescheduleContext& ctx, const ProblemInstance& inst, RngStream& rng) {
    std::vector<std::size_t> busy;
    for (std::size_t i = 0; i < plan.machines.size(); ++i)
        if (!job_positions(plan.machines[i]).empty()) busy.push_back(i);
    if (busy.size() < 2) return;
    std::size_t i = rng.below(busy.size());
    std::size_t j = rng.below(busy.size() - 1);
    if (j >= i) ++j;
    std::size_t x = busy[i];
    std::size_t y = busy[j];
    auto& mx = plan.machines[x];
    auto& my = plan.machines[y];
    auto px = job_positions(mx);
    auto py = job_positions(my);
    auto& sx = mx.slots[px[rng.below(px.size())]];
    auto& sy = my.slots[py[rng.below(py.size())]];
    if (!capable(inst, ctx.copies, sx, my.machine) || !capable(inst, ctx.copies, sy, mx.machine)) return;
    std::swap(sx, sy);
}

// Idle spaces are consumed by rework copies first: any copy of the slot's
// type that sits elsewhere moves into the idle space.
void absorb_idle(SchedulePlan& plan, const RescheduleContext& ctx, const ProblemInstance& inst) {
    auto is_copy = [&](JobId id) {
        return std::any_of(ctx.copies.begin(), ctx.copies.end(), [id](const Job& c) { return c.id == id; });
    };
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t mi = 0; mi < plan.machines.size() && !changed; ++mi) {
            auto& target = plan.machines[mi];
            for (std::size_t si = 0; si < target.slots.size() && !changed; ++si) {
                const PlanSlot idle = target.slots[si];
                if (!idle.idle()) continue;
                for (std::size_t mj = 0; mj < plan.machines.size() && !changed; ++mj) {
                    auto& from = plan.machines[mj].slots;
                    for (std::size_t sj = mj == mi ? si + 1 : 0; sj < from.size(); ++sj) {
                        const PlanSlot& c = from[sj];
                        if (c.idle() || c.type != idle.type || !is_copy(c.job)) continue;
                        if (!capable(inst, ctx.copies, c, target.machine)) continue;
                        PlanSlot moved = c;
                        from.erase(from.begin() + static_cast<std::ptrdiff_t>(sj));
                        target.slots[si] = moved;
                        changed = true;
                        break;
                    }
                }
            }
        }
    }
}

}  // namespace

SchedulePlan ji_insert(SchedulePlan plan, const PlanSlot& slot, MachineId m, const ProblemInstance& inst,
                       const std::vector<Job>& copies) {
    if (!capable(inst, copies, slot, m))
        throw IncapableMachine("machine " + std::to_string(m) + " cannot take the inserted job");
    auto& slots = plan.on(m).slots;
    double p = nominal(inst, copies, slot, m);
    for (std::size_t j = 0; j + 1 < slots.size(); ++j) {
        if (p >= nominal(inst, copies, slots[j], m) && p <= nominal(inst, copies, slots[j + 1], m)) {
            slots.insert(slots.begin() + static_cast<std::ptrdiff_t>(j + 1), slot);
            return plan;
        }
    }
    slots.push_back(slot);
    return plan;
}

SchedulePlan js_swap(SchedulePlan plan, MachineId m, std::size_t j, std::size_t j2) {
    auto& slots = plan.on(m).slots;
    if (j >= slots.size() || j2 >= slots.size()) throw std::out_of_range("swap position beyond the machine queue");
    if (slots[j].idle() || slots[j2].idle()) throw std::invalid_argument("swap positions must hold jobs");
    std::swap(slots[j], slots[j2]);
    return plan;
}

double suffix_fitness(const RescheduleContext& ctx, const ProblemInstance& inst, const SchedulePlan& plan,
                      const Sampler& sampler) {
    SchedulePlan p = plan;
    std::vector<double> origin;
    for (const auto& m : ctx.machines) origin.push_back(std::max(m.free_time, ctx.trigger_time));
    replan_times(p, inst, ctx.copies, origin);
    SimOptions o;
    o.mode = SimMode::STATIC;
    o.pm_suspension = ctx.pm_suspension;
    o.idle_as_phantom = false;
    o.start = &ctx.machines;
    o.start_time = ctx.trigger_time;
    o.first_round = ctx.round + 1;
    o.extra_jobs = ctx.copies;
    auto t = simulate(p, inst, ctx.policy, sampler, o);
    if (t.jobs.empty()) return 0.0;
    double span = t.objectives.makespan - ctx.trigger_time;
    if (!(span > 0.0)) return 0.0;
    return fitness_resched(t.qualified, t.objectives.maintenance_cost, span);
}

SchedulePlan reschedule(const RescheduleContext& ctx, const ProblemInstance& inst, int budget, RngStream rng) {
    if (budget < 1) throw std::invalid_argument("reschedule budget must be at least 1");
    if (ctx.pending.empty()) return ctx.remaining;
    // Candidates share one set of future draws, independent of the live run.
    Sampler eval = ctx.sampler.substream(stream_tag::reschedule, static_cast<std::uint64_t>(ctx.round));
    SchedulePlan best = right_shift(ctx, inst);
    double best_f = suffix_fitness(ctx, inst, best, eval);
    for (int it = 1; it <= budget; ++it) {
        SchedulePlan cand = best;
        if (it % 2 == 1)
            insertion_move(cand, ctx, inst, rng);
        else
            swap_move(cand, rng);
        cross_swap(cand, ctx, inst, rng);
        absorb_idle(cand, ctx, inst);
        double f = suffix_fitness(ctx, inst, cand, eval);
        if (f >= best_f) {
            best = std::move(cand);
            best_f = f;
        }
    }
    return best;
}

Rescheduler make_rescheduler(const ProblemInstance& inst, int budget, RngStream rng) {
    return [&inst, budget, rng](const RescheduleContext& ctx) {
        return reschedule(ctx, inst, budget, rng.substream(static_cast<std::uint64_t>(ctx.round)));
    };
}

}  // namespace qrp
