#include "qrp/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <unordered_map>

namespace qrp {

namespace {

constexpr int kAttemptStride = 32;

JobId copy_base(const ProblemInstance& inst) {
    JobId base = 0;
    for (const auto& j : inst.jobs)
        if (!j.is_rework_copy) base = std::max(base, j.id + 1);
    return base;
}

struct JobMeta {
    JobId origin = 0;
    int attempt = 0;
};

struct Runtime {
    const MachineParams* m = nullptr;
    MachineState st;
    double free = 0.0;
    bool pm_allowed = true;
    std::deque<PlanSlot> queue;
    Sampler gap{RngStream{}};
    int idle_counter = 0;
};

struct Observation {
    double end;
    std::size_t record;  // index into trace.jobs
    bool operator>(const Observation& o) const { return end != o.end ? end > o.end : record > o.record; }
};

class Engine {
public:
    Engine(const SchedulePlan& plan, const ProblemInstance& inst, const PolicyParams& policy, const Sampler& sampler,
           const SimOptions& opt)
        : inst_(inst), policy_(policy), sampler_(sampler), opt_(opt), base_(copy_base(inst)) {
        for (const auto& j : opt.extra_jobs) copies_[j.id] = j;
        for (std::size_t k = 0; k < inst.machines.size(); ++k) {
            Runtime rt;
            rt.m = &inst.machines[k];
            if (opt.start) {
                const auto& s = (*opt.start)[k];
                rt.st = s.state;
                rt.free = s.free_time;
                rt.pm_allowed = s.pm_allowed;
            } else {
                rt.st = MachineState::initial(*rt.m);
                rt.free = opt.start_time;
            }
            rt.gap = sampler.substream(stream_tag::gap, static_cast<std::uint64_t>(rt.m->id));
            for (const auto& s : plan.on(rt.m->id).slots) rt.queue.push_back(s);
            rt_.push_back(std::move(rt));
            trace_.machines.push_back(inst.machines[k].id);
        }
        round_ = opt.first_round;
        round_start_ = opt.start_time;
    }

    ScheduleTrace run() {
        for (;;) {
            int k = pick();
            if (k < 0) {
                if (!drain_observations(std::numeric_limits<double>::infinity())) {
                    if (online() && !pending_.empty()) {
                        flush_reschedule();
                        if (pick() < 0) {
                            trace_.scrapped += static_cast<int>(pending_.size());
                            pending_.clear();
                            break;
                        }
                    } else {
                        break;
                    }
                }
                continue;
            }
            if (drain_observations(rt_[static_cast<std::size_t>(k)].free)) continue;
            step(static_cast<std::size_t>(k));
        }
        close_round();
        trace_.objectives = objectives(trace_);
        return std::move(trace_);
    }

private:
    bool online() const { return opt_.mode == SimMode::ONLINE; }

    const Job& job(JobId id) const {
        if (id >= base_) {
            auto it = copies_.find(id);
            if (it != copies_.end()) return it->second;
        }
        return inst_.job(id);
    }

    JobMeta meta(const Job& j) const {
        if (!j.is_rework_copy) return {j.id, 0};
        return {j.origin_id.value_or(j.id), (j.id - base_) % kAttemptStride};
    }

    int pick() const {
        int best = -1;
        for (std::size_t k = 0; k < rt_.size(); ++k) {
            if (rt_[k].queue.empty()) continue;
            if (best < 0 || rt_[k].free < rt_[static_cast<std::size_t>(best)].free) best = static_cast<int>(k);
        }
        return best;
    }

    // Accrues environmental wear over an idle gap; a crossing fires CM.
    void advance(Runtime& rt, double t) {
        if (!(t > rt.free)) return;
        rt.st.W += rt.gap.wear_environment(t - rt.free, *rt.m);
        rt.free = t;
        if (cm_required(rt.st, *rt.m)) corrective(rt, t);
    }

    void corrective(Runtime& rt, double t) {
        MaintenanceRecord r;
        r.event.kind = MaintenanceKind::CM;
        r.event.machine_id = rt.m->id;
        r.event.time = t;
        r.event.duration = rt.m->T_cm;
        r.event.cost = rt.m->C_cm;
        r.w_before = rt.st.W;
        rt.st = corrective_maintenance(rt.st, *rt.m);
        r.w_after = rt.st.W;
        r.round = round_;
        round_cost_ += r.event.cost;
        trace_.maintenance.push_back(r);
        rt.free = t + rt.m->T_cm;
        rt.pm_allowed = false;
    }

    // Jobs processed before the first CM when running the queue from state s.
    int jobs_before_cm(const Runtime& rt, MachineState s, Sampler smp) const {
        const auto& g = inst_.globals;
        int n = 0;
        for (const auto& slot : rt.queue) {
            double O;
            std::optional<double> delta;
            if (slot.idle()) {
                if (online() || !opt_.idle_as_phantom) continue;
                O = inst_.mean_nominal_time(slot.type, rt.m->id);
            } else {
                const Job& j = job(slot.job);
                O = j.nominal_times.at(rt.m->id);
                double v = j.initial_quality ? *j.initial_quality : smp.initial_quality(g);
                delta = ineligible_deviation(v, inst_.quality.at(j.job_type));
            }
            double p = actual_processing_time(O, g.eta, s.W);
            s.W += degradation_increment({p, delta, p}, *rt.m, smp).total;
            if (!slot.idle()) ++n;
            if (cm_required(s, *rt.m)) break;
        }
        return n;
    }

    // Prop-2 screening. Returns true when the machine is (now) suspended.
    bool screen(Runtime& rt, double t) {
        if (rt.st.suspended) return true;
        if (!opt_.pm_suspension) return false;
        LifecycleStats stats = rt.st.lifecycle;
        stats.maint_cost += rt.m->C_cm;  // the failure that ends this life cycle
        Sampler proj = sampler_.substream(stream_tag::projection, static_cast<std::uint64_t>(rt.m->id))
                           .substream(static_cast<std::uint64_t>(projections_++));
        int without = jobs_before_cm(rt, rt.st, proj);
        int with = jobs_before_cm(rt, imperfect_pm(rt.st, inst_.globals.theta, inst_.globals.varphi), proj);
        try {
            if (pm_suspension_check(stats, *rt.m, with - without, 0.0)) {
                rt.st.suspended = true;
                trace_.suspensions.push_back({rt.m->id, std::max(rt.free, t)});
            }
        } catch (const UndefinedStatistics&) {
            return false;
        }
        return rt.st.suspended;
    }

    bool wants_pm(Runtime& rt, double t) {
        if (!rt.pm_allowed || !pm_due(rt.st, *rt.m, policy_.zeta, policy_.n_u)) return false;
        return !screen(rt, t);
    }

    void maybe_pm(std::size_t k, double t) {
        Runtime& rt = rt_[k];
        if (!wants_pm(rt, t)) return;
        const double window = group_window(policy_.psi, inst_.machines);
        std::vector<DuePm> due{{rt.m->id, t}};
        for (std::size_t j = 0; j < rt_.size(); ++j) {
            if (j == k || rt_[j].queue.empty()) continue;
            if (rt_[j].free > t + window || !(window > 0)) continue;
            if (wants_pm(rt_[j], t)) due.push_back({rt_[j].m->id, std::max(rt_[j].free, t)});
        }
        auto events = group_pms(due, policy_.psi, inst_.machines, next_group_);
        int max_gid = next_group_;
        for (const auto& e : events) {
            Runtime& m = rt_[static_cast<std::size_t>(inst_.machine_index(e.machine_id))];
            advance(m, e.time);
            max_gid = std::max(max_gid, *e.group_id + 1);
            if (!m.pm_allowed) continue;  // a gap crossing fired CM instead
            MaintenanceRecord r;
            r.event = e;
            r.event.time = std::max(e.time, m.free);
            r.w_before = m.st.W;
            m.st = imperfect_pm(m.st, inst_.globals.theta, inst_.globals.varphi);
            m.st.lifecycle.maint_cost += e.cost;
            r.w_after = m.st.W;
            r.round = round_;
            round_cost_ += e.cost;
            trace_.maintenance.push_back(r);
            m.free = r.event.time + e.duration;
            m.pm_allowed = false;
        }
        next_group_ = max_gid;
    }

    std::optional<Job> take_pending(JobType type, MachineId k) {
        for (auto it = pending_.begin(); it != pending_.end(); ++it) {
            if (it->job_type == type && it->nominal_times.count(k)) {
                Job j = *it;
                pending_.erase(it);
                return j;
            }
        }
        return std::nullopt;
    }

    void step(std::size_t k) {
        Runtime& rt = rt_[k];
        PlanSlot& front = rt.queue.front();
        if (front.idle()) {
            if (online()) {
                auto j = take_pending(front.type, rt.m->id);
                if (!j) {
                    rt.queue.pop_front();
                    return;
                }
                front.job = j->id;
            } else if (!opt_.idle_as_phantom) {
                rt.queue.pop_front();
                return;
            }
        }

        // The PM projection sees the slot about to run, so pop only afterwards.
        advance(rt, std::max(rt.free, front.planned_start));
        maybe_pm(k, rt.free);
        PlanSlot slot = rt.queue.front();
        rt.queue.pop_front();

        const auto& g = inst_.globals;
        const double start = rt.free;
        if (slot.idle()) {
            IdleRecord r;
            r.machine = rt.m->id;
            r.type = slot.type;
            r.start = start;
            r.w_before = rt.st.W;
            double p = actual_processing_time(inst_.mean_nominal_time(slot.type, rt.m->id), g.eta, rt.st.W);
            Sampler s = sampler_.substream(stream_tag::idle, static_cast<std::uint64_t>(rt.m->id))
                            .substream(static_cast<std::uint64_t>(rt.idle_counter++));
            rt.st.W += degradation_increment({p, std::nullopt, p}, *rt.m, s).total;
            r.end = start + p;
            r.w_after = rt.st.W;
            trace_.idles.push_back(r);
            rt.free = r.end;
            rt.pm_allowed = true;
            if (cm_required(rt.st, *rt.m)) corrective(rt, rt.free);
            return;
        }

        const Job& j = job(slot.job);
        JobMeta jm = meta(j);
        auto key = [&](std::uint64_t tag) {
            return sampler_.substream(tag, static_cast<std::uint64_t>(jm.origin)).substream(static_cast<std::uint64_t>(jm.attempt));
        };
        JobRecord r;
        r.job = j.id;
        r.origin = jm.origin;
        r.attempt = jm.attempt;
        r.machine = rt.m->id;
        r.type = j.job_type;
        r.start = start;
        r.w_before = rt.st.W;
        r.p = actual_processing_time(j.nominal_times.at(rt.m->id), g.eta, rt.st.W);
        Sampler qs = key(stream_tag::quality);
        r.input_quality = j.initial_quality ? *j.initial_quality : qs.initial_quality(g);
        Sampler ns = key(stream_tag::noise);
        double eps = ns.quality_noise(g);
        r.D = quality_characteristic(r.input_quality, rt.m->coefficients(g.coefficient_set), rt.st.W, eps);
        r.conforming = classify_quality(r.D, inst_.quality, j.job_type);
        auto delta = ineligible_deviation(r.input_quality, inst_.quality.at(j.job_type));
        Sampler ws = key(stream_tag::wear);
        rt.st.W += degradation_increment({r.p, delta, r.p}, *rt.m, ws).total;
        r.w_after = rt.st.W;
        r.end = start + r.p;
        r.round = round_;
        rt.st.lifecycle.n_jobs += 1;
        rt.st.lifecycle.proc_time += r.p;
        rt.free = r.end;
        rt.pm_allowed = true;
        trace_.jobs.push_back(r);
        if (r.conforming)
            ++trace_.qualified;
        else
            ++trace_.nonconforming;
        observations_.push({r.end, trace_.jobs.size() - 1});
        if (cm_required(rt.st, *rt.m)) corrective(rt, r.end);
    }

    // Processes completions up to time t. Returns true if a reschedule ran.
    bool drain_observations(double t) {
        while (!observations_.empty() && observations_.top().end <= t) {
            Observation o = observations_.top();
            observations_.pop();
            const JobRecord& r = trace_.jobs[o.record];
            ++window_.n;
            if (r.conforming) {
                ++window_.qualified;
            } else {
                ++window_.bad;
                if (online()) {
                    if (r.attempt < opt_.max_rework_attempts) {
                        const Job& origin = inst_.job(r.origin);
                        Job c;
                        c.id = rework_id(r.origin, r.attempt + 1);
                        c.job_type = origin.job_type;
                        c.nominal_times = origin.nominal_times;
                        c.is_rework_copy = true;
                        c.origin_id = r.origin;
                        copies_[c.id] = c;
                        pending_.push_back(c);
                    } else {
                        ++trace_.scrapped;
                    }
                }
            }
            if (online() && window_.n >= opt_.trigger_min_jobs && window_.bad > 0 &&
                static_cast<double>(window_.bad) / window_.n >= policy_.thr_r) {
                reschedule(o.end, false);
                return true;
            }
        }
        return false;
    }

    void close_round() {
        double end = round_start_;
        for (const auto& j : trace_.jobs)
            if (j.round == round_) end = std::max(end, j.end);
        RoundStats s;
        s.start = round_start_;
        s.end = end;
        s.maint_cost = round_cost_;
        for (const auto& j : trace_.jobs)
            if (j.round == round_) {
                ++s.n_jobs;
                if (j.conforming) ++s.qualified;
            }
        trace_.rounds.push_back(s);
    }

    void flush_reschedule() {
        double t = opt_.start_time;
        for (const auto& j : trace_.jobs) t = std::max(t, j.end);
        reschedule(t, true);
    }

    void reschedule(double t, bool flush) {
        close_round();
        trace_.reschedules.push_back({t, round_, flush});
        RescheduleContext ctx;
        ctx.trigger_time = t;
        ctx.round = round_;
        ctx.flush = flush;
        ctx.policy = policy_;
        ctx.pm_suspension = opt_.pm_suspension;
        ctx.sampler = sampler_;
        ctx.pending = pending_;
        for (const auto& [id, c] : copies_) ctx.copies.push_back(c);
        for (const auto& rt : rt_) {
            ctx.machines.push_back({rt.st, rt.free, rt.pm_allowed});
            MachinePlan mp;
            mp.machine = rt.m->id;
            mp.slots.assign(rt.queue.begin(), rt.queue.end());
            ctx.remaining.machines.push_back(std::move(mp));
        }
        SchedulePlan next = opt_.rescheduler ? opt_.rescheduler(ctx) : right_shift(ctx, inst_);
        // Nothing placed here may start before the decision that placed it.
        std::vector<double> origin;
        for (const auto& rt : rt_) origin.push_back(std::max(rt.free, t));
        replan_times(next, inst_, ctx.copies, origin);
        for (auto& rt : rt_) {
            const auto& slots = next.on(rt.m->id).slots;
            rt.queue.assign(slots.begin(), slots.end());
        }
        // Copies the rescheduler left out stay pending.
        std::vector<Job> left;
        for (const auto& c : pending_)
            if (next.machine_of(c.id) < 0) left.push_back(c);
        pending_ = std::move(left);
        ++round_;
        round_start_ = t;
        round_cost_ = 0.0;
        window_ = {};
    }

    JobId rework_id(JobId origin, int attempt) const { return base_ + origin * kAttemptStride + attempt; }

    const ProblemInstance& inst_;
    PolicyParams policy_;
    Sampler sampler_;
    const SimOptions& opt_;
    JobId base_;
    std::vector<Runtime> rt_;
    std::unordered_map<JobId, Job> copies_;
    std::vector<Job> pending_;
    std::priority_queue<Observation, std::vector<Observation>, std::greater<>> observations_;
    ScheduleTrace trace_;
    int round_ = 0;
    double round_start_ = 0.0;
    double round_cost_ = 0.0;
    int next_group_ = 0;
    std::uint64_t projections_ = 0;
    struct {
        int n = 0;
        int bad = 0;
        int qualified = 0;
    } window_;
};

}  // namespace

JobId rework_copy_id(const ProblemInstance& inst, JobId origin, int attempt) {
    return copy_base(inst) + origin * kAttemptStride + attempt;
}

ScheduleTrace simulate(const SchedulePlan& plan, const ProblemInstance& inst, const PolicyParams& policy,
                       const Sampler& sampler, const SimOptions& opt) {
    if (opt.max_rework_attempts >= kAttemptStride)
        throw std::invalid_argument("max_rework_attempts must stay below " + std::to_string(kAttemptStride));
    Engine e(plan, inst, policy, sampler, opt);
    return e.run();
}

SchedulePlan right_shift(const RescheduleContext& ctx, const ProblemInstance& inst) {
    SchedulePlan plan = ctx.remaining;
    for (const auto& c : ctx.pending) {
        bool placed = false;
        for (auto& mp : plan.machines) {
            if (!c.nominal_times.count(mp.machine)) continue;
            for (auto& s : mp.slots) {
                if (s.idle() && s.type == c.job_type) {
                    s.job = c.id;
                    placed = true;
                    break;
                }
            }
            if (placed) break;
        }
        if (placed) continue;
        std::size_t best = plan.machines.size();
        double best_end = std::numeric_limits<double>::infinity();
        for (std::size_t mi = 0; mi < plan.machines.size(); ++mi) {
            const auto& mp = plan.machines[mi];
            if (!c.nominal_times.count(mp.machine)) continue;
            double end = ctx.machines[mi].free_time;
            for (const auto& s : mp.slots) {
                if (s.idle()) continue;
                const Job* j = nullptr;
                for (const auto& cc : ctx.copies)
                    if (cc.id == s.job) j = &cc;
                end += (j ? *j : inst.job(s.job)).nominal_times.at(mp.machine);
            }
            if (end < best_end) {
                best_end = end;
                best = mi;
            }
        }
        if (best == plan.machines.size()) continue;  // no capable machine; cannot happen for valid instances
        PlanSlot s;
        s.job = c.id;
        s.type = c.job_type;
        plan.machines[best].slots.push_back(s);
    }
    return plan;
}

SchedulePlan nominal_plan(const ProblemInstance& inst) {
    SchedulePlan plan;
    std::vector<double> load(inst.machines.size(), 0.0);
    for (const auto& m : inst.machines) plan.machines.push_back({m.id, {}});
    for (const auto& j : inst.jobs) {
        std::size_t best = inst.machines.size();
        for (std::size_t k = 0; k < inst.machines.size(); ++k) {
            if (!j.nominal_times.count(inst.machines[k].id)) continue;
            if (best == inst.machines.size() || load[k] < load[best]) best = k;
        }
        if (best == inst.machines.size()) continue;
        load[best] += j.nominal_times.at(inst.machines[best].id);
        PlanSlot s;
        s.job = j.id;
        s.type = j.job_type;
        plan.machines[best].slots.push_back(s);
    }
    replan_times(plan, inst);
    return plan;
}

std::map<JobType, int> idle_space_count(const ProblemInstance& inst, const Sampler& sampler) {
    SchedulePlan plan = nominal_plan(inst);
    PolicyParams policy;
    policy.n_u = 0;  // pilot runs without PM
    SimOptions opt;
    opt.pm_suspension = false;
    ScheduleTrace t = simulate(plan, inst, policy, sampler, opt);
    std::map<JobType, int> bad;
    for (auto type : inst.job_types()) bad[type] = 0;
    for (const auto& j : t.jobs)
        if (!j.conforming) ++bad[j.type];
    std::map<JobType, int> out;
    for (const auto& [type, n0] : bad) {
        int m = static_cast<int>(inst.capable_machines(type).size());
        out[type] = m > 0 ? (n0 + m - 1) / m : 0;
    }
    return out;
}

double fitness_static(double qualified, double maint_cost, double makespan) {
    if (!(makespan > 0)) return 0.0;
    return qualified * qualified / (std::max(maint_cost, 1.0) * makespan);
}

double fitness_static(const ScheduleTrace& t) {
    return fitness_static(t.qualified, t.objectives.maintenance_cost, t.objectives.makespan);
}

double fitness_resched(double qualified, double maint_cost, double span) {
    if (!(span > 0)) return 0.0;
    return qualified * qualified / (std::max(maint_cost, 1.0) * span);
}

double fitness_eval(double cost_sum, double time_sum, double deviation) {
    return 1.0 / (std::max(cost_sum, 1.0) * time_sum * deviation);
}

double fitness_eval(const ScheduleTrace& t, const SchedulePlan& baseline) {
    double c = 0.0;
    double tt = 0.0;
    for (const auto& r : t.rounds) {
        c += r.maint_cost;
        tt += r.span();
    }
    return fitness_eval(c, tt, deviation(baseline, t));
}

ObjectivePair objectives(const ScheduleTrace& t) {
    ObjectivePair o;
    for (const auto& j : t.jobs) o.makespan = std::max(o.makespan, j.end);
    for (const auto& m : t.maintenance) o.maintenance_cost += m.event.cost;
    return o;
}

double deviation(const SchedulePlan& baseline, const ScheduleTrace& realized) {
    std::unordered_map<JobId, const JobRecord*> first;
    for (const auto& j : realized.jobs)
        if (j.attempt == 0 && !first.count(j.job)) first[j.job] = &j;
    double shift = 0.0;
    double ptot = 0.0;
    int moved = 0;
    int n = 0;
    for (const auto& mp : baseline.machines) {
        for (const auto& s : mp.slots) {
            if (s.idle()) continue;
            ++n;
            ptot += s.planned_duration;
            auto it = first.find(s.job);
            if (it == first.end()) continue;
            shift += std::abs(it->second->start - s.planned_start);
            if (it->second->machine != mp.machine) ++moved;
        }
    }
    if (n == 0) return 1.0;
    double d = 1.0 + (ptot > 0 ? shift / ptot : 0.0) + static_cast<double>(moved) / n;
    return std::max(1.0, d);
}

}  // namespace qrp
