#include "qrp/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qrp {

MachinePlan& SchedulePlan::on(MachineId id) {
    for (auto& m : machines)
        if (m.machine == id) return m;
    throw std::out_of_range("plan has no machine " + std::to_string(id));
}

const MachinePlan& SchedulePlan::on(MachineId id) const {
    for (const auto& m : machines)
        if (m.machine == id) return m;
    throw std::out_of_range("plan has no machine " + std::to_string(id));
}

MachineId SchedulePlan::machine_of(JobId job) const {
    for (const auto& m : machines)
        for (const auto& s : m.slots)
            if (s.job == job) return m.machine;
    return -1;
}

const PlanSlot* SchedulePlan::find(JobId job) const {
    for (const auto& m : machines)
        for (const auto& s : m.slots)
            if (s.job == job) return &s;
    return nullptr;
}

std::size_t SchedulePlan::job_count() const {
    std::size_t n = 0;
    for (const auto& m : machines)
        for (const auto& s : m.slots)
            if (!s.idle()) ++n;
    return n;
}

double SchedulePlan::nominal_makespan() const {
    double c = 0.0;
    for (const auto& m : machines)
        for (const auto& s : m.slots)
            if (!s.idle()) c = std::max(c, s.planned_start + s.planned_duration);
    return c;
}

double key_fraction(double key) { return key - std::floor(key); }

JobType slot_type(const Chromosome& ch, const ProblemInstance& inst, std::size_t i) {
    if (i < inst.jobs.size()) return inst.jobs[i].job_type;
    return ch.idle_types.at(i - inst.jobs.size());
}

namespace {

const Job& lookup(const ProblemInstance& inst, const std::vector<Job>& extra, JobId id) {
    for (const auto& j : extra)
        if (j.id == id) return j;
    return inst.job(id);
}

}  // namespace

double slot_duration(const ProblemInstance& inst, const PlanSlot& s, MachineId k) {
    if (s.idle()) return inst.mean_nominal_time(s.type, k);
    return inst.job(s.job).nominal_times.at(k);
}

SchedulePlan decode(const Chromosome& ch, const ProblemInstance& inst) {
    const std::size_t n = inst.jobs.size();
    if (ch.keys.size() != n + ch.idle_types.size())
        throw std::invalid_argument("chromosome length does not match jobs plus idle slots");

    struct Entry {
        double frac;
        int tie;  // job id for jobs; large offset keeps idle slots after jobs
        PlanSlot slot;
    };
    std::map<MachineId, std::vector<Entry>> per;
    for (const auto& m : inst.machines) per[m.id];

    for (std::size_t i = 0; i < ch.keys.size(); ++i) {
        JobType t = slot_type(ch, inst, i);
        MachineId k = key_machine(ch.keys[i]);
        int idx = inst.machine_index(k);
        if (idx < 0 || !inst.machines[static_cast<std::size_t>(idx)].can_process(t))
            throw IncapableMachine("slot " + std::to_string(i) + " of type " + std::to_string(t) +
                                   " keyed to incapable machine " + std::to_string(k));
        PlanSlot s;
        s.type = t;
        int tie;
        if (i < n) {
            s.job = inst.jobs[i].id;
            if (!inst.jobs[i].nominal_times.count(k))
                throw IncapableMachine("job " + std::to_string(s.job) + " has no time on machine " + std::to_string(k));
            tie = s.job;
        } else {
            tie = std::numeric_limits<int>::max() / 2 + static_cast<int>(i);
        }
        per[k].push_back({key_fraction(ch.keys[i]), tie, s});
    }

    SchedulePlan plan;
    for (const auto& m : inst.machines) {
        auto& v = per[m.id];
        std::stable_sort(v.begin(), v.end(), [](const Entry& a, const Entry& b) {
            return a.frac != b.frac ? a.frac < b.frac : a.tie < b.tie;
        });
        MachinePlan mp;
        mp.machine = m.id;
        for (auto& e : v) mp.slots.push_back(e.slot);
        plan.machines.push_back(std::move(mp));
    }
    replan_times(plan, inst);
    return plan;
}

SchedulePlan compact(SchedulePlan plan) {
    for (auto& m : plan.machines) {
        double t = 0.0;
        for (auto& s : m.slots) {
            s.planned_start = t;
            t += s.planned_duration;
        }
    }
    return plan;
}

void replan_times(SchedulePlan& plan, const ProblemInstance& inst, const std::vector<Job>& extra_jobs,
                  const std::vector<double>& origin) {
    for (std::size_t mi = 0; mi < plan.machines.size(); ++mi) {
        auto& m = plan.machines[mi];
        double t = mi < origin.size() ? origin[mi] : 0.0;
        for (auto& s : m.slots) {
            s.planned_duration = s.idle() ? inst.mean_nominal_time(s.type, m.machine)
                                          : lookup(inst, extra_jobs, s.job).nominal_times.at(m.machine);
            s.planned_start = t;
            t += s.planned_duration;
        }
    }
}

}  // namespace qrp
