#include "qrp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace qrp {

std::size_t FeasibilityReport::count(const std::string& tag) const {
    return static_cast<std::size_t>(
        std::count_if(violations.begin(), violations.end(), [&](const Violation& v) { return v.tag == tag; }));
}

namespace {

constexpr double kTol = 1e-7;

bool close(double a, double b) { return std::abs(a - b) <= kTol * std::max(1.0, std::max(std::abs(a), std::abs(b))); }

// One machine's timeline entry.
struct Activity {
    enum Kind { job, idle, pm, cm } kind;
    double start;
    double end;
    double w_before;
    double w_after;
    std::size_t index;
};

}  // namespace

FeasibilityReport check_feasibility(const ScheduleTrace& trace, const ProblemInstance& inst) {
    FeasibilityReport rep;
    auto add = [&rep](const char* tag, const std::string& d) { rep.violations.push_back({tag, d}); };

    // C4
    std::map<JobId, int> seen;
    std::map<JobId, int> copies;
    for (const auto& r : trace.jobs) {
        if (r.attempt == 0)
            ++seen[r.job];
        else
            ++copies[r.job];
        const Job& origin = inst.job(r.origin);
        if (!origin.nominal_times.count(r.machine))
            add("C4", "job " + std::to_string(r.job) + " ran on incapable machine " + std::to_string(r.machine));
    }
    for (const auto& j : inst.jobs) {
        if (j.is_rework_copy) continue;
        int n = seen.count(j.id) ? seen[j.id] : 0;
        if (n != 1) add("C4", "job " + std::to_string(j.id) + " processed " + std::to_string(n) + " times");
    }
    for (const auto& [id, n] : copies)
        if (n != 1) add("C4", "rework copy " + std::to_string(id) + " processed " + std::to_string(n) + " times");

    // C8/C9
    for (const auto& r : trace.jobs) {
        const Job& origin = inst.job(r.origin);
        auto it = origin.nominal_times.find(r.machine);
        if (it == origin.nominal_times.end()) continue;
        double p = it->second * (1.0 + inst.globals.eta * r.w_before);
        if (!close(r.p, p)) add("C8", "job " + std::to_string(r.job) + " has p inconsistent with its degradation");
        if (!close(r.end, r.start + r.p)) add("C9", "job " + std::to_string(r.job) + " ends off start + p");
    }

    // C15/C16
    std::map<int, std::vector<const MaintenanceRecord*>> groups;
    for (const auto& m : trace.maintenance) {
        if (m.event.kind == MaintenanceKind::PM) {
            if (!m.event.group_id)
                add("C15", "PM on machine " + std::to_string(m.event.machine_id) + " belongs to no group");
            else
                groups[*m.event.group_id].push_back(&m);
        } else if (m.event.group_id) {
            add("C15", "CM on machine " + std::to_string(m.event.machine_id) + " carries a group id");
        }
    }
    for (const auto& [g, members] : groups) {
        std::set<MachineId> ms;
        for (const auto* m : members) {
            if (!ms.insert(m->event.machine_id).second)
                add("C16", "group " + std::to_string(g) + " holds two PMs of one machine");
            if (!close(m->event.time, members.front()->event.time) ||
                !close(m->event.duration, members.front()->event.duration))
                add("C15", "group " + std::to_string(g) + " members disagree on start or duration");
        }
    }

    // Per-machine timelines.
    for (const auto& mp : inst.machines) {
        std::vector<Activity> acts;
        for (std::size_t i = 0; i < trace.jobs.size(); ++i) {
            const auto& r = trace.jobs[i];
            if (r.machine == mp.id) acts.push_back({Activity::job, r.start, r.end, r.w_before, r.w_after, i});
        }
        for (std::size_t i = 0; i < trace.idles.size(); ++i) {
            const auto& r = trace.idles[i];
            if (r.machine == mp.id) acts.push_back({Activity::idle, r.start, r.end, r.w_before, r.w_after, i});
        }
        for (std::size_t i = 0; i < trace.maintenance.size(); ++i) {
            const auto& r = trace.maintenance[i];
            if (r.event.machine_id != mp.id) continue;
            auto kind = r.event.kind == MaintenanceKind::PM ? Activity::pm : Activity::cm;
            acts.push_back({kind, r.event.time, r.event.time + r.event.duration, r.w_before, r.w_after, i});
        }
        std::stable_sort(acts.begin(), acts.end(), [](const Activity& a, const Activity& b) {
            if (a.start != b.start) return a.start < b.start;
            return a.end < b.end;  // zero-length items first
        });

        std::string who = "machine " + std::to_string(mp.id);
        bool job_since_maintenance = true;
        double w_prev = mp.W0;
        bool have_prev = false;
        for (std::size_t i = 0; i < acts.size(); ++i) {
            const auto& a = acts[i];
            if (i > 0 && a.start < acts[i - 1].end - kTol * std::max(1.0, a.start)) {
                const bool maint = a.kind == Activity::pm || a.kind == Activity::cm ||
                                   acts[i - 1].kind == Activity::pm || acts[i - 1].kind == Activity::cm;
                add(maint ? "C13" : "C5", who + " has overlapping activities at t=" + std::to_string(a.start));
            }
            switch (a.kind) {
                case Activity::job:
                case Activity::idle:
                    if (a.w_before > mp.L + kTol)
                        add("C17", who + " started work above its CM threshold at t=" + std::to_string(a.start));
                    if (have_prev && a.w_before < w_prev - kTol)
                        add("W", who + " degradation fell without maintenance at t=" + std::to_string(a.start));
                    if (a.w_after < a.w_before - kTol)
                        add("W", who + " degradation fell during work at t=" + std::to_string(a.start));
                    if (a.w_after > mp.L) {
                        bool cm_next = i + 1 < acts.size() && acts[i + 1].kind == Activity::cm &&
                                       close(acts[i + 1].start, a.end);
                        if (!cm_next)
                            add("C17", who + " crossed its threshold without an immediate CM at t=" +
                                           std::to_string(a.end));
                    }
                    job_since_maintenance = true;
                    w_prev = a.w_after;
                    have_prev = true;
                    break;
                case Activity::pm:
                    if (!job_since_maintenance)
                        add("C13", who + " has a PM right after another maintenance at t=" + std::to_string(a.start));
                    job_since_maintenance = false;
                    w_prev = a.w_after;
                    have_prev = true;
                    break;
                case Activity::cm:
                    if (!(a.w_before > mp.L))
                        add("C17", who + " has a CM below its threshold at t=" + std::to_string(a.start));
                    if (!close(a.w_after, mp.W0)) add("C17", who + " CM did not restore W0");
                    job_since_maintenance = false;
                    w_prev = a.w_after;
                    have_prev = true;
                    break;
            }
        }
    }
    return rep;
}

namespace {


struct SeqState {
    double W;
    int n_pm;
    double t;
    double cost;
    bool pm_allowed;
    int qualified;
    double last_end;
};

// Applies one step of the zero-variance model. Returns false when a PM is
// requested where it is not allowed.
bool apply(const ProblemInstance& inst, const MachineParams& m, SeqState& s, const OracleStep& step) {
    const auto& g = inst.globals;
    if (step.pm_before) {
        if (!s.pm_allowed) return false;
        s.W = g.theta * s.W + g.varphi * s.n_pm;
        s.n_pm += 1;
        s.t += m.T_pm + m.T_ps;
        s.cost += m.C_pm + m.C_ps;
    }
    const Job& j = inst.job(step.job);
    double O = j.nominal_times.at(m.id);
    double p = O * (1.0 + g.eta * s.W);
    double v = j.initial_quality ? *j.initial_quality
                                 : std::clamp(g.mu_q, g.quality_bounds.first, g.quality_bounds.second);
    const auto& spec = inst.quality.at(j.job_type);
    const auto& c = m.coefficients(g.coefficient_set);
    double D = v + c.a * s.W;
    if (std::abs(D - spec.SL_plus) < spec.xi) ++s.qualified;
    double wear = std::max(0.0, p * m.mu_plus) + m.alpha * p * m.beta;
    double dev = std::abs(v - spec.SL_plus);
    if (dev >= spec.xi) wear += std::max(0.0, dev * m.mu_minus);
    s.W += wear;
    s.t += p;
    s.last_end = s.t;
    s.pm_allowed = true;
    if (s.W > m.L) {
        s.W = m.W0;
        s.n_pm = 0;
        s.t += m.T_cm;
        s.cost += m.C_cm;
        s.pm_allowed = false;
    }
    return true;
}

struct FrontEntry {
    double makespan;
    double cost;
    int qualified;
    std::vector<OracleStep> seq;
};

// Keeps a per-subset Pareto front of (last job end, cost).
void insert_front(std::vector<FrontEntry>& front, FrontEntry e) {
    for (const auto& f : front)
        if (f.makespan <= e.makespan && f.cost <= e.cost) return;
    front.erase(std::remove_if(front.begin(), front.end(),
                               [&](const FrontEntry& f) { return e.makespan <= f.makespan && e.cost <= f.cost; }),
                front.end());
    front.push_back(std::move(e));
}

void dfs(const ProblemInstance& inst, const MachineParams& m, const std::vector<int>& capable, unsigned mask,
         SeqState s, std::vector<OracleStep>& seq, std::vector<std::vector<FrontEntry>>& fronts) {
    insert_front(fronts[mask], {s.last_end, s.cost, s.qualified, seq});
    for (int i : capable) {
        if (mask & (1u << i)) continue;
        for (int pm = 0; pm < 2; ++pm) {
            OracleStep step{inst.jobs[static_cast<std::size_t>(i)].id, pm == 1};
            SeqState next = s;
            if (!apply(inst, m, next, step)) continue;
            seq.push_back(step);
            dfs(inst, m, capable, mask | (1u << i), next, seq, fronts);
            seq.pop_back();
        }
    }
}

}  // namespace

OraclePoint evaluate_sequence(const ProblemInstance& inst, std::size_t machine_index,
                              const std::vector<OracleStep>& seq) {
    const auto& m = inst.machines.at(machine_index);
    SeqState s{m.W0, 0, 0.0, 0.0, true, 0, 0.0};
    for (const auto& step : seq)
        if (!apply(inst, m, s, step)) throw std::invalid_argument("PM requested right after maintenance");
    OraclePoint p;
    p.objectives = {s.last_end, s.cost};
    p.qualified = s.qualified;
    p.sequences.assign(inst.machines.size(), {});
    p.sequences[machine_index] = seq;
    return p;
}

OracleResult enumerate(const ProblemInstance& inst) {
    const std::size_t n = inst.jobs.size();
    const std::size_t M = inst.machines.size();
    if (n > kOracleMaxJobs || M > kOracleMaxMachines)
        throw OracleSizeLimit("oracle handles at most 8 jobs and 3 machines");

    // fronts[k][mask]: Pareto front of machine k processing exactly `mask`.
    std::vector<std::vector<std::vector<FrontEntry>>> fronts(M);
    for (std::size_t k = 0; k < M; ++k) {
        const auto& m = inst.machines[k];
        std::vector<int> capable;
        for (std::size_t i = 0; i < n; ++i)
            if (inst.jobs[i].nominal_times.count(m.id)) capable.push_back(static_cast<int>(i));
        fronts[k].assign(std::size_t{1} << n, {});
        std::vector<OracleStep> seq;
        dfs(inst, m, capable, 0u, {m.W0, 0, 0.0, 0.0, true, 0, 0.0}, seq, fronts[k]);
    }

    std::vector<OraclePoint> all;
    // Assign each job a machine (base-M counter), then combine machine fronts.
    std::vector<std::size_t> assign(n, 0);
    for (;;) {
        std::vector<unsigned> masks(M, 0u);
        for (std::size_t i = 0; i < n; ++i) masks[assign[i]] |= 1u << i;
        bool ok = true;
        for (std::size_t k = 0; k < M && ok; ++k)
            if (fronts[k][masks[k]].empty()) ok = false;
        if (ok) {
            std::vector<OraclePoint> partial{OraclePoint{{0.0, 0.0}, 0, std::vector<std::vector<OracleStep>>(M)}};
            for (std::size_t k = 0; k < M; ++k) {
                std::vector<OraclePoint> next;
                for (const auto& p : partial)
                    for (const auto& f : fronts[k][masks[k]]) {
                        OraclePoint q = p;
                        q.objectives.makespan = std::max(q.objectives.makespan, f.makespan);
                        q.objectives.maintenance_cost += f.cost;
                        q.qualified += f.qualified;
                        q.sequences[k] = f.seq;
                        next.push_back(std::move(q));
                    }
                partial = std::move(next);
            }
            for (auto& p : partial) all.push_back(std::move(p));
        }
        std::size_t i = 0;
        while (i < n && ++assign[i] == M) assign[i++] = 0;
        if (i == n) break;
        if (n == 0) break;
    }
    if (n == 0) all.push_back(OraclePoint{{0.0, 0.0}, 0, std::vector<std::vector<OracleStep>>(M)});

    std::sort(all.begin(), all.end(), [](const OraclePoint& a, const OraclePoint& b) {
        if (a.objectives.makespan != b.objectives.makespan) return a.objectives.makespan < b.objectives.makespan;
        return a.objectives.maintenance_cost < b.objectives.maintenance_cost;
    });
    OracleResult res;
    double best_cost = std::numeric_limits<double>::infinity();
    for (const auto& p : all) {
        if (p.objectives.maintenance_cost < best_cost) {
            res.pareto.push_back(p);
            best_cost = p.objectives.maintenance_cost;
        }
    }
    if (!all.empty()) res.best = all.front();
    return res;
}

}  // namespace qrp
