#include "qrp/maintenance.hpp"

#include <algorithm>
#include <map>

namespace qrp {

MachineState imperfect_pm(const MachineState& s, double theta, double varphi) {
    MachineState out = s;
    out.W = theta * s.W + varphi * s.n_pm_since_cm;
    out.n_pm_since_cm = s.n_pm_since_cm + 1;
    out.pm_count_life = s.pm_count_life + 1;
    return out;
}

MachineState corrective_maintenance(const MachineState& s, const MachineParams& m) {
    if (!(s.W > m.L)) throw std::logic_error("corrective maintenance requested below the CM threshold");
    MachineState out;
    out.machine_id = s.machine_id;
    out.W = m.W0;
    out.pm_count_life = s.pm_count_life;
    return out;
}

double group_window(double psi, const std::vector<MachineParams>& machines) {
    double longest = 0.0;
    for (const auto& m : machines) longest = std::max(longest, m.T_pm + m.T_ps);
    return psi * longest;
}

std::vector<MaintenanceEvent> group_pms(std::vector<DuePm> due, double psi, const std::vector<MachineParams>& machines,
                                        int first_group_id) {
    std::stable_sort(due.begin(), due.end(), [](const DuePm& a, const DuePm& b) {
        return a.time != b.time ? a.time < b.time : a.machine_id < b.machine_id;
    });
    auto params = [&machines](MachineId id) -> const MachineParams& {
        for (const auto& m : machines)
            if (m.id == id) return m;
        throw std::out_of_range("unknown machine id " + std::to_string(id));
    };

    const double window = group_window(psi, machines);
    std::vector<MaintenanceEvent> out;
    int gid = first_group_id;
    std::size_t i = 0;
    while (i < due.size()) {
        std::vector<DuePm> members{due[i]};
        std::size_t j = i + 1;
        for (; j < due.size() && due[j].time - due[i].time <= window && window > 0; ++j) {
            bool dup = std::any_of(members.begin(), members.end(),
                                   [&](const DuePm& d) { return d.machine_id == due[j].machine_id; });
            if (dup) break;  // a machine appears at most once per group
            members.push_back(due[j]);
        }
        double start = members.back().time;
        double duration = 0.0;
        double setup = 0.0;
        for (const auto& d : members) {
            const auto& m = params(d.machine_id);
            duration = std::max(duration, m.T_pm + m.T_ps);
            setup = std::max(setup, m.C_ps);
        }
        double share = setup / static_cast<double>(members.size());
        for (const auto& d : members) {
            MaintenanceEvent e;
            e.kind = MaintenanceKind::PM;
            e.machine_id = d.machine_id;
            e.time = start;
            e.group_id = gid;
            e.duration = duration;
            e.cost = params(d.machine_id).C_pm + share;
            out.push_back(e);
        }
        ++gid;
        i = j;
    }
    return out;
}

bool pm_suspension_check(const LifecycleStats& stats, const MachineParams& m, int n_pm_gain, double setup_share) {
    if (stats.n_jobs <= 0 || !(stats.proc_time > 0) || !(stats.maint_cost > 0))
        throw UndefinedStatistics("life-cycle statistics are not yet defined");
    double t_ratio = (m.T_pm + m.T_ps) / stats.proc_time;
    double c_ratio = (m.C_pm + setup_share) / stats.maint_cost;
    return static_cast<double>(n_pm_gain) / stats.n_jobs < std::min(t_ratio, c_ratio);
}

int count_pms_since_cm(const std::vector<MaintenanceEvent>& history, MachineId machine, double t) {
    int n = 0;
    for (const auto& e : history) {
        if (e.machine_id != machine || e.time > t) continue;
        if (e.kind == MaintenanceKind::CM)
            n = 0;
        else
            ++n;
    }
    return n;
}

}  // namespace qrp
