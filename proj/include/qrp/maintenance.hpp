#pragma once

#include "qrp/model.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace qrp {

struct LifecycleStats {
    int n_jobs = 0;
    double proc_time = 0.0;
    double maint_cost = 0.0;
};

struct MachineState {
    MachineId machine_id = 0;
    double W = 0.0;
    int n_pm_since_cm = 0;
    int pm_count_life = 0;
    bool suspended = false;
    LifecycleStats lifecycle;

    static MachineState initial(const MachineParams& m) {
        MachineState s;
        s.machine_id = m.id;
        s.W = m.W0;
        return s;
    }
};

enum class MaintenanceKind { PM, CM };

struct MaintenanceEvent {
    MaintenanceKind kind = MaintenanceKind::PM;
    MachineId machine_id = 0;
    double time = 0.0;
    std::optional<int> group_id;
    double duration = 0.0;
    double cost = 0.0;
};

/// Thrown when suspension statistics have a zero denominator.
struct UndefinedStatistics : std::domain_error {
    using std::domain_error::domain_error;
};

/// W' = theta W + varphi N_pm, with N_pm read before it is incremented.
[[nodiscard]] MachineState imperfect_pm(const MachineState& s, double theta, double varphi);

/// Full restoration. Throws std::logic_error when W <= L.
[[nodiscard]] MachineState corrective_maintenance(const MachineState& s, const MachineParams& m);

[[nodiscard]] inline bool cm_required(const MachineState& s, const MachineParams& m) { return s.W > m.L; }

[[nodiscard]] inline bool pm_due(const MachineState& s, const MachineParams& m, double zeta, int n_u) {
    return !s.suspended && s.W >= zeta * m.L && s.n_pm_since_cm < n_u;
}

struct DuePm {
    MachineId machine_id = 0;
    double time = 0.0;
};

/// Width of the grouping window: psi times the longest single PM (T_pm + T_ps).
[[nodiscard]] double group_window(double psi, const std::vector<MachineParams>& machines);

/// Merges due PMs into joint groups. Due times are scanned in order; a group
/// absorbs every later PM due within `group_window` of its first member. All
/// members start together at the latest member due time, last for the longest
/// member PM and share the setup cost evenly. Group ids start at `first_group_id`.
[[nodiscard]] std::vector<MaintenanceEvent> group_pms(std::vector<DuePm> due, double psi,
                                                      const std::vector<MachineParams>& machines,
                                                      int first_group_id = 0);

/// True when PM should be suspended for the rest of the life cycle:
/// gain / n_jobs < min((T_pm + T_ps) / proc_time, (C_pm + setup_share) / maint_cost).
/// Throws UndefinedStatistics when any statistic is zero.
[[nodiscard]] bool pm_suspension_check(const LifecycleStats& stats, const MachineParams& m, int n_pm_gain,
                                       double setup_share = 0.0);

/// PMs on `machine` after its latest CM (or t = 0) and at or before t.
[[nodiscard]] int count_pms_since_cm(const std::vector<MaintenanceEvent>& history, MachineId machine, double t);

}  // namespace qrp
