#include "qrp/model.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qrp {

const TypeSpec& QualitySpec::at(JobType t) const {
    auto it = by_type.find(t);
    if (it == by_type.end()) throw std::out_of_range("no quality spec for job type " + std::to_string(t));
    return it->second;
}

int ProblemInstance::machine_index(MachineId id) const {
    for (std::size_t k = 0; k < machines.size(); ++k)
        if (machines[k].id == id) return static_cast<int>(k);
    return -1;
}

const MachineParams& ProblemInstance::machine(MachineId id) const {
    int k = machine_index(id);
    if (k < 0) throw std::out_of_range("unknown machine id " + std::to_string(id));
    return machines[static_cast<std::size_t>(k)];
}

const Job& ProblemInstance::job(JobId id) const {
    // Generated instances use ids 0..n-1, so try the direct slot first.
    if (id >= 0 && static_cast<std::size_t>(id) < jobs.size() && jobs[static_cast<std::size_t>(id)].id == id)
        return jobs[static_cast<std::size_t>(id)];
    for (const auto& j : jobs)
        if (j.id == id) return j;
    throw std::out_of_range("unknown job id " + std::to_string(id));
}

std::vector<JobType> ProblemInstance::job_types() const {
    std::set<JobType> types;
    for (const auto& j : jobs) types.insert(j.job_type);
    return {types.begin(), types.end()};
}

std::vector<MachineId> ProblemInstance::capable_machines(JobType t) const {
    std::vector<MachineId> out;
    for (const auto& m : machines)
        if (m.can_process(t)) out.push_back(m.id);
    return out;
}

double ProblemInstance::mean_nominal_time(JobType t, MachineId k) const {
    double sum = 0.0;
    int n = 0;
    for (const auto& j : jobs) {
        if (j.job_type != t) continue;
        auto it = j.nominal_times.find(k);
        if (it == j.nominal_times.end()) continue;
        sum += it->second;
        ++n;
    }
    return n > 0 ? sum / n : 0.0;
}

bool dominates(const ObjectivePair& a, const ObjectivePair& b) {
    return a.makespan <= b.makespan && a.maintenance_cost <= b.maintenance_cost &&
           (a.makespan < b.makespan || a.maintenance_cost < b.maintenance_cost);
}

std::vector<std::string> validate_instance(const ProblemInstance& inst) {
    std::vector<std::string> out;
    auto report = [&out](const std::string& s) { out.push_back(s); };

    std::set<MachineId> machine_ids;
    for (const auto& m : inst.machines) {
        std::string who = "machine " + std::to_string(m.id);
        if (!machine_ids.insert(m.id).second) report(who + ": duplicate machine id");
        if (!(m.sigma_minus > 0)) report(who + ": sigma_minus must be > 0");
        if (!(m.sigma_plus > 0)) report(who + ": sigma_plus must be > 0");
        if (!(m.alpha > 0)) report(who + ": alpha must be > 0");
        if (!(m.beta > 0)) report(who + ": beta must be > 0");
        if (!(m.W0 >= 0 && m.W0 < m.L)) report(who + ": W0 must lie in [0, L)");
        const std::array<std::pair<const char*, double>, 6> nonneg{{{"T_pm", m.T_pm},
                                                                    {"T_ps", m.T_ps},
                                                                    {"T_cm", m.T_cm},
                                                                    {"C_pm", m.C_pm},
                                                                    {"C_ps", m.C_ps},
                                                                    {"C_cm", m.C_cm}}};
        for (const auto& [name, v] : nonneg)
            if (!(v >= 0)) report(who + ": " + name + " must be >= 0");
    }

    for (const auto& [t, spec] : inst.quality.by_type)
        if (!(spec.xi > 0)) report("quality spec of type " + std::to_string(t) + ": xi must be > 0");

    const auto& g = inst.globals;
    if (!(g.eta >= 0)) report("globals: eta must be >= 0");
    if (!(g.theta > 0 && g.theta <= 1)) report("globals: theta must lie in (0, 1]");
    if (!(g.varphi >= 0)) report("globals: varphi must be >= 0");
    if (!(g.sigma_q > 0)) report("globals: sigma_q must be > 0");
    if (!(g.quality_bounds.first < g.quality_bounds.second)) report("globals: quality bounds need lo < hi");

    std::set<JobId> ids;
    std::set<JobId> all_ids;
    for (const auto& j : inst.jobs) all_ids.insert(j.id);
    for (const auto& j : inst.jobs) {
        std::string who = "job " + std::to_string(j.id);
        if (!ids.insert(j.id).second) report(who + ": duplicate job id");
        if (j.nominal_times.empty()) report(who + ": nominal_times is empty");
        for (const auto& [k, o] : j.nominal_times) {
            int idx = inst.machine_index(k);
            if (idx < 0) {
                report(who + ": references unknown machine " + std::to_string(k));
                continue;
            }
            if (!inst.machines[static_cast<std::size_t>(idx)].can_process(j.job_type))
                report(who + ": machine " + std::to_string(k) + " cannot process type " + std::to_string(j.job_type));
            if (!(o > 0)) report(who + ": nominal time on machine " + std::to_string(k) + " must be > 0");
        }
        if (!inst.quality.by_type.count(j.job_type)) report(who + ": no quality spec for its type");
        if (j.is_rework_copy && (!j.origin_id || !all_ids.count(*j.origin_id) || *j.origin_id == j.id))
            report(who + ": rework copy must reference a real origin job");
    }
    return out;
}

ProblemInstance base_machine_table(double sigma_q) {
    ProblemInstance inst;
    const std::array<double, 4> mu_minus{82.4, 66.4, 74.72, 66};
    const std::array<double, 4> sigma_minus{0.00306, 0.00296, 0.00326, 0.00254};
    const std::array<double, 4> a{91.1, 98.95, 103.5, 86.5};
    const std::array<double, 4> b{0.57032, 0.5664, 0.5832, 0.5612};
    const std::array<double, 4> beta{5.792e-05, 5.516e-05, 6.423e-05, 6.085e-05};
    const std::array<double, 4> c_pm{430, 275, 230, 195};
    const std::array<double, 4> c_cm{1312, 1028, 876, 832};
    // Machine 4 is listed as 0.99 in the source table, above its own CM
    // threshold; 0.099 is the only value consistent with W0 < L.
    const std::array<double, 4> w0{0.1, 0.105, 0.11, 0.099};
    const std::array<double, 4> L{0.35, 0.4025, 0.385, 0.315};
    const std::array<double, 4> t_ps{12.6, 10.85, 10.5, 10.15};
    const std::array<double, 4> t_pm{12.54, 10.92, 10.49, 10.15};
    const std::array<double, 4> t_cm{44.75, 40.50, 36.64, 36.64};
    const std::array<double, 4> a_alt{0.0112, 0.0173, 0.0147, 0.0158};
    const std::array<double, 4> b_alt{0.0098, 0.0106, 0.0105, 0.0072};
    const std::array<double, 4> g_alt{0.0137, 0.0152, 0.0132, 0.0143};
    const std::array<std::set<JobType>, 4> caps{std::set<JobType>{1}, std::set<JobType>{2}, std::set<JobType>{1},
                                                std::set<JobType>{1, 2}};

    for (std::size_t k = 0; k < 4; ++k) {
        MachineParams m;
        m.id = static_cast<MachineId>(k + 1);
        m.mu_minus = mu_minus[k];
        m.sigma_minus = sigma_minus[k];
        m.mu_plus = 0.0;
        m.sigma_plus = 0.015;
        m.alpha = 1.0;
        m.beta = beta[k];
        m.table = {a[k], b[k], g_alt[k]};
        m.alternate = {a_alt[k], b_alt[k], g_alt[k]};
        m.upsilon_k0 = 42.72;
        m.L = L[k];
        m.W0 = w0[k];
        m.T_pm = t_pm[k];
        m.T_ps = t_ps[k];
        m.T_cm = t_cm[k];
        m.C_pm = c_pm[k];
        m.C_ps = 0.0;
        m.C_cm = c_cm[k];
        m.capable_types = caps[k];
        inst.machines.push_back(m);
    }
    inst.quality.by_type[1] = {42.72, 0.08};
    inst.quality.by_type[2] = {42.61, 0.07};

    auto& g = inst.globals;
    g.eta = 0.2;
    g.theta = 0.2;
    g.varphi = 0.08;
    g.mu_q = 42.72;
    g.sigma_q = sigma_q;
    g.quality_bounds = {g.mu_q - 3 * sigma_q, g.mu_q + 3 * sigma_q};
    g.noise_sigma = 1.0;
    g.big_M = 1e6;
    g.coefficient_set = CoefficientSet::alternate;
    return inst;
}

}  // namespace qrp
