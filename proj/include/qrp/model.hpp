#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace qrp {

using JobId = int;
using MachineId = int;
using JobType = int;

struct Job {
    JobId id = 0;
    JobType job_type = 1;
    /// Nominal processing time O_{i,k} per capable machine.
    std::map<MachineId, double> nominal_times;
    /// Known input quality. When empty the simulator samples it from the
    /// truncated-normal law in GlobalParams on every replication.
    std::optional<double> initial_quality;
    bool is_rework_copy = false;
    std::optional<JobId> origin_id;
};

/// One coefficient triple of the quality model D = v + a W + b eps + W Gamma eps.
struct QualityCoefficients {
    double a = 0.0;
    double b0 = 0.0;
    double gamma = 0.0;
};

enum class CoefficientSet { table, alternate };

struct MachineParams {
    MachineId id = 1;
    double mu_minus = 0.0;
    double sigma_minus = 0.0;
    double mu_plus = 0.0;
    double sigma_plus = 0.0;
    double alpha = 1.0;  ///< Gamma shape rate per time unit
    double beta = 0.0;   ///< Gamma scale
    QualityCoefficients table;
    QualityCoefficients alternate;
    double upsilon_k0 = 0.0;
    double L = 1.0;
    double W0 = 0.0;
    double T_pm = 0.0;
    double T_ps = 0.0;
    double T_cm = 0.0;
    double C_pm = 0.0;
    double C_ps = 0.0;
    double C_cm = 0.0;
    std::set<JobType> capable_types;

    [[nodiscard]] bool can_process(JobType t) const { return capable_types.count(t) > 0; }
    [[nodiscard]] const QualityCoefficients& coefficients(CoefficientSet s) const {
        return s == CoefficientSet::table ? table : alternate;
    }
};

struct TypeSpec {
    double SL_plus = 0.0;
    double xi = 0.0;
};

struct QualitySpec {
    std::map<JobType, TypeSpec> by_type;

    [[nodiscard]] const TypeSpec& at(JobType t) const;
};

struct GlobalParams {
    double eta = 0.0;
    double theta = 1.0;
    double varphi = 0.0;
    double mu_q = 0.0;
    double sigma_q = 1.0;
    std::pair<double, double> quality_bounds{-3.0, 3.0};
    double noise_sigma = 1.0;
    double big_M = 1e6;
    CoefficientSet coefficient_set = CoefficientSet::alternate;
};

struct ProblemInstance {
    std::vector<Job> jobs;
    std::vector<MachineParams> machines;
    QualitySpec quality;
    GlobalParams globals;

    [[nodiscard]] int machine_index(MachineId id) const;  ///< -1 when unknown
    [[nodiscard]] const MachineParams& machine(MachineId id) const;
    [[nodiscard]] const Job& job(JobId id) const;
    [[nodiscard]] std::vector<JobType> job_types() const;
    /// Machines able to process a type, in instance order.
    [[nodiscard]] std::vector<MachineId> capable_machines(JobType t) const;
    /// Mean nominal time of jobs of type t on machine k; the duration of an
    /// idle slot of that type in a static plan.
    [[nodiscard]] double mean_nominal_time(JobType t, MachineId k) const;
};

struct ObjectivePair {
    double makespan = 0.0;
    double maintenance_cost = 0.0;

    friend bool operator==(const ObjectivePair&, const ObjectivePair&) = default;
};

/// Weak Pareto dominance for minimisation of both objectives.
[[nodiscard]] bool dominates(const ObjectivePair& a, const ObjectivePair& b);

/// Returns every violated invariant as a readable line; empty iff valid.
[[nodiscard]] std::vector<std::string> validate_instance(const ProblemInstance& inst);

/// The four-machine base case (reference parameter table plus the alternate
/// coefficient vectors), without jobs.
[[nodiscard]] ProblemInstance base_machine_table(double sigma_q = 0.06);

}  // namespace qrp
