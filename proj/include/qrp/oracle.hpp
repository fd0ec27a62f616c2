#pragma once

#include "qrp/model.hpp"
#include "qrp/trace.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace qrp {

struct Violation {
    std::string tag;  ///< constraint family, e.g. "C4" or "C13"
    std::string description;
};

struct FeasibilityReport {
    std::vector<Violation> violations;

    [[nodiscard]] bool feasible() const { return violations.empty(); }
    [[nodiscard]] std::size_t count(const std::string& tag) const;
};

/// Checks a complete trace against the job, sequencing, timing, maintenance
/// and degradation rules.
///   C4      every original job processed exactly once on a capable machine
///   C5-C7   a strict order per machine: no two activities overlap
///   C8/C9   end = start + p with p = O (1 + eta W_before)
///   C13     no PM right after another maintenance without a job between
///   C15/C16 group members share start and duration; one PM per machine per group
///   C17     a CM follows each threshold crossing immediately and only then
///   W       degradation never decreases between maintenance events
/// The trace must come from `inst` with planned starts no later than the
/// machine's free time, as every plan in this library is built.
[[nodiscard]] FeasibilityReport check_feasibility(const ScheduleTrace& trace, const ProblemInstance& inst);

struct OracleStep {
    JobId job = 0;
    bool pm_before = false;
};

struct OraclePoint {
    ObjectivePair objectives;
    int qualified = 0;
    /// Per machine in instance order: the job sequence with PM flags.
    std::vector<std::vector<OracleStep>> sequences;
};

struct OracleResult {
    std::vector<OraclePoint> pareto;  ///< sorted by makespan
    OraclePoint best;                 ///< lexicographic minimum (C_max, C^m)
};

struct OracleSizeLimit : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kOracleMaxJobs = 8;
inline constexpr std::size_t kOracleMaxMachines = 3;

/// Exhaustive search over assignments, sequences and a PM on/off choice
/// before every job, using the zero-variance model. PM is never placed right
/// after a PM or CM. Throws OracleSizeLimit beyond 8 jobs or 3 machines.
[[nodiscard]] OracleResult enumerate(const ProblemInstance& inst);

/// Expected-mode outcome of one machine running a fixed sequence.
[[nodiscard]] OraclePoint evaluate_sequence(const ProblemInstance& inst, std::size_t machine_index,
                                            const std::vector<OracleStep>& seq);

}  // namespace qrp
