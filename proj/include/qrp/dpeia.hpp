#pragma once

#include "qrp/planner.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace qrp {

struct InvalidBudget : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Planner generations and online rescheduling iterations per round.
struct BudgetSchedule {
    std::vector<int> planner;
    std::vector<int> online;

    [[nodiscard]] int rounds() const { return static_cast<int>(planner.size()); }
    [[nodiscard]] int total() const;
};

/// Splits max_iter into n_rounds rounds of equal weight. Round r (1-based)
/// gives the online module the share min(1, varpi Phi((r / n_rounds - mu_c) / sigma_c)).
/// Largest-remainder rounding keeps the total exact; online counts are
/// nondecreasing across rounds.
[[nodiscard]] BudgetSchedule allocate_budget(int max_iter, int n_rounds, double varpi, double mu_c = 0.0,
                                             double sigma_c = 1.13);

enum class SearchMode { dpeia, random_search };

struct DpeiaConfig {
    PlannerConfig planner;
    int max_iter = 100;
    int n_rounds = 4;
    int elites = 0;  ///< 0 means ceil(pop_size / 5)
    double varpi = 0.5;
    double mu_c = 0.0;
    double sigma_c = 1.13;
    int online_replications = 1;
    /// Feed f^eva back as the elites' labels. Off for the plan-only ablation.
    bool relabel = true;
    SearchMode mode = SearchMode::dpeia;
    SamplingMode sampling = SamplingMode::stochastic;

    [[nodiscard]] int elite_count() const;
};

struct ArchiveEntry {
    ObjectivePair objectives;  ///< mean over the online replications
    Chromosome ch;
    int round = 0;
    double online_fitness = 0.0;
};

struct RoundRecord {
    int planner_iters = 0;
    int online_iters = 0;
    /// Indices into the population after the round, with the label each elite received.
    std::vector<std::size_t> elites;
    std::vector<double> elite_labels;
    std::vector<LabelKind> kinds;  ///< label kind of every individual after the round
};

struct DpeiaResult {
    std::vector<ArchiveEntry> archive;  ///< non-dominated, sorted by makespan
    BudgetSchedule budget;
    Population population;
    std::vector<RoundRecord> rounds;
};

/// Keeps the entries no other entry weakly dominates with a different
/// objective vector; equal vectors are kept once (the first seen).
[[nodiscard]] std::vector<ArchiveEntry> pareto_archive(std::vector<ArchiveEntry> entries);

/// Online evaluation of one plan: mean f^eva and mean objectives over the
/// replications, with rescheduling budget `resched_iters` (0: right-shift).
struct OnlineEvaluation {
    double fitness = 0.0;
    ObjectivePair objectives;
};
[[nodiscard]] OnlineEvaluation evaluate_online(const Chromosome& ch, const ProblemInstance& inst,
                                               const DpeiaConfig& cfg, int resched_iters, const Sampler& sampler,
                                               RngStream rng);

/// Elite choice: individuals on the first non-dominated front of static
/// objectives come first, each group ordered by f^s; individuals whose static
/// objectives repeat an earlier pick are skipped while others remain.
[[nodiscard]] std::vector<std::size_t> select_elites(const Population& pop, int count);

/// Planning rounds interleaved with online relabelling of elites; every
/// online evaluation feeds the archive. All randomness derives from `seed`.
[[nodiscard]] DpeiaResult dpeia(const ProblemInstance& inst, const DpeiaConfig& cfg, std::uint64_t seed);

}  // namespace qrp
