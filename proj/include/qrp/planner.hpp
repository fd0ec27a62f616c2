#pragma once

#include "qrp/rng.hpp"
#include "qrp/simulator.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace qrp {

/// Gene ranges for the policy part of a chromosome.
struct GeneRanges {
    double zeta_lo = 0.05, zeta_hi = 0.99;
    double psi_lo = 0.0, psi_hi = 1.0;
    double thr_lo = 0.05, thr_hi = 1.0;
    int n_u_max = 4;
};

struct PlannerConfig {
    int pop_size = 30;
    int replications = 5;  ///< static runs averaged per label
    double re_prob = 0.7;
    double gene_reset_prob = 0.1;  ///< per policy gene, DE children only
    int similar_donors = 3;        ///< neighbours consulted by the RE operator
    bool pm_suspension = true;
    /// Share of survivor places reserved for the static non-dominated front.
    double front_share = 0.5;
    int threads = 1;
    GeneRanges ranges;
};

enum class LabelKind { static_fit, online_fit };

struct Individual {
    Chromosome ch;
    double static_fitness = 0.0;  ///< mean f^s over the label replications
    ObjectivePair static_objectives;
    double label = 0.0;
    LabelKind kind = LabelKind::static_fit;
};

struct Population {
    std::vector<Individual> individuals;

    /// Highest static fitness; ties keep the earlier individual.
    [[nodiscard]] const Individual& best_static() const;
};

/// 2 (1 - iter / max_iter)
[[nodiscard]] double control_param(int iter, int max_iter);

/// Random keys on capable machines, policy genes uniform in their ranges.
[[nodiscard]] Chromosome random_chromosome(const ProblemInstance& inst, const std::vector<JobType>& idle_types,
                                           const GeneRanges& ranges, RngStream& rng);

/// Differential mutation base + F (r1 - r2) over whole keys, with base the
/// parent and r1, r2 distinct random members. Machine parts are moved to
/// the nearest capable machine and fractions wrapped into [0, 1). F is drawn
/// from [0.3, 0.9] unless given.
[[nodiscard]] Chromosome de_operator(const Chromosome& parent, const std::vector<Individual>& pop,
                                     const ProblemInstance& inst, const PlannerConfig& cfg, RngStream& rng,
                                     std::optional<double> F = std::nullopt);

/// Share of slots two chromosomes assign to the same machine.
[[nodiscard]] double similarity(const Chromosome& a, const Chromosome& b);

/// Keys drawn per slot from the parent and its most similar neighbours, each
/// donor weighted by its label rank; then machine job counts are balanced.
[[nodiscard]] Chromosome re_operator(const Individual& parent, const std::vector<Individual>& pop,
                                     const ProblemInstance& inst, const PlannerConfig& cfg, RngStream& rng);

/// Per job type, moves jobs from the fullest to the emptiest capable machine
/// until the type's counts differ by at most one across its machines.
void rebalance(Chromosome& ch, const ProblemInstance& inst, RngStream& rng);

/// Two consecutive jobs of one machine within a maintenance interval, as
/// realized under the mean model. The first job is i', the second i.
struct AdjacentPair {
    double first_nominal = 0.0;
    double second_nominal = 0.0;
    JobType first_type = 1;
    JobType second_type = 1;
    bool first_conforming = true;
    bool second_conforming = true;
    /// Degradation the second job adds; the first job would see this much more after a swap.
    double second_wear = 0.0;
    /// Upper quality margin of the first job: SL + xi - D.
    double first_slack = 0.0;
    double a = 0.0;
    double gamma = 0.0;
    double eps = 0.0;
};

/// Swap rule for adjacent jobs: both non-conforming with the longer job
/// first, or both conforming and of one type with the longer job first and
/// second_wear (a + gamma eps) < first_slack.
[[nodiscard]] bool prop1_holds(const AdjacentPair& p);

/// Builds the pair for trace jobs `first` and `second`. Returns nothing when
/// they are not consecutive on one machine or a maintenance event lies between them.
[[nodiscard]] std::optional<AdjacentPair> adjacent_pair(const ScheduleTrace& t, const ProblemInstance& inst,
                                                        std::size_t first, std::size_t second);

/// Static label: mean f^s and mean objectives over cfg.replications runs.
/// Replication r always draws from sampler.substream(r), so equal chromosomes
/// get equal labels.
void label_static(Individual& ind, const ProblemInstance& inst, const PlannerConfig& cfg, const Sampler& sampler);

/// Labels every individual, in parallel when cfg.threads > 1.
void label_all(std::vector<Individual>& inds, const ProblemInstance& inst, const PlannerConfig& cfg,
               const Sampler& sampler);

/// Idle slot types from the pilot count.
[[nodiscard]] std::vector<JobType> idle_slot_types(const ProblemInstance& inst, const Sampler& sampler);

[[nodiscard]] Population initial_population(const ProblemInstance& inst, const PlannerConfig& cfg, RngStream& rng,
                                            const Sampler& sampler);

/// Roulette weights: labels are scaled to [0, 1] within each label kind.
[[nodiscard]] std::vector<double> selection_weights(const std::vector<Individual>& inds);

/// One generation: RE/DE when the control parameter exceeds 1, otherwise a
/// swap-rule move or a busiest-to-idlest reassignment; then selection over
/// parents and children that keeps the best static individual, the best
/// online-labelled one and part of the static front, and fills the rest by roulette.
[[nodiscard]] Population emode_step(const Population& pop, int iter, int max_iter, const ProblemInstance& inst,
                                    const PlannerConfig& cfg, RngStream& rng, const Sampler& sampler);

/// Initial population followed by `budget` generations.
[[nodiscard]] Population plan(const ProblemInstance& inst, int budget, const PlannerConfig& cfg, RngStream rng,
                              const Sampler& sampler);

/// Runs fn(i) for i in [0, n) over up to `threads` workers.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace qrp
