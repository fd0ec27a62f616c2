#include "qrp/dpeia.hpp"

#include "qrp/online.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qrp {

namespace {

constexpr std::uint64_t kLabelStream = 1;
constexpr std::uint64_t kOnlineStream = 2;
constexpr std::uint64_t kPlannerStream = 3;
constexpr std::uint64_t kReschedStream = 4;
constexpr std::uint64_t kOnlineReplication = 12;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

bool weakly_better(const ObjectivePair& a, const ObjectivePair& b) {
    return a.makespan <= b.makespan && a.maintenance_cost <= b.maintenance_cost && !(a == b);
}

}  // namespace

int BudgetSchedule::total() const {
    return std::accumulate(planner.begin(), planner.end(), 0) + std::accumulate(online.begin(), online.end(), 0);
}

BudgetSchedule allocate_budget(int max_iter, int n_rounds, double varpi, double mu_c, double sigma_c) {
    if (n_rounds < 1 || max_iter < n_rounds) throw InvalidBudget("need max_iter >= n_rounds >= 1");
    if (!(varpi > 0.0) || !(sigma_c > 0.0)) throw InvalidBudget("varpi and sigma_c must be positive");
    const double per_round = static_cast<double>(max_iter) / n_rounds;
    // Quotas: planner part of round r at 2r, online part at 2r + 1.
    std::vector<double> quota;
    for (int r = 1; r <= n_rounds; ++r) {
        double share = std::min(1.0, varpi * normal_cdf((static_cast<double>(r) / n_rounds - mu_c) / sigma_c));
        quota.push_back(per_round * (1.0 - share));
        quota.push_back(per_round * share);
    }
    std::vector<int> seats;
    int used = 0;
    for (double q : quota) {
        seats.push_back(static_cast<int>(std::floor(q)));
        used += seats.back();
    }
    std::vector<std::size_t> order(quota.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return quota[a] - std::floor(quota[a]) > quota[b] - std::floor(quota[b]);
    });
    for (std::size_t k = 0; used < max_iter; ++k, ++used) ++seats[order[k % order.size()]];
    BudgetSchedule s;
    for (int r = 0; r < n_rounds; ++r) {
        s.planner.push_back(seats[2 * static_cast<std::size_t>(r)]);
        s.online.push_back(seats[2 * static_cast<std::size_t>(r) + 1]);
    }
    // Rounding can invert neighbours with equal floors; the online share grows.
    std::sort(s.online.begin(), s.online.end());
    return s;
}

int DpeiaConfig::elite_count() const {
    if (elites > 0) return std::min(elites, planner.pop_size);
    return (planner.pop_size + 4) / 5;
}

std::vector<ArchiveEntry> pareto_archive(std::vector<ArchiveEntry> entries) {
    std::vector<ArchiveEntry> out;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        bool keep = true;
        for (std::size_t j = 0; j < entries.size() && keep; ++j) {
            if (weakly_better(entries[j].objectives, entries[i].objectives)) keep = false;
            if (j < i && entries[j].objectives == entries[i].objectives) keep = false;
        }
        if (keep) out.push_back(entries[i]);
    }
    std::stable_sort(out.begin(), out.end(), [](const ArchiveEntry& a, const ArchiveEntry& b) {
        return a.objectives.makespan < b.objectives.makespan;
    });
    return out;
}

OnlineEvaluation evaluate_online(const Chromosome& ch, const ProblemInstance& inst, const DpeiaConfig& cfg,
                                 int resched_iters, const Sampler& sampler, RngStream rng) {
    const SchedulePlan plan = decode(ch, inst);
    const PolicyParams policy = PolicyParams::from(ch);
    const int reps = std::max(1, cfg.online_replications);
    OnlineEvaluation ev;
    for (int r = 0; r < reps; ++r) {
        SimOptions o;
        o.mode = SimMode::ONLINE;
        o.pm_suspension = cfg.planner.pm_suspension;
        if (resched_iters > 0) o.rescheduler = make_rescheduler(inst, resched_iters, rng.substream(static_cast<std::uint64_t>(r)));
        auto t = simulate(plan, inst, policy, sampler.substream(kOnlineReplication, static_cast<std::uint64_t>(r)), o);
        ev.fitness += fitness_eval(t, plan);
        ev.objectives.makespan += t.objectives.makespan;
        ev.objectives.maintenance_cost += t.objectives.maintenance_cost;
    }
    ev.fitness /= reps;
    ev.objectives.makespan /= reps;
    ev.objectives.maintenance_cost /= reps;
    return ev;
}

std::vector<std::size_t> select_elites(const Population& pop, int count) {
    const auto& inds = pop.individuals;
    const std::size_t n = inds.size();
    std::vector<bool> front(n, true);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n && front[i]; ++j)
            if (weakly_better(inds[j].static_objectives, inds[i].static_objectives)) front[i] = false;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (front[a] != front[b]) return static_cast<bool>(front[a]);
        return inds[a].static_fitness > inds[b].static_fitness;
    });
    std::vector<std::size_t> picked;
    std::vector<bool> used(n, false);
    auto repeats = [&](std::size_t i) {
        return std::any_of(picked.begin(), picked.end(),
                           [&](std::size_t p) { return inds[p].static_objectives == inds[i].static_objectives; });
    };
    const auto want = static_cast<std::size_t>(std::max(0, count));
    auto pass = [&](auto&& ok) {
        for (std::size_t i : order)
            if (picked.size() < want && !used[i] && ok(i)) {
                picked.push_back(i);
                used[i] = true;
            }
    };
    pass([&](std::size_t i) { return !repeats(i); });
    pass([](std::size_t) { return true; });
    return picked;
}

DpeiaResult dpeia(const ProblemInstance& inst, const DpeiaConfig& cfg, std::uint64_t seed) {
    const RngStream root(seed);
    const Sampler label_sampler(root.substream(kLabelStream), cfg.sampling);
    const Sampler online_sampler(root.substream(kOnlineStream), cfg.sampling);
    RngStream rng = root.substream(kPlannerStream);
    const PlannerConfig& pc = cfg.planner;

    DpeiaResult res;
    res.budget = allocate_budget(cfg.max_iter, cfg.n_rounds, cfg.varpi, cfg.mu_c, cfg.sigma_c);
    const int planner_total = std::accumulate(res.budget.planner.begin(), res.budget.planner.end(), 0);

    Population pop = initial_population(inst, pc, rng, label_sampler);
    const auto idle = pop.individuals.front().ch.idle_types;
    std::vector<ArchiveEntry> seen;
    int iter = 0;
    for (int r = 0; r < res.budget.rounds(); ++r) {
        RoundRecord rec;
        rec.planner_iters = res.budget.planner[static_cast<std::size_t>(r)];
        rec.online_iters = res.budget.online[static_cast<std::size_t>(r)];
        for (int g = 0; g < rec.planner_iters; ++g, ++iter) {
            if (cfg.mode == SearchMode::dpeia) {
                pop = emode_step(pop, iter, std::max(planner_total, 1), inst, pc, rng, label_sampler);
                continue;
            }
            // Random search: as many fresh static evaluations as one generation.
            std::vector<Individual> fresh(pop.individuals.size());
            for (auto& f : fresh) f.ch = random_chromosome(inst, idle, pc.ranges, rng);
            label_all(fresh, inst, pc, label_sampler);
            for (auto& f : fresh) pop.individuals.push_back(std::move(f));
            std::stable_sort(pop.individuals.begin(), pop.individuals.end(),
                             [](const Individual& a, const Individual& b) { return a.static_fitness > b.static_fitness; });
            pop.individuals.resize(static_cast<std::size_t>(pc.pop_size));
        }

        // Non-elites carry static labels; elites are relabelled below.
        for (auto& ind : pop.individuals) {
            ind.label = ind.static_fitness;
            ind.kind = LabelKind::static_fit;
        }
        rec.elites = select_elites(pop, cfg.elite_count());
        std::vector<OnlineEvaluation> evals(rec.elites.size());
        const RngStream round_rng = root.substream(kReschedStream, static_cast<std::uint64_t>(r));
        parallel_for(rec.elites.size(), pc.threads, [&](std::size_t e) {
            evals[e] = evaluate_online(pop.individuals[rec.elites[e]].ch, inst, cfg, rec.online_iters, online_sampler,
                                       round_rng.substream(e));
        });
        for (std::size_t e = 0; e < rec.elites.size(); ++e) {
            auto& ind = pop.individuals[rec.elites[e]];
            if (cfg.relabel) {
                ind.label = evals[e].fitness;
                ind.kind = LabelKind::online_fit;
            }
            rec.elite_labels.push_back(evals[e].fitness);
            seen.push_back({evals[e].objectives, ind.ch, r, evals[e].fitness});
        }
        for (const auto& ind : pop.individuals) rec.kinds.push_back(ind.kind);
        res.rounds.push_back(std::move(rec));
        seen = pareto_archive(std::move(seen));
    }
    res.archive = std::move(seen);
    res.population = std::move(pop);
    return res;
}

}  // namespace qrp
