#include "qrp/planner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace qrp {

namespace {

constexpr std::uint64_t kReplicationTag = 11;

double frac_of(double key) { return key - std::floor(key); }

MachineId nearest_capable(MachineId m, const std::vector<MachineId>& capable) {
    MachineId best = capable.front();
    for (MachineId c : capable)
        if (std::abs(c - m) < std::abs(best - m) || (std::abs(c - m) == std::abs(best - m) && c < best)) best = c;
    return best;
}

double legal_key(double v, const std::vector<MachineId>& capable) {
    auto m = static_cast<MachineId>(std::floor(v));
    double f = v - std::floor(v);
    if (std::find(capable.begin(), capable.end(), m) == capable.end()) m = nearest_capable(m, capable);
    return static_cast<double>(m) + f;
}

double clamp_gene(double v, double lo, double hi) { return std::clamp(v, lo, hi); }

void reset_genes(Chromosome& c, const GeneRanges& r, double prob, RngStream& rng) {
    if (rng.uniform() < prob) c.zeta = rng.uniform(r.zeta_lo, r.zeta_hi);
    if (rng.uniform() < prob) c.psi = rng.uniform(r.psi_lo, r.psi_hi);
    if (rng.uniform() < prob) c.thr_r = rng.uniform(r.thr_lo, r.thr_hi);
    if (rng.uniform() < prob) c.n_u = static_cast<int>(rng.below(static_cast<std::uint64_t>(r.n_u_max) + 1));
}

std::size_t slot_of(const ProblemInstance& inst, JobId id) {
    for (std::size_t i = 0; i < inst.jobs.size(); ++i)
        if (inst.jobs[i].id == id) return i;
    throw std::out_of_range("job not in instance");
}

ScheduleTrace mean_trace(const Chromosome& ch, const ProblemInstance& inst, const PlannerConfig& cfg) {
    SimOptions o;
    o.pm_suspension = cfg.pm_suspension;
    return simulate(decode(ch, inst), inst, PolicyParams::from(ch), Sampler(RngStream(0), SamplingMode::expected), o);
}

// Swap-rule move or busiest-to-idlest reassignment.
Chromosome local_move(const Individual& ind, const ProblemInstance& inst, const PlannerConfig& cfg, RngStream& rng) {
    Chromosome child = ind.ch;
    ScheduleTrace t = mean_trace(ind.ch, inst, cfg);
    std::map<MachineId, std::vector<std::size_t>> per;
    for (std::size_t i = 0; i < t.jobs.size(); ++i) per[t.jobs[i].machine].push_back(i);
    std::vector<MachineId> busy;
    for (const auto& [m, v] : per)
        if (v.size() >= 2) busy.push_back(m);
    if (!busy.empty()) {
        const auto& v = per[busy[rng.below(busy.size())]];
        std::size_t j = rng.below(v.size() - 1);
        auto pair = adjacent_pair(t, inst, v[j], v[j + 1]);
        if (pair && prop1_holds(*pair)) {
            std::size_t a = slot_of(inst, t.jobs[v[j]].job);
            std::size_t b = slot_of(inst, t.jobs[v[j + 1]].job);
            double ka = child.keys[a];
            double kb = child.keys[b];
            child.keys[a] = std::floor(ka) + frac_of(kb);
            child.keys[b] = std::floor(kb) + frac_of(ka);
            return child;
        }
    }
    // Busiest machine by nominal load, then the least loaded capable machine.
    std::map<MachineId, double> load;
    for (const auto& m : inst.machines) load[m.id] = 0.0;
    for (std::size_t i = 0; i < inst.jobs.size(); ++i) {
        MachineId m = key_machine(child.keys[i]);
        load[m] += inst.jobs[i].nominal_times.at(m);
    }
    MachineId busiest = inst.machines.front().id;
    for (const auto& [m, l] : load)
        if (l > load[busiest]) busiest = m;
    std::vector<std::size_t> on;
    for (std::size_t i = 0; i < inst.jobs.size(); ++i)
        if (key_machine(child.keys[i]) == busiest) on.push_back(i);
    if (on.empty()) return child;
    std::size_t pick = on[rng.below(on.size())];
    MachineId idlest = -1;
    for (MachineId c : inst.capable_machines(inst.jobs[pick].job_type)) {
        if (c == busiest) continue;
        if (idlest < 0 || load[c] < load[idlest]) idlest = c;
    }
    if (idlest >= 0) child.keys[pick] = static_cast<double>(idlest) + frac_of(child.keys[pick]);
    return child;
}

}  // namespace

const Individual& Population::best_static() const {
    if (individuals.empty()) throw std::logic_error("empty population");
    std::size_t best = 0;
    for (std::size_t i = 1; i < individuals.size(); ++i)
        if (individuals[i].static_fitness > individuals[best].static_fitness) best = i;
    return individuals[best];
}

double control_param(int iter, int max_iter) {
    if (max_iter <= 0 || iter < 0 || iter > max_iter) throw std::invalid_argument("need 0 <= iter <= max_iter, max_iter > 0");
    return 2.0 * (1.0 - static_cast<double>(iter) / max_iter);
}

Chromosome random_chromosome(const ProblemInstance& inst, const std::vector<JobType>& idle_types,
                             const GeneRanges& ranges, RngStream& rng) {
    Chromosome ch;
    ch.idle_types = idle_types;
    const std::size_t n = inst.jobs.size() + idle_types.size();
    for (std::size_t i = 0; i < n; ++i) {
        auto capable = inst.capable_machines(slot_type(ch, inst, i));
        if (capable.empty()) throw IncapableMachine("slot type has no capable machine");
        MachineId m = capable[rng.below(capable.size())];
        ch.keys.push_back(static_cast<double>(m) + rng.uniform());
    }
    ch.zeta = rng.uniform(ranges.zeta_lo, ranges.zeta_hi);
    ch.psi = rng.uniform(ranges.psi_lo, ranges.psi_hi);
    ch.thr_r = rng.uniform(ranges.thr_lo, ranges.thr_hi);
    ch.n_u = static_cast<int>(rng.below(static_cast<std::uint64_t>(ranges.n_u_max) + 1));
    return ch;
}

Chromosome de_operator(const Chromosome& parent, const std::vector<Individual>& pop, const ProblemInstance& inst,
                       const PlannerConfig& cfg, RngStream& rng, std::optional<double> F) {
    if (pop.size() < 3) throw std::invalid_argument("DE needs a population of at least 3");
    std::size_t r1 = rng.below(pop.size());
    std::size_t r2 = rng.below(pop.size() - 1);
    if (r2 >= r1) ++r2;
    const Chromosome& a = pop[r1].ch;
    const Chromosome& b = pop[r2].ch;
    const double f = F ? *F : rng.uniform(0.3, 0.9);
    Chromosome child = parent;
    for (std::size_t i = 0; i < child.keys.size(); ++i) {
        double v = parent.keys[i] + f * (a.keys[i] - b.keys[i]);
        child.keys[i] = legal_key(v, inst.capable_machines(slot_type(child, inst, i)));
    }
    const auto& r = cfg.ranges;
    child.zeta = clamp_gene(parent.zeta + f * (a.zeta - b.zeta), r.zeta_lo, r.zeta_hi);
    child.psi = clamp_gene(parent.psi + f * (a.psi - b.psi), r.psi_lo, r.psi_hi);
    child.thr_r = clamp_gene(parent.thr_r + f * (a.thr_r - b.thr_r), r.thr_lo, r.thr_hi);
    child.n_u = std::clamp(static_cast<int>(std::lround(parent.n_u + f * (a.n_u - b.n_u))), 0, r.n_u_max);
    if (f > 0.0) reset_genes(child, r, cfg.gene_reset_prob, rng);
    return child;
}

double similarity(const Chromosome& a, const Chromosome& b) {
    if (a.keys.size() != b.keys.size() || a.keys.empty()) return 0.0;
    std::size_t same = 0;
    for (std::size_t i = 0; i < a.keys.size(); ++i)
        if (key_machine(a.keys[i]) == key_machine(b.keys[i])) ++same;
    return static_cast<double>(same) / static_cast<double>(a.keys.size());
}

Chromosome re_operator(const Individual& parent, const std::vector<Individual>& pop, const ProblemInstance& inst,
                       const PlannerConfig& cfg, RngStream& rng) {
    if (pop.size() < 2) throw std::invalid_argument("RE needs a population of at least 2");
    std::vector<std::pair<double, std::size_t>> sim;
    for (std::size_t j = 0; j < pop.size(); ++j)
        if (&pop[j] != &parent) sim.emplace_back(similarity(parent.ch, pop[j].ch), j);
    std::stable_sort(sim.begin(), sim.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
    std::vector<const Individual*> donors{&parent};
    for (std::size_t d = 0; d < sim.size() && static_cast<int>(d) < cfg.similar_donors; ++d)
        donors.push_back(&pop[sim[d].second]);

    std::vector<Individual> scored;
    for (const auto* d : donors) scored.push_back(*d);
    auto w = selection_weights(scored);
    std::vector<std::size_t> order(donors.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return w[x] > w[y]; });
    // Rank weights D, D-1, ..., 1 from best to worst.
    std::vector<double> rank_w(donors.size());
    for (std::size_t r = 0; r < order.size(); ++r) rank_w[order[r]] = static_cast<double>(donors.size() - r);
    const double total = std::accumulate(rank_w.begin(), rank_w.end(), 0.0);

    Chromosome child = parent.ch;
    for (std::size_t i = 0; i < child.keys.size(); ++i) {
        double u = rng.uniform() * total;
        std::size_t d = 0;
        while (d + 1 < donors.size() && u >= rank_w[d]) u -= rank_w[d++];
        child.keys[i] = donors[d]->ch.keys[i];
    }
    const Chromosome& top = donors[order.front()]->ch;
    child.zeta = top.zeta;
    child.psi = top.psi;
    child.thr_r = top.thr_r;
    child.n_u = top.n_u;
    rebalance(child, inst, rng);
    return child;
}

void rebalance(Chromosome& ch, const ProblemInstance& inst, RngStream& rng) {
    // Per type, level the job counts over the machines able to run it.
    for (JobType type : inst.job_types()) {
        const auto capable = inst.capable_machines(type);
        std::map<MachineId, std::vector<std::size_t>> on;
        for (MachineId m : capable) on[m];
        for (std::size_t i = 0; i < inst.jobs.size(); ++i)
            if (inst.jobs[i].job_type == type) on[key_machine(ch.keys[i])].push_back(i);
        for (;;) {
            auto lo = capable.front(), hi = capable.front();
            for (MachineId m : capable) {
                if (on[m].size() < on[lo].size()) lo = m;
                if (on[m].size() > on[hi].size()) hi = m;
            }
            if (on[hi].size() < on[lo].size() + 2) break;
            auto& from = on[hi];
            std::size_t k = rng.below(from.size());
            std::size_t i = from[k];
            from.erase(from.begin() + static_cast<std::ptrdiff_t>(k));
            ch.keys[i] = static_cast<double>(lo) + frac_of(ch.keys[i]);
            on[lo].push_back(i);
        }
    }
}

bool prop1_holds(const AdjacentPair& p) {
    if (!(p.first_nominal > p.second_nominal)) return false;
    if (!p.first_conforming && !p.second_conforming) return true;
    if (p.first_conforming && p.second_conforming && p.first_type == p.second_type)
        return p.second_wear * (p.a + p.gamma * p.eps) < p.first_slack;
    return false;
}

std::optional<AdjacentPair> adjacent_pair(const ScheduleTrace& t, const ProblemInstance& inst, std::size_t first,
                                          std::size_t second) {
    if (first >= t.jobs.size() || second >= t.jobs.size() || first == second) return std::nullopt;
    const auto& x = t.jobs[first];
    const auto& y = t.jobs[second];
    if (x.machine != y.machine || !(x.end <= y.start)) return std::nullopt;
    for (std::size_t i = 0; i < t.jobs.size(); ++i) {
        const auto& r = t.jobs[i];
        if (i == first || i == second || r.machine != x.machine) continue;
        if (r.start >= x.start && r.start < y.start) return std::nullopt;
    }
    for (const auto& r : t.idles)
        if (r.machine == x.machine && r.start >= x.end && r.start < y.start) return std::nullopt;
    for (const auto& m : t.maintenance)
        if (m.event.machine_id == x.machine && m.event.time >= x.end && m.event.time <= y.start) return std::nullopt;
    const auto& mp = inst.machine(x.machine);
    const auto& c = mp.coefficients(inst.globals.coefficient_set);
    const auto& spec = inst.quality.at(x.type);
    AdjacentPair p;
    p.first_nominal = inst.job(x.origin).nominal_times.at(x.machine);
    p.second_nominal = inst.job(y.origin).nominal_times.at(y.machine);
    p.first_type = x.type;
    p.second_type = y.type;
    p.first_conforming = x.conforming;
    p.second_conforming = y.conforming;
    p.second_wear = y.w_after - y.w_before;
    p.first_slack = spec.SL_plus + spec.xi - x.D;
    p.a = c.a;
    p.gamma = c.gamma;
    return p;
}

void label_static(Individual& ind, const ProblemInstance& inst, const PlannerConfig& cfg, const Sampler& sampler) {
    const SchedulePlan plan = decode(ind.ch, inst);
    const PolicyParams policy = PolicyParams::from(ind.ch);
    SimOptions o;
    o.pm_suspension = cfg.pm_suspension;
    const int reps = std::max(1, cfg.replications);
    double fit = 0.0, mk = 0.0, cost = 0.0;
    for (int r = 0; r < reps; ++r) {
        auto t = simulate(plan, inst, policy, sampler.substream(kReplicationTag, static_cast<std::uint64_t>(r)), o);
        fit += fitness_static(t);
        mk += t.objectives.makespan;
        cost += t.objectives.maintenance_cost;
    }
    ind.static_fitness = fit / reps;
    ind.static_objectives = {mk / reps, cost / reps};
    ind.label = ind.static_fitness;
    ind.kind = LabelKind::static_fit;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) fn(i);
        });
    for (auto& th : pool) th.join();
}

void label_all(std::vector<Individual>& inds, const ProblemInstance& inst, const PlannerConfig& cfg,
               const Sampler& sampler) {
    parallel_for(inds.size(), cfg.threads, [&](std::size_t i) { label_static(inds[i], inst, cfg, sampler); });
}

std::vector<JobType> idle_slot_types(const ProblemInstance& inst, const Sampler& sampler) {
    std::vector<JobType> out;
    for (const auto& [type, n] : idle_space_count(inst, sampler))
        for (int i = 0; i < n; ++i) out.push_back(type);
    return out;
}

Population initial_population(const ProblemInstance& inst, const PlannerConfig& cfg, RngStream& rng,
                              const Sampler& sampler) {
    if (cfg.pop_size < 1) throw std::invalid_argument("population size must be positive");
    auto idle = idle_slot_types(inst, sampler);
    Population pop;
    for (int i = 0; i < cfg.pop_size; ++i) {
        Individual ind;
        ind.ch = random_chromosome(inst, idle, cfg.ranges, rng);
        pop.individuals.push_back(std::move(ind));
    }
    label_all(pop.individuals, inst, cfg, sampler);
    return pop;
}

std::vector<double> selection_weights(const std::vector<Individual>& inds) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    double lo[2] = {inf, inf}, hi[2] = {-inf, -inf};
    for (const auto& x : inds) {
        int k = x.kind == LabelKind::online_fit;
        lo[k] = std::min(lo[k], x.label);
        hi[k] = std::max(hi[k], x.label);
    }
    std::vector<double> w;
    for (const auto& x : inds) {
        int k = x.kind == LabelKind::online_fit;
        double s = hi[k] > lo[k] ? (x.label - lo[k]) / (hi[k] - lo[k]) : 1.0;
        w.push_back(s + 0.01);
    }
    return w;
}

Population emode_step(const Population& pop, int iter, int max_iter, const ProblemInstance& inst,
                      const PlannerConfig& cfg, RngStream& rng, const Sampler& sampler) {
    const double nu = control_param(iter, max_iter);
    const auto& parents = pop.individuals;
    const RngStream gen = rng.substream(rng());
    std::vector<Individual> children(parents.size());
    parallel_for(parents.size(), cfg.threads, [&](std::size_t i) {
        RngStream r = gen.substream(i);
        Chromosome c;
        if (nu > 1.0) {
            if (parents.size() >= 2 && r.uniform() < cfg.re_prob)
                c = re_operator(parents[i], parents, inst, cfg, r);
            else if (parents.size() >= 3)
                c = de_operator(parents[i].ch, parents, inst, cfg, r);
            else
                c = local_move(parents[i], inst, cfg, r);
        } else {
            c = local_move(parents[i], inst, cfg, r);
        }
        children[i].ch = std::move(c);
        label_static(children[i], inst, cfg, sampler);
    });

    std::vector<Individual> pool = parents;
    for (auto& c : children) pool.push_back(std::move(c));
    std::vector<bool> taken(pool.size(), false);
    Population next;
    auto take = [&](std::size_t i) {
        taken[i] = true;
        next.individuals.push_back(pool[i]);
    };
    // Elites: best static fitness, and the best online-labelled individual.
    std::size_t best = 0;
    for (std::size_t i = 1; i < pool.size(); ++i)
        if (pool[i].static_fitness > pool[best].static_fitness) best = i;
    take(best);
    std::optional<std::size_t> best_online;
    for (std::size_t i = 0; i < pool.size(); ++i)
        if (pool[i].kind == LabelKind::online_fit && (!best_online || pool[i].label > pool[*best_online].label))
            best_online = i;
    if (best_online && !taken[*best_online] && next.individuals.size() < parents.size()) take(*best_online);

    // Static non-dominated front, one per objective vector, spread evenly
    // along makespan when it outgrows its share.
    std::vector<std::size_t> front;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        bool keep = true;
        for (std::size_t j = 0; j < pool.size() && keep; ++j) {
            const auto& a = pool[j].static_objectives;
            const auto& b = pool[i].static_objectives;
            if (dominates(a, b) || (j < i && a == b)) keep = false;
        }
        if (keep) front.push_back(i);
    }
    std::sort(front.begin(), front.end(), [&](std::size_t a, std::size_t b) {
        return pool[a].static_objectives.makespan < pool[b].static_objectives.makespan;
    });
    const auto room = static_cast<std::size_t>(cfg.front_share * static_cast<double>(parents.size()));
    const std::size_t n_front = std::min(front.size(), room);
    for (std::size_t k = 0; k < n_front; ++k) {
        std::size_t at = n_front == 1 ? 0 : k * (front.size() - 1) / (n_front - 1);
        if (!taken[front[at]] && next.individuals.size() < parents.size()) take(front[at]);
    }

    auto w = selection_weights(pool);
    while (next.individuals.size() < parents.size()) {
        double total = 0.0;
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (!taken[i]) total += w[i];
        double u = rng.uniform() * total;
        std::size_t pick = pool.size();
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (taken[i]) continue;
            pick = i;
            if (u < w[i]) break;
            u -= w[i];
        }
        take(pick);
    }
    return next;
}

Population plan(const ProblemInstance& inst, int budget, const PlannerConfig& cfg, RngStream rng,
                const Sampler& sampler) {
    if (budget < 1) throw std::invalid_argument("planning budget must be at least 1");
    Population pop = initial_population(inst, cfg, rng, sampler);
    for (int it = 0; it < budget; ++it) pop = emode_step(pop, it, budget, inst, cfg, rng, sampler);
    return pop;
}

}  // namespace qrp
