#include "qrp/dpeia.hpp"
#include "qrp/generator.hpp"
#include "qrp/oracle.hpp"
#include "support/toys.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace qrp;

namespace {

DpeiaConfig small_config() {
    DpeiaConfig cfg;
    cfg.planner.pop_size = 10;
    cfg.planner.replications = 2;
    cfg.max_iter = 20;
    cfg.n_rounds = 4;
    return cfg;
}

bool beats(const ObjectivePair& a, const ObjectivePair& b) {
    return a.makespan <= b.makespan && a.maintenance_cost <= b.maintenance_cost &&
           (a.makespan < b.makespan || a.maintenance_cost < b.maintenance_cost);
}

}  // namespace

TEST(Budget, SingleRoundTakesEverything) {
    auto b = allocate_budget(37, 1, 0.5);
    ASSERT_EQ(b.rounds(), 1);
    EXPECT_EQ(b.planner[0] + b.online[0], 37);
}

TEST(Budget, OnlineShareGrows) {
    auto b = allocate_budget(100, 4, 0.5);
    ASSERT_EQ(b.rounds(), 4);
    EXPECT_EQ(b.total(), 100);
    for (int r = 1; r < 4; ++r) EXPECT_LT(b.online[r - 1], b.online[r]);
    // Independent shares: 0.5 Phi(r / 4 / 1.13) of 25 per round.
    for (int r = 1; r <= 4; ++r) {
        double share = 0.5 * fixtures::normal_cdf(r / 4.0 / 1.13);
        EXPECT_NEAR(b.online[r - 1], 25.0 * share, 1.0);
    }
}

TEST(Budget, Conservation) {
    RngStream rng(5);
    for (int i = 0; i < 1000; ++i) {
        int rounds = 1 + static_cast<int>(rng.below(12));
        int max_iter = rounds + static_cast<int>(rng.below(500));
        double varpi = rng.uniform(0.05, 2.0);
        auto b = allocate_budget(max_iter, rounds, varpi);
        ASSERT_EQ(b.total(), max_iter);
        for (int r = 0; r < rounds; ++r) {
            ASSERT_GE(b.planner[r], 0);
            ASSERT_GE(b.online[r], 0);
            if (r > 0) ASSERT_LE(b.online[r - 1], b.online[r]);
        }
    }
}

TEST(Budget, Errors) {
    EXPECT_THROW((void)allocate_budget(3, 4, 0.5), InvalidBudget);
    EXPECT_THROW((void)allocate_budget(10, 0, 0.5), InvalidBudget);
}

TEST(Archive, KeepsOnlyNonDominated) {
    RngStream rng(8);
    std::vector<ArchiveEntry> in;
    for (int i = 0; i < 300; ++i) {
        ArchiveEntry e;
        e.objectives = {std::round(rng.uniform(0, 20)), std::round(rng.uniform(0, 20))};
        in.push_back(e);
    }
    auto out = pareto_archive(in);
    ASSERT_FALSE(out.empty());
    for (const auto& a : out)
        for (const auto& b : out) {
            EXPECT_FALSE(beats(a.objectives, b.objectives));
            if (&a != &b) EXPECT_FALSE(a.objectives == b.objectives);
        }
    // Every input point is covered by some member.
    for (const auto& e : in) {
        bool covered = false;
        for (const auto& a : out) covered |= a.objectives == e.objectives || beats(a.objectives, e.objectives);
        EXPECT_TRUE(covered);
    }
    for (std::size_t i = 1; i < out.size(); ++i) EXPECT_LT(out[i - 1].objectives.makespan, out[i].objectives.makespan);
}

TEST(Dpeia, LabelProvenance) {
    auto inst = generate_instance({20, 0.06, 0.5}, RngStream(3));
    auto cfg = small_config();
    auto res = dpeia(inst, cfg, 11);
    ASSERT_EQ(res.rounds.size(), 4u);
    const auto& last = res.rounds.back();
    ASSERT_EQ(last.elites.size(), static_cast<std::size_t>(cfg.elite_count()));
    EXPECT_EQ(cfg.elite_count(), 2);
    for (std::size_t i = 0; i < res.population.individuals.size(); ++i) {
        const auto& ind = res.population.individuals[i];
        auto it = std::find(last.elites.begin(), last.elites.end(), i);
        if (it == last.elites.end()) {
            EXPECT_EQ(ind.kind, LabelKind::static_fit);
            EXPECT_DOUBLE_EQ(ind.label, ind.static_fitness);
        } else {
            EXPECT_EQ(ind.kind, LabelKind::online_fit);
            EXPECT_DOUBLE_EQ(ind.label, last.elite_labels[static_cast<std::size_t>(it - last.elites.begin())]);
        }
    }
    for (const auto& rec : res.rounds) {
        int online = 0;
        for (auto k : rec.kinds) online += k == LabelKind::online_fit;
        EXPECT_EQ(online, static_cast<int>(rec.elites.size()));
    }
}

TEST(Dpeia, PlanOnlyKeepsStaticLabels) {
    auto inst = generate_instance({20, 0.06, 0.5}, RngStream(3));
    auto cfg = small_config();
    cfg.n_rounds = 1;
    cfg.relabel = false;
    auto res = dpeia(inst, cfg, 4);
    for (const auto& ind : res.population.individuals) EXPECT_EQ(ind.kind, LabelKind::static_fit);
    EXPECT_FALSE(res.archive.empty());
}

TEST(Dpeia, EveryoneElitesIsTwoStage) {
    auto inst = generate_instance({12, 0.06, 0.5}, RngStream(6));
    auto cfg = small_config();
    cfg.n_rounds = 1;
    cfg.elites = cfg.planner.pop_size;
    auto res = dpeia(inst, cfg, 2);
    ASSERT_EQ(res.rounds.size(), 1u);
    EXPECT_EQ(res.rounds[0].elites.size(), static_cast<std::size_t>(cfg.planner.pop_size));
    for (const auto& ind : res.population.individuals) EXPECT_EQ(ind.kind, LabelKind::online_fit);
}

TEST(Dpeia, ArchiveIsNonDominatedAndDeterministic) {
    auto inst = generate_instance({20, 0.06, 0.5}, RngStream(9));
    auto cfg = small_config();
    auto a = dpeia(inst, cfg, 21);
    auto b = dpeia(inst, cfg, 21);
    ASSERT_EQ(a.archive.size(), b.archive.size());
    for (std::size_t i = 0; i < a.archive.size(); ++i) {
        EXPECT_EQ(a.archive[i].objectives, b.archive[i].objectives);
        EXPECT_EQ(a.archive[i].ch, b.archive[i].ch);
        for (std::size_t j = 0; j < a.archive.size(); ++j)
            EXPECT_FALSE(beats(a.archive[i].objectives, a.archive[j].objectives));
    }
}

TEST(Dpeia, RandomSearchRuns) {
    auto inst = generate_instance({20, 0.06, 0.5}, RngStream(9));
    auto cfg = small_config();
    cfg.mode = SearchMode::random_search;
    auto res = dpeia(inst, cfg, 3);
    EXPECT_FALSE(res.archive.empty());
    EXPECT_EQ(res.population.individuals.size(), static_cast<std::size_t>(cfg.planner.pop_size));
}

TEST(Dpeia, ToyArchiveHoldsOracleOptimum) {
    auto inst = fixtures::toy_instance({{2, 3}, {1, 2}, {3, 1}, {2, 2}}, 2);
    auto oracle = enumerate(inst);
    DpeiaConfig cfg;
    cfg.planner.pop_size = 20;
    cfg.planner.replications = 1;
    cfg.planner.pm_suspension = false;
    cfg.sampling = SamplingMode::expected;
    cfg.max_iter = 40;
    auto res = dpeia(inst, cfg, 1);
    bool found = false;
    for (const auto& e : res.archive)
        found |= std::abs(e.objectives.makespan - oracle.best.objectives.makespan) < 1e-9 &&
                 std::abs(e.objectives.maintenance_cost - oracle.best.objectives.maintenance_cost) < 1e-9;
    EXPECT_TRUE(found);
    for (const auto& e : res.archive)
        for (const auto& o : oracle.pareto) EXPECT_FALSE(beats(e.objectives, o.objectives));
}

TEST(Dpeia, NoPmWhileSuspended) {
    auto inst = generate_instance({60, 0.06, 0.5}, RngStream(17));
    auto cfg = small_config();
    auto res = dpeia(inst, cfg, 5);
    int suspensions = 0;
    for (std::size_t e = 0; e < res.archive.size(); ++e) {
        SimOptions o;
        o.mode = SimMode::ONLINE;
        o.pm_suspension = true;
        auto t = simulate(decode(res.archive[e].ch, inst), inst, PolicyParams::from(res.archive[e].ch),
                          Sampler(RngStream(e)), o);
        for (const auto& s : t.suspensions) {
            ++suspensions;
            double next_cm = INFINITY;
            for (const auto& m : t.maintenance)
                if (m.event.machine_id == s.machine && m.event.kind == MaintenanceKind::CM && m.event.time >= s.time)
                    next_cm = std::min(next_cm, m.event.time);
            for (const auto& m : t.maintenance)
                if (m.event.machine_id == s.machine && m.event.kind == MaintenanceKind::PM)
                    EXPECT_FALSE(m.event.time >= s.time && m.event.time < next_cm);
        }
    }
    EXPECT_GT(suspensions, 0);
    RecordProperty("suspensions", suspensions);
}
