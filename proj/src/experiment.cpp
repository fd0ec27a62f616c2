#include "qrp/experiment.hpp"

#include "qrp/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <limits>

namespace qrp {

namespace {

using json = nlohmann::ordered_json;

constexpr Point2 kHvRef{1.1, 1.1};

// A flat objective would make normalization divide by zero; give it unit width.
Bounds2 safe_bounds(const std::vector<std::vector<Point2>>& sets) {
    Bounds2 b = bounds_of(sets);
    if (!(b.max.first > b.min.first)) b.max.first = b.min.first + 1.0;
    if (!(b.max.second > b.min.second)) b.max.second = b.min.second + 1.0;
    return b;
}

std::string rounds_to_text(const DpeiaResult& r) {
    json rounds = json::array();
    for (const auto& rec : r.rounds) {
        json kinds = json::array();
        for (auto k : rec.kinds) kinds.push_back(k == LabelKind::online_fit ? "online" : "static");
        rounds.push_back({{"planner_iters", rec.planner_iters},
                          {"online_iters", rec.online_iters},
                          {"elites", rec.elites},
                          {"elite_labels", rec.elite_labels},
                          {"label_kinds", kinds}});
    }
    return std::string("qrp-rounds/1\n") + json{{"rounds", rounds}}.dump(2) + "\n";
}

}  // namespace

std::vector<Point2> archive_points(const std::vector<ArchiveEntry>& archive) {
    std::vector<Point2> out;
    for (const auto& e : archive) out.emplace_back(e.objectives.makespan, e.objectives.maintenance_cost);
    return out;
}

std::vector<double> paired_hypervolumes(const std::vector<std::vector<Point2>>& archives) {
    std::vector<std::vector<Point2>> nonempty;
    for (const auto& a : archives)
        if (!a.empty()) nonempty.push_back(a);
    std::vector<double> hv(archives.size(), 0.0);
    if (nonempty.empty()) return hv;
    const Bounds2 b = safe_bounds(nonempty);
    for (std::size_t i = 0; i < archives.size(); ++i)
        if (!archives[i].empty()) hv[i] = hypervolume(normalize(archives[i], b), kHvRef);
    return hv;
}

ExperimentReport summarize(const std::vector<std::uint64_t>& seeds, const std::vector<std::vector<Point2>>& archives,
                           std::vector<Point2> reference) {
    ExperimentReport rep;
    std::vector<Point2> pooled;
    for (const auto& a : archives) pooled.insert(pooled.end(), a.begin(), a.end());
    if (reference.empty()) reference = pareto_filter(pooled);
    rep.reference = reference;
    std::vector<std::vector<Point2>> all;
    for (const auto& a : archives)
        if (!a.empty()) all.push_back(a);
    if (!reference.empty()) all.push_back(reference);
    if (all.empty()) return rep;
    rep.bounds = safe_bounds(all);
    const auto ref_n = normalize(reference, rep.bounds);
    double best_ms = std::numeric_limits<double>::infinity();
    double best_c = std::numeric_limits<double>::infinity();
    for (const auto& p : pooled) {
        best_ms = std::min(best_ms, p.first);
        best_c = std::min(best_c, p.second);
    }
    for (std::size_t s = 0; s < archives.size(); ++s) {
        SeedMetrics m;
        m.seed = seeds[s];
        m.archive_size = archives[s].size();
        if (!archives[s].empty()) {
            auto pts = normalize(archives[s], rep.bounds);
            m.hv = hypervolume(pts, kHvRef);
            m.igd = igd(pts, ref_n);
            double ms = std::numeric_limits<double>::infinity(), c = ms;
            for (const auto& p : archives[s]) {
                ms = std::min(ms, p.first);
                c = std::min(c, p.second);
            }
            m.rpd_makespan = best_ms > 0 ? rpd(ms, best_ms) : 0.0;
            m.rpd_cost = best_c > 0 ? rpd(c, best_c) : 0.0;
        }
        rep.mean_hv += m.hv / static_cast<double>(archives.size());
        rep.mean_igd += m.igd / static_cast<double>(archives.size());
        rep.per_seed.push_back(m);
    }
    return rep;
}

std::string report_to_text(const ExperimentReport& r) {
    json seeds = json::array();
    for (const auto& m : r.per_seed)
        seeds.push_back({{"seed", m.seed},
                         {"archive_size", m.archive_size},
                         {"hv", m.hv},
                         {"igd", m.igd},
                         {"rpd_makespan", m.rpd_makespan},
                         {"rpd_cost", m.rpd_cost}});
    json ref = json::array();
    for (const auto& p : r.reference) ref.push_back({p.first, p.second});
    json body = {{"code_version", kCodeVersion},
                 {"hv_reference", {kHvRef.first, kHvRef.second}},
                 {"bounds",
                  {{"min", {r.bounds.min.first, r.bounds.min.second}},
                   {"max", {r.bounds.max.first, r.bounds.max.second}}}},
                 {"reference_front", ref},
                 {"mean_hv", r.mean_hv},
                 {"mean_igd", r.mean_igd},
                 {"seeds", seeds}};
    return std::string(kReportSchema) + "\n" + body.dump(2) + "\n";
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    if (cfg.seeds.empty()) throw std::invalid_argument("experiment needs at least one seed");
    ProblemInstance inst;
    std::string source;
    if (cfg.instance_path) {
        inst = instance_from_text(read_file(*cfg.instance_path));
        source = cfg.instance_path->generic_string();
    } else {
        inst = generate_instance(cfg.generator, RngStream(cfg.instance_seed));
        source = "generated n_jobs=" + std::to_string(cfg.generator.n_jobs) +
                 " sigma_q=" + nlohmann::json(cfg.generator.sigma_q).dump() +
                 " type1_share=" + nlohmann::json(cfg.generator.type1_share).dump() +
                 " seed=" + std::to_string(cfg.instance_seed);
    }
    if (auto bad = validate_instance(inst); !bad.empty()) throw std::invalid_argument("invalid instance: " + bad.front());

    std::vector<std::vector<Point2>> archives(cfg.seeds.size());
    parallel_for(cfg.seeds.size(), cfg.jobs, [&](std::size_t i) {
        const std::uint64_t seed = cfg.seeds[i];
        DpeiaResult res = dpeia(inst, cfg.algorithm, seed);
        const auto dir = cfg.out_dir / ("seed-" + std::to_string(seed));
        write_file(dir / "manifest.json", manifest_to_text({seed, cfg.algorithm, source, res.budget, res.archive}));
        write_file(dir / "archive.csv", export_pareto(res.archive, seed));
        write_file(dir / "rounds.json", rounds_to_text(res));
        archives[i] = archive_points(res.archive);
    });
    ExperimentReport rep = summarize(cfg.seeds, archives, cfg.reference);
    write_file(cfg.out_dir / "report.json", report_to_text(rep));
    return rep;
}

}  // namespace qrp
