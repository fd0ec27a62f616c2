// Command-line front end: instance generation, experiment runs, reports and exports.

#include "qrp/experiment.hpp"
#include "qrp/io.hpp"
#include "qrp/online.hpp"
#include "qrp/oracle.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <regex>

using namespace qrp;
namespace fs = std::filesystem;

namespace {

struct InstanceOpts {
    std::string path;
    GeneratorSpec spec;
};

void add_instance_opts(CLI::App* app, InstanceOpts& o) {
    app->add_option("--instance", o.path, "Instance file; when absent one is generated");
    app->add_option("--n-jobs", o.spec.n_jobs, "Generated job count")->check(CLI::Range(1, 100000));
    app->add_option("--sigma-q", o.spec.sigma_q, "Input quality deviation")->check(CLI::PositiveNumber);
    app->add_option("--type1-share", o.spec.type1_share, "Share of type-1 jobs")->check(CLI::Range(0.0, 1.0));
}

ProblemInstance load(const InstanceOpts& o, std::uint64_t seed) {
    if (!o.path.empty()) return instance_from_text(read_file(o.path));
    return generate_instance(o.spec, RngStream(seed));
}

const ArchiveEntry& pick(const RunManifest& m, std::size_t k) {
    if (k >= m.archive.size())
        throw std::out_of_range("archive entry " + std::to_string(k) + " of " + std::to_string(m.archive.size()));
    return m.archive[k];
}

ScheduleTrace replay(const ProblemInstance& inst, const Chromosome& ch, std::uint64_t seed, bool online, int budget,
                     bool expected) {
    SimOptions o;
    o.mode = online ? SimMode::ONLINE : SimMode::STATIC;
    const RngStream root(seed);
    if (online && budget > 0) o.rescheduler = make_rescheduler(inst, budget, root.substream(1));
    return simulate(decode(ch, inst), inst, PolicyParams::from(ch),
                    Sampler(root.substream(2), expected ? SamplingMode::expected : SamplingMode::stochastic), o);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint scheduling, maintenance and rework planner"};
    app.require_subcommand(1);
    std::uint64_t seed = 1;
    app.add_option("--seed", seed, "Root seed; all randomness derives from it");

    // generate
    auto* gen = app.add_subcommand("generate", "Write a generated instance file");
    InstanceOpts gen_o;
    std::string gen_out = "instance.json";
    add_instance_opts(gen, gen_o);
    gen->add_option("-o,--out", gen_out, "Output file");

    // run
    auto* run = app.add_subcommand("run", "Run the optimizer over several seeds");
    InstanceOpts run_o;
    add_instance_opts(run, run_o);
    ExperimentConfig ex;
    int n_seeds = 1;
    std::string mode = "dpeia";
    std::string out_dir = "results";
    run->add_option("--seeds", n_seeds, "Number of run seeds (seed, seed+1, ...)")->check(CLI::PositiveNumber);
    run->add_option("--pop", ex.algorithm.planner.pop_size, "Population size")->check(CLI::Range(2, 100000));
    run->add_option("--max-iter", ex.algorithm.max_iter, "Total iteration budget")->check(CLI::PositiveNumber);
    run->add_option("--rounds", ex.algorithm.n_rounds, "Planning/evaluation rounds")->check(CLI::PositiveNumber);
    run->add_option("--elites", ex.algorithm.elites, "Elites per round (0: a fifth of the population)");
    run->add_option("--varpi", ex.algorithm.varpi, "Online budget share scale")->check(CLI::PositiveNumber);
    run->add_option("--reps", ex.algorithm.planner.replications, "Static replications per label")
        ->check(CLI::PositiveNumber);
    run->add_option("--online-reps", ex.algorithm.online_replications, "Online replications per elite")
        ->check(CLI::PositiveNumber);
    run->add_option("--threads", ex.algorithm.planner.threads, "Worker threads per run")->check(CLI::PositiveNumber);
    run->add_option("--jobs", ex.jobs, "Seeds run concurrently")->check(CLI::PositiveNumber);
    run->add_option("--mode", mode, "dpeia, random or plan-only")
        ->check(CLI::IsMember({"dpeia", "random", "plan-only"}));
    run->add_flag("--no-suspension", "Disable PM suspension screening");
    run->add_flag("--expected", "Use mean draws instead of random ones");
    run->add_option("-o,--out", out_dir, "Output directory");

    // report
    auto* report = app.add_subcommand("report", "Recompute metrics from archive tables");
    std::vector<std::string> report_dirs;
    std::string report_out;
    report->add_option("dirs", report_dirs, "Result directories holding seed-*/archive.csv")->required();
    report->add_option("-o,--out", report_out, "Write the report here instead of stdout");

    // gantt
    auto* gantt = app.add_subcommand("gantt", "Render one archive entry as an SVG Gantt chart");
    InstanceOpts gantt_o;
    add_instance_opts(gantt, gantt_o);
    std::string gantt_manifest, gantt_out = "gantt.svg";
    std::size_t gantt_entry = 0;
    int gantt_budget = 10;
    gantt->add_option("--manifest", gantt_manifest, "Run manifest")->required()->check(CLI::ExistingFile);
    gantt->add_option("--entry", gantt_entry, "Archive entry index");
    gantt->add_option("--resched-iters", gantt_budget, "Rescheduling iterations for the replay");
    gantt->add_flag("--static", "Replay without rework or rescheduling");
    gantt->add_option("-o,--out", gantt_out, "Output file");

    // pareto
    auto* pareto = app.add_subcommand("pareto", "Print a manifest's archive as a table");
    std::string pareto_manifest;
    pareto->add_option("manifest", pareto_manifest, "Run manifest")->required()->check(CLI::ExistingFile);

    // oracle
    auto* oracle = app.add_subcommand("oracle", "Exhaustive front of a tiny instance, or a feasibility check");
    InstanceOpts oracle_o;
    add_instance_opts(oracle, oracle_o);
    std::string check_manifest;
    oracle->add_option("--check", check_manifest, "Replay every archive entry of this manifest and check it")
        ->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            write_file(gen_out, instance_to_text(load(gen_o, seed)));
            std::cout << "wrote " << gen_out << "\n";
        } else if (*run) {
            if (!run_o.path.empty())
                ex.instance_path = run_o.path;
            else
                ex.generator = run_o.spec;
            ex.instance_seed = seed;
            for (int i = 0; i < n_seeds; ++i) ex.seeds.push_back(seed + static_cast<std::uint64_t>(i));
            if (mode == "random") ex.algorithm.mode = SearchMode::random_search;
            if (mode == "plan-only") {
                ex.algorithm.n_rounds = 1;
                ex.algorithm.relabel = false;
            }
            if (run->count("--no-suspension")) ex.algorithm.planner.pm_suspension = false;
            if (run->count("--expected")) ex.algorithm.sampling = SamplingMode::expected;
            ex.out_dir = out_dir;
            auto rep = run_experiment(ex);
            for (const auto& s : rep.per_seed)
                std::cout << "seed " << s.seed << ": " << s.archive_size << " points, HV " << s.hv << ", IGD "
                          << s.igd << "\n";
            std::cout << "mean HV " << rep.mean_hv << ", report in " << (fs::path(out_dir) / "report.json") << "\n";
        } else if (*report) {
            std::vector<std::uint64_t> seeds;
            std::vector<std::vector<Point2>> archives;
            const std::regex seed_dir("seed-[0-9]+");
            for (const auto& d : report_dirs) {
                std::vector<fs::path> found;
                for (const auto& e : fs::directory_iterator(d))
                    if (e.is_directory() && std::regex_match(e.path().filename().string(), seed_dir)) found.push_back(e);
                std::sort(found.begin(), found.end());
                for (const auto& p : found) {
                    std::vector<Point2> pts;
                    std::uint64_t s = std::stoull(p.filename().string().substr(5));
                    for (const auto& r : parse_pareto(read_file(p / "archive.csv")))
                        pts.emplace_back(r.objectives.makespan, r.objectives.maintenance_cost);
                    seeds.push_back(s);
                    archives.push_back(pts);
                }
            }
            const auto text = report_to_text(summarize(seeds, archives));
            if (report_out.empty())
                std::cout << text;
            else
                write_file(report_out, text);
        } else if (*gantt) {
            const auto m = manifest_from_text(read_file(gantt_manifest));
            const auto inst = load(gantt_o, seed);
            const auto t = replay(inst, pick(m, gantt_entry).ch, seed, !gantt->count("--static"), gantt_budget,
                                  m.config.sampling == SamplingMode::expected);
            write_file(gantt_out, export_gantt(t));
            std::cout << "C_max " << t.objectives.makespan << ", C_m " << t.objectives.maintenance_cost << ", wrote "
                      << gantt_out << "\n";
        } else if (*pareto) {
            const auto m = manifest_from_text(read_file(pareto_manifest));
            std::cout << export_pareto(m.archive, m.seed);
        } else if (*oracle) {
            const auto inst = load(oracle_o, seed);
            if (!check_manifest.empty()) {
                const auto m = manifest_from_text(read_file(check_manifest));
                int bad = 0;
                for (std::size_t k = 0; k < m.archive.size(); ++k) {
                    auto rep = check_feasibility(replay(inst, m.archive[k].ch, seed, true, 10, false), inst);
                    for (const auto& v : rep.violations) std::cout << "entry " << k << ": " << v.tag << " " << v.description << "\n";
                    bad += !rep.feasible();
                }
                std::cout << m.archive.size() - static_cast<std::size_t>(bad) << "/" << m.archive.size()
                          << " entries feasible\n";
                return bad == 0 ? 0 : 1;
            }
            const auto res = enumerate(inst);
            std::cout << "C_max,C_m,qualified\n";
            for (const auto& p : res.pareto)
                std::cout << p.objectives.makespan << "," << p.objectives.maintenance_cost << "," << p.qualified << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
