#include "qrp/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qrp {

namespace {

using json = nlohmann::ordered_json;

std::string with_schema(const char* tag, const json& body) { return std::string(tag) + "\n" + body.dump(2) + "\n"; }

json body_of(const std::string& text, const char* tag) {
    auto nl = text.find('\n');
    std::string first = text.substr(0, nl);
    if (first != tag) throw FormatError(std::string("expected schema ") + tag + ", found '" + first + "'");
    try {
        return json::parse(nl == std::string::npos ? std::string() : text.substr(nl + 1));
    } catch (const json::exception& e) {
        throw FormatError(std::string(tag) + ": " + e.what());
    }
}

json coeffs(const QualityCoefficients& c) { return {{"a", c.a}, {"b0", c.b0}, {"gamma", c.gamma}}; }
QualityCoefficients coeffs(const json& j) { return {j.at("a"), j.at("b0"), j.at("gamma")}; }

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json planner_json(const PlannerConfig& p) {
    return {{"pop_size", p.pop_size},
            {"replications", p.replications},
            {"re_prob", p.re_prob},
            {"gene_reset_prob", p.gene_reset_prob},
            {"similar_donors", p.similar_donors},
            {"pm_suspension", p.pm_suspension},
            {"front_share", p.front_share},
            {"threads", p.threads},
            {"ranges",
             {{"zeta", {p.ranges.zeta_lo, p.ranges.zeta_hi}},
              {"psi", {p.ranges.psi_lo, p.ranges.psi_hi}},
              {"thr", {p.ranges.thr_lo, p.ranges.thr_hi}},
              {"n_u_max", p.ranges.n_u_max}}}};
}

PlannerConfig planner_from(const json& j) {
    PlannerConfig p;
    p.pop_size = j.at("pop_size");
    p.replications = j.at("replications");
    p.re_prob = j.at("re_prob");
    p.gene_reset_prob = j.at("gene_reset_prob");
    p.similar_donors = j.at("similar_donors");
    p.pm_suspension = j.at("pm_suspension");
    p.front_share = j.at("front_share");
    p.threads = j.at("threads");
    const auto& r = j.at("ranges");
    p.ranges.zeta_lo = r.at("zeta")[0];
    p.ranges.zeta_hi = r.at("zeta")[1];
    p.ranges.psi_lo = r.at("psi")[0];
    p.ranges.psi_hi = r.at("psi")[1];
    p.ranges.thr_lo = r.at("thr")[0];
    p.ranges.thr_hi = r.at("thr")[1];
    p.ranges.n_u_max = r.at("n_u_max");
    return p;
}

json config_json(const DpeiaConfig& c) {
    return {{"planner", planner_json(c.planner)},
            {"max_iter", c.max_iter},
            {"n_rounds", c.n_rounds},
            {"elites", c.elites},
            {"varpi", c.varpi},
            {"mu_c", c.mu_c},
            {"sigma_c", c.sigma_c},
            {"online_replications", c.online_replications},
            {"relabel", c.relabel},
            {"mode", c.mode == SearchMode::dpeia ? "dpeia" : "random_search"},
            {"sampling", c.sampling == SamplingMode::stochastic ? "stochastic" : "expected"}};
}

DpeiaConfig config_from(const json& j) {
    DpeiaConfig c;
    c.planner = planner_from(j.at("planner"));
    c.max_iter = j.at("max_iter");
    c.n_rounds = j.at("n_rounds");
    c.elites = j.at("elites");
    c.varpi = j.at("varpi");
    c.mu_c = j.at("mu_c");
    c.sigma_c = j.at("sigma_c");
    c.online_replications = j.at("online_replications");
    c.relabel = j.at("relabel");
    c.mode = j.at("mode") == "dpeia" ? SearchMode::dpeia : SearchMode::random_search;
    c.sampling = j.at("sampling") == "stochastic" ? SamplingMode::stochastic : SamplingMode::expected;
    return c;
}

json chromosome_json(const Chromosome& ch) {
    return {{"keys", ch.keys}, {"idle_types", ch.idle_types}, {"zeta", ch.zeta},
            {"psi", ch.psi},   {"thr_r", ch.thr_r},           {"n_u", ch.n_u}};
}

Chromosome chromosome_of(const json& j) {
    Chromosome ch;
    ch.keys = j.at("keys").get<std::vector<double>>();
    ch.idle_types = j.at("idle_types").get<std::vector<JobType>>();
    ch.zeta = j.at("zeta");
    ch.psi = j.at("psi");
    ch.thr_r = j.at("thr_r");
    ch.n_u = j.at("n_u");
    return ch;
}

}  // namespace

std::string instance_to_text(const ProblemInstance& inst) {
    json machines = json::array();
    for (const auto& m : inst.machines) {
        machines.push_back({{"id", m.id},
                            {"mu_minus", m.mu_minus},
                            {"sigma_minus", m.sigma_minus},
                            {"mu_plus", m.mu_plus},
                            {"sigma_plus", m.sigma_plus},
                            {"alpha", m.alpha},
                            {"beta", m.beta},
                            {"table", coeffs(m.table)},
                            {"alternate", coeffs(m.alternate)},
                            {"upsilon_k0", m.upsilon_k0},
                            {"L", m.L},
                            {"W0", m.W0},
                            {"T_pm", m.T_pm},
                            {"T_ps", m.T_ps},
                            {"T_cm", m.T_cm},
                            {"C_pm", m.C_pm},
                            {"C_ps", m.C_ps},
                            {"C_cm", m.C_cm},
                            {"capable_types", m.capable_types}});
    }
    json quality = json::array();
    for (const auto& [t, s] : inst.quality.by_type) quality.push_back({{"type", t}, {"SL_plus", s.SL_plus}, {"xi", s.xi}});
    json jobs = json::array();
    for (const auto& j : inst.jobs) {
        json times = json::array();
        for (const auto& [k, o] : j.nominal_times) times.push_back({{"machine", k}, {"O", o}});
        json jj = {{"id", j.id}, {"type", j.job_type}, {"nominal_times", times}};
        if (j.initial_quality) jj["initial_quality"] = *j.initial_quality;
        if (j.is_rework_copy) jj["rework_of"] = j.origin_id.value_or(j.id);
        jobs.push_back(jj);
    }
    const auto& g = inst.globals;
    json body = {
        {"units", {{"time", "time units"}, {"cost", "cost units"}, {"degradation", "dimensionless"}}},
        {"globals",
         {{"eta", g.eta},
          {"theta", g.theta},
          {"varphi", g.varphi},
          {"mu_q", g.mu_q},
          {"sigma_q", g.sigma_q},
          {"quality_bounds", {g.quality_bounds.first, g.quality_bounds.second}},
          {"noise_sigma", g.noise_sigma},
          {"big_M", g.big_M},
          {"quality_coefficients", g.coefficient_set == CoefficientSet::table ? "table" : "alternate"}}},
        {"quality", quality},
        {"machines", machines},
        {"jobs", jobs}};
    return with_schema(kInstanceSchema, body);
}

ProblemInstance instance_from_text(const std::string& text) {
    const json body = body_of(text, kInstanceSchema);
    ProblemInstance inst;
    try {
        const auto& g = body.at("globals");
        inst.globals.eta = g.at("eta");
        inst.globals.theta = g.at("theta");
        inst.globals.varphi = g.at("varphi");
        inst.globals.mu_q = g.at("mu_q");
        inst.globals.sigma_q = g.at("sigma_q");
        inst.globals.quality_bounds = {g.at("quality_bounds")[0], g.at("quality_bounds")[1]};
        inst.globals.noise_sigma = g.at("noise_sigma");
        inst.globals.big_M = g.at("big_M");
        inst.globals.coefficient_set =
            g.at("quality_coefficients") == "table" ? CoefficientSet::table : CoefficientSet::alternate;
        for (const auto& q : body.at("quality")) inst.quality.by_type[q.at("type")] = {q.at("SL_plus"), q.at("xi")};
        for (const auto& j : body.at("machines")) {
            MachineParams m;
            m.id = j.at("id");
            m.mu_minus = j.at("mu_minus");
            m.sigma_minus = j.at("sigma_minus");
            m.mu_plus = j.at("mu_plus");
            m.sigma_plus = j.at("sigma_plus");
            m.alpha = j.at("alpha");
            m.beta = j.at("beta");
            m.table = coeffs(j.at("table"));
            m.alternate = coeffs(j.at("alternate"));
            m.upsilon_k0 = j.at("upsilon_k0");
            m.L = j.at("L");
            m.W0 = j.at("W0");
            m.T_pm = j.at("T_pm");
            m.T_ps = j.at("T_ps");
            m.T_cm = j.at("T_cm");
            m.C_pm = j.at("C_pm");
            m.C_ps = j.at("C_ps");
            m.C_cm = j.at("C_cm");
            m.capable_types = j.at("capable_types").get<std::set<JobType>>();
            inst.machines.push_back(m);
        }
        for (const auto& jj : body.at("jobs")) {
            Job j;
            j.id = jj.at("id");
            j.job_type = jj.at("type");
            for (const auto& t : jj.at("nominal_times")) j.nominal_times[t.at("machine")] = t.at("O");
            if (jj.contains("initial_quality")) j.initial_quality = jj.at("initial_quality").get<double>();
            if (jj.contains("rework_of")) {
                j.is_rework_copy = true;
                j.origin_id = jj.at("rework_of").get<JobId>();
            }
            inst.jobs.push_back(j);
        }
    } catch (const json::exception& e) {
        throw FormatError(std::string("instance: ") + e.what());
    }
    return inst;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string chromosome_digest(const Chromosome& ch) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](const void* p, std::size_t n) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 0x100000001b3ULL;
        }
    };
    for (double k : ch.keys) feed(&k, sizeof k);
    for (JobType t : ch.idle_types) feed(&t, sizeof t);
    feed(&ch.zeta, sizeof ch.zeta);
    feed(&ch.psi, sizeof ch.psi);
    feed(&ch.thr_r, sizeof ch.thr_r);
    feed(&ch.n_u, sizeof ch.n_u);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string export_pareto(const std::vector<ArchiveEntry>& archive, std::uint64_t seed) {
    std::vector<const ArchiveEntry*> rows;
    for (const auto& e : archive) rows.push_back(&e);
    std::stable_sort(rows.begin(), rows.end(), [](const ArchiveEntry* a, const ArchiveEntry* b) {
        return a->objectives.makespan < b->objectives.makespan;
    });
    std::string out = std::string(kArchiveSchema) + "\nseed,C_max,C_m,digest\n";
    for (const auto* e : rows)
        out += std::to_string(seed) + "," + fmt17(e->objectives.makespan) + "," +
               fmt17(e->objectives.maintenance_cost) + "," + chromosome_digest(e->ch) + "\n";
    return out;
}

std::vector<ParetoRow> parse_pareto(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kArchiveSchema) throw FormatError("archive: missing schema line");
    if (!std::getline(in, line) || line != "seed,C_max,C_m,digest") throw FormatError("archive: bad column header");
    std::vector<ParetoRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
        if (f.size() != 4) throw FormatError("archive: expected 4 fields in '" + line + "'");
        try {
            rows.push_back({std::stoull(f[0]), {std::stod(f[1]), std::stod(f[2])}, f[3]});
        } catch (const std::exception&) {
            throw FormatError("archive: unreadable row '" + line + "'");
        }
    }
    return rows;
}

std::string chromosome_to_json(const Chromosome& ch) { return chromosome_json(ch).dump(); }

Chromosome chromosome_from_json(const std::string& text) {
    try {
        return chromosome_of(json::parse(text));
    } catch (const json::exception& e) {
        throw FormatError(std::string("chromosome: ") + e.what());
    }
}

std::string manifest_to_text(const RunManifest& m) {
    json archive = json::array();
    for (const auto& e : m.archive)
        archive.push_back({{"C_max", e.objectives.makespan},
                           {"C_m", e.objectives.maintenance_cost},
                           {"round", e.round},
                           {"online_fitness", e.online_fitness},
                           {"digest", chromosome_digest(e.ch)},
                           {"chromosome", chromosome_json(e.ch)}});
    json body = {{"code_version", kCodeVersion},
                 {"seed", m.seed},
                 {"instance", m.instance_source},
                 {"config", config_json(m.config)},
                 {"budget", {{"planner", m.budget.planner}, {"online", m.budget.online}}},
                 {"archive", archive}};
    return with_schema(kManifestSchema, body);
}

RunManifest manifest_from_text(const std::string& text) {
    const json body = body_of(text, kManifestSchema);
    RunManifest m;
    try {
        m.seed = body.at("seed");
        m.instance_source = body.at("instance");
        m.config = config_from(body.at("config"));
        m.budget.planner = body.at("budget").at("planner").get<std::vector<int>>();
        m.budget.online = body.at("budget").at("online").get<std::vector<int>>();
        for (const auto& e : body.at("archive")) {
            ArchiveEntry a;
            a.objectives = {e.at("C_max"), e.at("C_m")};
            a.round = e.at("round");
            a.online_fitness = e.at("online_fitness");
            a.ch = chromosome_of(e.at("chromosome"));
            m.archive.push_back(a);
        }
    } catch (const json::exception& e) {
        throw FormatError(std::string("manifest: ") + e.what());
    }
    return m;
}

std::string export_gantt(const ScheduleTrace& t) {
    constexpr double row = 10.0;  // row height in time units; the view box keeps x linear in time
    double span = t.objectives.makespan;
    for (const auto& m : t.maintenance) span = std::max(span, m.event.time + m.event.duration);
    for (const auto& i : t.idles) span = std::max(span, i.end);
    span = std::max(span, 1.0);
    auto row_of = [&](MachineId id) {
        auto it = std::find(t.machines.begin(), t.machines.end(), id);
        return static_cast<double>(it - t.machines.begin());
    };
    const double height = row * static_cast<double>(std::max<std::size_t>(t.machines.size(), 1));
    std::ostringstream s;
    s << "<!-- " << kGanttSchema << " -->\n";
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1200\" height=\"" << 40 * t.machines.size() + 40
      << "\" viewBox=\"0 0 " << fmt17(span) << " " << fmt17(height) << "\" preserveAspectRatio=\"none\">\n";
    s << "<style>.job{fill:#4c78a8}.rework{fill:#f58518}.bad{fill:#e45756}.pm{fill:#54a24b}"
         ".cm{fill:#b279a2}.idle{fill:#bab0ac}.resched{stroke:#000;stroke-dasharray:2}</style>\n";
    for (std::size_t k = 0; k < t.machines.size(); ++k)
        s << "<g class=\"row\" data-machine=\"" << t.machines[k] << "\"><rect class=\"lane\" x=\"0\" y=\""
          << fmt17(row * static_cast<double>(k)) << "\" width=\"" << fmt17(span) << "\" height=\"" << row
          << "\" fill=\"none\" stroke=\"#ddd\"/></g>\n";
    auto block = [&](const char* cls, MachineId m, double x, double w, const std::string& extra) {
        s << "<rect class=\"block " << cls << "\" x=\"" << fmt17(x) << "\" y=\"" << fmt17(row * row_of(m) + 1)
          << "\" width=\"" << fmt17(w) << "\" height=\"" << row - 2 << "\"" << extra << "/>\n";
    };
    for (const auto& j : t.jobs)
        block(!j.conforming ? "bad" : j.rework() ? "rework" : "job", j.machine, j.start, j.end - j.start,
              " data-job=\"" + std::to_string(j.job) + "\"");
    for (const auto& m : t.maintenance)
        block(m.event.kind == MaintenanceKind::CM ? "cm" : "pm", m.event.machine_id, m.event.time, m.event.duration,
              "");
    for (const auto& i : t.idles) block("idle", i.machine, i.start, i.end - i.start, "");
    for (const auto& r : t.reschedules)
        s << "<line class=\"resched\" x1=\"" << fmt17(r.time) << "\" x2=\"" << fmt17(r.time) << "\" y1=\"0\" y2=\""
          << fmt17(height) << "\" vector-effect=\"non-scaling-stroke\"/>\n";
    s << "</svg>\n";
    return s.str();
}

}  // namespace qrp
