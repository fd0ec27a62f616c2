#pragma once

#include "qrp/dpeia.hpp"
#include "qrp/generator.hpp"
#include "qrp/model.hpp"
#include "qrp/trace.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrp {

// Every file starts with its schema tag on line 1.
inline constexpr const char* kInstanceSchema = "qrp-instance/1";
inline constexpr const char* kArchiveSchema = "qrp-archive/1";
inline constexpr const char* kManifestSchema = "qrp-manifest/1";
inline constexpr const char* kReportSchema = "qrp-report/1";
inline constexpr const char* kGanttSchema = "qrp-gantt/1";
inline constexpr const char* kCodeVersion = "0.1.0";

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Instance text: the schema line, then JSON with a "units" block. Doubles
/// are written in shortest round-trip form.
[[nodiscard]] std::string instance_to_text(const ProblemInstance& inst);
[[nodiscard]] ProblemInstance instance_from_text(const std::string& text);

void write_file(const std::filesystem::path& path, const std::string& content);
[[nodiscard]] std::string read_file(const std::filesystem::path& path);

/// 64-bit FNV-1a over the chromosome's genes, as 16 hex digits.
[[nodiscard]] std::string chromosome_digest(const Chromosome& ch);

struct ParetoRow {
    std::uint64_t seed = 0;
    ObjectivePair objectives;
    std::string digest;
};

/// Delimited archive table: the schema line, a column header, then one row
/// per entry sorted by makespan, with 17 significant digits.
[[nodiscard]] std::string export_pareto(const std::vector<ArchiveEntry>& archive, std::uint64_t seed);
[[nodiscard]] std::vector<ParetoRow> parse_pareto(const std::string& text);

/// JSON for chromosomes and configs, shared by manifests and the CLI.
[[nodiscard]] std::string chromosome_to_json(const Chromosome& ch);
[[nodiscard]] Chromosome chromosome_from_json(const std::string& json);

struct RunManifest {
    std::uint64_t seed = 0;
    DpeiaConfig config;
    std::string instance_source;  ///< file path or generator description
    BudgetSchedule budget;
    std::vector<ArchiveEntry> archive;
};

[[nodiscard]] std::string manifest_to_text(const RunManifest& m);
[[nodiscard]] RunManifest manifest_from_text(const std::string& text);

/// SVG Gantt chart. The x axis is in time units, so a block's width equals
/// its duration. One block per job, maintenance and idle record; reschedule
/// points are drawn as lines.
[[nodiscard]] std::string export_gantt(const ScheduleTrace& trace);

}  // namespace qrp
