#pragma once

#include "qrp/dpeia.hpp"
#include "qrp/generator.hpp"
#include "qrp/metrics.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace qrp {

struct ExperimentConfig {
    std::optional<std::filesystem::path> instance_path;  ///< when empty, the generator spec is used
    GeneratorSpec generator;
    std::uint64_t instance_seed = 0;
    DpeiaConfig algorithm;
    std::vector<std::uint64_t> seeds;
    std::filesystem::path out_dir = "results";
    int jobs = 1;  ///< seeds run concurrently
    /// Reference front for IGD; the pooled non-dominated set of all seeds when empty.
    std::vector<Point2> reference;
};

struct SeedMetrics {
    std::uint64_t seed = 0;
    std::size_t archive_size = 0;
    double hv = 0.0;
    double igd = 0.0;
    double rpd_makespan = 0.0;  ///< best makespan of the seed vs the best of all seeds
    double rpd_cost = 0.0;
};

struct ExperimentReport {
    std::vector<SeedMetrics> per_seed;
    Bounds2 bounds;
    std::vector<Point2> reference;
    double mean_hv = 0.0;
    double mean_igd = 0.0;
};

/// Hypervolume of each archive after normalizing by bounds over all of
/// them, with reference (1.1, 1.1) so boundary points still count.
[[nodiscard]] std::vector<double> paired_hypervolumes(const std::vector<std::vector<Point2>>& archives);

[[nodiscard]] std::vector<Point2> archive_points(const std::vector<ArchiveEntry>& archive);

/// Metrics across seeds: normalization over the union of archives (and the
/// reference set), IGD against the reference, HV at (1.1, 1.1).
[[nodiscard]] ExperimentReport summarize(const std::vector<std::uint64_t>& seeds,
                                         const std::vector<std::vector<Point2>>& archives,
                                         std::vector<Point2> reference = {});

[[nodiscard]] std::string report_to_text(const ExperimentReport& r);

/// Writes <out>/seed-<s>/{manifest.json, archive.csv, rounds.json} per seed
/// and <out>/report.json. The files are a pure function of the config.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

}  // namespace qrp
