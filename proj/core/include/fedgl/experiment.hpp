#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fedgl/config.hpp"
#include "fedgl/datagen.hpp"
#include "fedgl/evaluation.hpp"
#include "fedgl/federation.hpp"
#include "fedgl/io.hpp"

namespace fedgl {

enum class Method { ppgl, igl, global };

/// Accepts "ppgl", "igl" and "global"; throws ConfigError otherwise.
Method parse_method(const std::string& name);
std::string method_name(Method m);

/// Independent 64-bit stream seeds from one experiment seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

struct SeedPlan {
    std::uint64_t graph = 0;
    std::uint64_t family = 0;
    std::vector<std::uint64_t> signals;  // one per client
};

SeedPlan seed_plan(const ExperimentConfig& config);

struct SyntheticData {
    GraphFamily family;
    std::vector<Matrix> signals;  // client i: d x N_i
};

/// Base RBF graph, heterogeneous family, and per-client smooth signals.
SyntheticData generate_synthetic(const ExperimentConfig& config);

Manifest make_manifest(const ExperimentConfig& config);

/// Writes manifest, truth graphs and signal matrices under out.
void cmd_generate(const ExperimentConfig& config, const std::filesystem::path& out);

std::unique_ptr<Scheduler> make_scheduler(const ExperimentConfig& config);

struct MethodOutput {
    Method method = Method::ppgl;
    /// Per-client graphs (ppgl, igl). Empty for the global baseline.
    std::vector<GraphVector> locals;
    /// Consensus graph (ppgl) or the single shared graph (global).
    std::optional<GraphVector> shared;
    std::optional<FederationResult> federation;
    bool converged = true;
    std::vector<std::string> warnings;
};

MethodOutput run_method(const ExperimentConfig& config, Method method,
                        const ClientDataSource& source);
MethodOutput run_method(const ExperimentConfig& config, Method method,
                        std::span<const Matrix> datasets);

struct MetricsRow {
    std::string method;
    std::uint64_t seed = 0;
    std::string samples;  // N, or N_1;N_2;... when clients differ
    double q = 0.0;
    GraphMetrics metrics;
};

/// ppgl gives ppgl-local and ppgl-consensus rows; global gives global (against
/// the local truths) and global-consensus; igl gives one igl row.
std::vector<MetricsRow> metrics_rows(const ExperimentConfig& config, const MethodOutput& out,
                                     const GraphFamily& family);

/// Header method,seed,N,q,precision,recall,fs,re and one line per row.
std::string metrics_csv(const std::vector<MetricsRow>& rows);

struct RunSummary {
    std::vector<MetricsRow> rows;
    bool converged = true;
    std::vector<std::string> warnings;
};

/// Runs one method on a generated dataset directory and writes config.txt,
/// metrics.csv, the estimated graphs, and trace.csv for ppgl.
RunSummary cmd_run(const ExperimentConfig& config, const std::filesystem::path& data,
                   Method method, const std::filesystem::path& out);

struct GridPoint {
    double beta = 0.0;
    double nu = 0.0;
    double lambda = 0.0;
    GraphMetrics local;
    GraphMetrics consensus;
};

struct GridReport {
    std::vector<GridPoint> points;  // beta outermost, lambda innermost
    std::size_t best_local = 0;     // first point with the highest local FS
    std::size_t best_consensus = 0;
    bool converged = true;
};

GridReport run_grid(const ExperimentConfig& config, std::span<const Matrix> datasets,
                    const GraphFamily& family);

/// ppgl at every grid point; writes config.txt, grid.csv and best.csv.
GridReport cmd_grid(const ExperimentConfig& config, const std::filesystem::path& data,
                    const std::filesystem::path& out);

/// Averages every metrics.csv under the given result directories by method.
/// Output columns: method,runs,precision,recall,fs,re.
void cmd_report(const std::vector<std::filesystem::path>& results, std::ostream& out);

}  // namespace fedgl
