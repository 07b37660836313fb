#pragma once

#include <cstddef>
#include <vector>

#include "fedgl/datagen.hpp"
#include "fedgl/graph.hpp"

namespace fedgl {

inline constexpr double kDefaultEdgeThreshold = 1e-4;

struct GraphMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double fs = 0.0;
    double re = 0.0;
    /// False when the truth has zero norm; re is then NaN.
    bool re_defined = true;
    double edge_threshold = kDefaultEdgeThreshold;
    std::size_t true_positive = 0;
    std::size_t false_positive = 0;
    std::size_t false_negative = 0;
};

/// Estimated edges are those strictly above edge_threshold; true edges are the
/// nonzero entries of truth. An empty edge set gives precision (or recall) 0.
GraphMetrics score_graph(const GraphVector& estimate, const GraphVector& truth,
                         double edge_threshold = kDefaultEdgeThreshold);

struct RunMetrics {
    std::vector<GraphMetrics> per_client;
    GraphMetrics local_average;  // counts are summed, rates are averaged
    GraphMetrics consensus;
};

/// Local estimates against the family's local truths, averaged over clients,
/// and the consensus estimate against the consensus truth.
RunMetrics score_run(const std::vector<GraphVector>& locals, const GraphVector& consensus,
                     const GraphFamily& family,
                     double edge_threshold = kDefaultEdgeThreshold);

/// One estimate scored against every local truth, averaged. Used for the
/// single-graph baseline, which has no per-client output.
GraphMetrics score_against_locals(const GraphVector& estimate, const GraphFamily& family,
                                  double edge_threshold = kDefaultEdgeThreshold);

GraphMetrics average_metrics(const std::vector<GraphMetrics>& all);

}  // namespace fedgl
