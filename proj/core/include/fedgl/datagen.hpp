#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fedgl/graph.hpp"

namespace fedgl {

/// Ground truth for one synthetic experiment.
struct GraphFamily {
    GraphVector base;
    GraphVector consensus_truth;
    std::vector<GraphVector> locals_truth;
    double q = 1.0;
    std::uint64_t seed = 0;
};

/// exp(-distance^2 / (2 sigma_r^2)), or 0 when that falls below threshold.
double rbf_weight(double distance, double sigma_r, double threshold);

/// d points uniform in the unit square, weight exp(-dist^2 / (2 sigma_r^2)),
/// weights below threshold dropped.
GraphVector generate_rbf_graph(std::size_t d, double sigma_r, double threshold,
                               std::uint64_t seed);

/// Keeps ceil(q |E0|) edges of g0 as the shared graph. Each local graph adds
/// floor((1 - q) |E0|) absent pairs with weights uniform in [0.7, 1].
/// Added pairs may coincide across clients.
GraphFamily make_family(const GraphVector& g0, std::size_t clients, double q,
                        std::uint64_t seed);

/// L^+ + sigma_w^2 I, with eigenvalues of L below 1e-10 treated as zero.
Matrix signal_covariance(const GraphVector& g, double sigma_w);

/// N independent draws from N(0, signal_covariance(g, sigma_w)), one per column.
Matrix sample_smooth_signals(const GraphVector& g, std::size_t samples, double sigma_w,
                             std::uint64_t seed);

}  // namespace fedgl
