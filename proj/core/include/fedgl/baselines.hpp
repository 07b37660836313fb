#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fedgl/client.hpp"
#include "fedgl/federation.hpp"
#include "fedgl/graph.hpp"
#include "fedgl/objective.hpp"

namespace fedgl {

struct IglResult {
    std::vector<GraphVector> graphs;
    std::vector<std::size_t> iterations;
    std::vector<bool> converged;

    bool all_converged() const;
};

/// Independent graph learning: every client solves its own single-graph
/// problem to convergence with no coupling term.
IglResult solve_igl(std::span<const Matrix> datasets, const HyperParams& hp, double tol = 1e-8,
                    std::size_t max_iter = 100000, Scheduler* scheduler = nullptr);

/// Same, reading client i's signals inside client i's task.
IglResult solve_igl(std::size_t clients, const ClientDataSource& source, const HyperParams& hp,
                    double tol = 1e-8, std::size_t max_iter = 100000,
                    Scheduler* scheduler = nullptr);

struct GlobalResult {
    GraphVector graph;
    std::size_t iterations = 0;
    bool converged = false;
};

/// One graph for all clients, minimizing
///   (1/N') sum_i [z_i^T w - alpha 1^T log(Sw + zeta) + 2 beta_global ||w||^2],  N' = sum_i N_i.
/// Solved as w = c u with c = I / N', where u minimizes the same-shaped problem
/// with z = z_pool / N', beta_global c^2 and zeta / c. The two objectives differ
/// by a positive factor and a constant, so the minimizers agree, and u lives on
/// the scale the shared stepsize was chosen for.
GlobalResult solve_global(std::span<const Matrix> datasets, const HyperParams& hp,
                          double beta_global, double tol = 1e-8,
                          std::size_t max_iter = 100000);

/// The pooled objective above, evaluated directly in w.
double global_objective(const Vector& w, std::span<const DistanceVector> summaries,
                        const HyperParams& hp, double beta_global);

}  // namespace fedgl
