#include "fedgl/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fedgl {

namespace {

std::size_t common_nodes(std::span<const Matrix> datasets) {
    if (datasets.empty()) throw std::invalid_argument("baseline needs at least one dataset");
    const auto d = static_cast<std::size_t>(datasets.front().rows());
    for (const auto& x : datasets) {
        if (static_cast<std::size_t>(x.rows()) != d) {
            throw DimensionError("datasets disagree on node count");
        }
    }
    return d;
}

}  // namespace

bool IglResult::all_converged() const {
    return std::all_of(converged.begin(), converged.end(), [](bool c) { return c; });
}

IglResult solve_igl(std::size_t clients, const ClientDataSource& source, const HyperParams& hp,
                    double tol, std::size_t max_iter, Scheduler* scheduler) {
    hp.validate();
    if (clients == 0) throw std::invalid_argument("baseline needs at least one dataset");
    IglResult out;
    out.graphs.resize(clients);
    out.iterations.resize(clients);
    std::vector<char> converged(clients, 0);

    SequentialScheduler fallback;
    Scheduler& sched = scheduler ? *scheduler : fallback;
    sched.for_each_client(clients, [&](std::size_t i) {
        const DistanceVector z = pairwise_distance(source(i));
        LocalSolveResult r =
            solve_local_to_convergence(z, GraphVector(z.nodes()), 0.0, hp, tol, max_iter);
        out.graphs[i] = std::move(r.graph);
        out.iterations[i] = r.iterations;
        converged[i] = r.converged ? 1 : 0;
    });
    out.converged.assign(converged.begin(), converged.end());
    const std::size_t d = out.graphs.front().nodes();
    for (const auto& g : out.graphs) {
        if (g.nodes() != d) throw DimensionError("datasets disagree on node count");
    }
    return out;
}

IglResult solve_igl(std::span<const Matrix> datasets, const HyperParams& hp, double tol,
                    std::size_t max_iter, Scheduler* scheduler) {
    common_nodes(datasets);
    return solve_igl(
        datasets.size(), [&](ClientId i) { return datasets[i]; }, hp, tol, max_iter, scheduler);
}

GlobalResult solve_global(std::span<const Matrix> datasets, const HyperParams& hp,
                          double beta_global, double tol, std::size_t max_iter) {
    hp.validate();
    if (!(beta_global >= 0.0)) throw std::invalid_argument("beta_global must be nonnegative");
    const std::size_t d = common_nodes(datasets);

    Vector z_pool = Vector::Zero(static_cast<Eigen::Index>(edge_count(d)));
    std::size_t total = 0;
    for (const auto& x : datasets) {
        const DistanceVector z = pairwise_distance(x);
        z_pool += z.values();
        total += z.samples();
    }
    const double n_total = static_cast<double>(total);
    const double c = static_cast<double>(datasets.size()) / n_total;

    HyperParams scaled = hp;
    scaled.beta = beta_global * c * c;
    scaled.zeta = hp.zeta / c;
    const DistanceVector z_bar(d, z_pool / n_total, 1);

    LocalSolveResult r = solve_local_to_convergence(z_bar, GraphVector(d), 0.0, scaled, tol, max_iter);
    GlobalResult out;
    out.graph = GraphVector(d, c * r.graph.weights());
    out.iterations = r.iterations;
    out.converged = r.converged;
    return out;
}

double global_objective(const Vector& w, std::span<const DistanceVector> summaries,
                        const HyperParams& hp, double beta_global) {
    if (summaries.empty()) throw std::invalid_argument("global_objective: no summaries");
    const std::size_t d = summaries.front().nodes();
    const Vector degrees = DegreeOperator(d).apply(w);
    const double barrier = (degrees.array() + hp.zeta).log().sum();
    double total = 0.0;
    double n_total = 0.0;
    for (const auto& z : summaries) {
        total += z.values().dot(w) - hp.alpha * barrier + 2.0 * beta_global * w.squaredNorm();
        n_total += static_cast<double>(z.samples());
    }
    return total / n_total;
}

}  // namespace fedgl
