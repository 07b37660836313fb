#pragma once

#include <cstddef>
#include <string>

#include "fedgl/graph.hpp"
#include "fedgl/objective.hpp"

namespace fedgl {

/// 0-based client index. Text formats print it 1-based.
using ClientId = std::size_t;

/// What a client sends to the server after a round: its graph and nothing else.
struct ClientUpdateMsg {
    ClientId client = 0;
    std::size_t round = 0;
    GraphVector graph;
};

/// "client=<id> round=<t>" header followed by the edge list of the graph.
std::string serialize(const ClientUpdateMsg& msg);
ClientUpdateMsg parse_client_update(const std::string& text);

/// Uniform graph with every node degree equal to one; the default starting point.
GraphVector default_initial_graph(std::size_t d);

/// One extrapolate-descend-project step:
///   w_ex = w + xi (w - w_prev)
///   w_new = Proj_W(w_ex - eta_w (grad g(w_ex) + rho gamma (w_ex - w_con)))
GraphVector accelerated_step(const GraphVector& w, const GraphVector& w_prev,
                             const DistanceVector& z, const GraphVector& w_con, double gamma,
                             const HyperParams& hp);

/// One data silo. The distance summary is private: nothing in the public
/// interface returns it, and the raw signals are dropped at construction.
class ClientState {
public:
    ClientState(ClientId id, const Matrix& signals, GraphVector w0);

    ClientId id() const noexcept { return id_; }
    std::size_t nodes() const noexcept { return z_.nodes(); }
    std::size_t round() const noexcept { return round_; }

    const GraphVector& graph() const noexcept { return w_; }
    const GraphVector& previous() const noexcept { return w_prev_; }
    const GraphVector& consensus() const noexcept { return w_con_; }
    double gamma() const noexcept { return gamma_; }

    /// Sets the consensus graph and weight used by subsequent inner steps.
    void receive(const GraphVector& w_con, double gamma);

    void inner_step(const HyperParams& hp);

    /// Stores (w_con, gamma), runs exactly hp.local_loops inner steps starting
    /// from the momentum history left by the previous round, and emits the result.
    ClientUpdateMsg local_round(const GraphVector& w_con, double gamma, const HyperParams& hp);

    /// g_i at the current graph. A diagnostic for the orchestrator's trace;
    /// it never travels in a protocol message.
    double local_objective_value(const HyperParams& hp) const;

private:
    ClientId id_;
    DistanceVector z_;
    GraphVector w_;
    GraphVector w_prev_;
    GraphVector w_con_;
    double gamma_ = 1.0;
    std::size_t round_ = 0;
};

struct LocalSolveResult {
    GraphVector graph;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Runs accelerated_step until ||w_{k+1} - w_k|| <= tol (1 + ||w_k||) or
/// max_iter steps. With gamma = 0 this is the single-graph problem.
/// Hitting the cap is reported through `converged`, not thrown.
LocalSolveResult solve_local_to_convergence(const DistanceVector& z, const GraphVector& w_con,
                                            double gamma, const HyperParams& hp,
                                            double tol = 1e-8, std::size_t max_iter = 100000);

LocalSolveResult solve_local_to_convergence(const DistanceVector& z, const GraphVector& w_con,
                                            double gamma, const HyperParams& hp, double tol,
                                            std::size_t max_iter, const GraphVector& w0);

}  // namespace fedgl
