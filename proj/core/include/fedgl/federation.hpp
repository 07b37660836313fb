#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "fedgl/client.hpp"
#include "fedgl/objective.hpp"
#include "fedgl/server.hpp"

namespace fedgl {

/// Runs one task per client. Implementations must finish every task before returning.
class Scheduler {
public:
    virtual ~Scheduler() = default;
    virtual void for_each_client(std::size_t count,
                                 const std::function<void(std::size_t)>& task) = 0;
};

class SequentialScheduler final : public Scheduler {
public:
    void for_each_client(std::size_t count,
                         const std::function<void(std::size_t)>& task) override;
};

/// One std::thread per client per call; the join is the round barrier.
class ThreadScheduler final : public Scheduler {
public:
    void for_each_client(std::size_t count,
                         const std::function<void(std::size_t)>& task) override;
};

/// Every message that crosses the client/server boundary.
using WireMessage = std::variant<ClientUpdateMsg, BroadcastMsg>;
using MessageObserver = std::function<void(const WireMessage&)>;

/// Supplies client i's signal matrix. Called once per client, inside that
/// client's initialization task; the matrix is dropped after summarizing.
using ClientDataSource = std::function<Matrix(ClientId)>;

struct RoundRecord {
    std::size_t round = 0;         // t, the round that just finished
    double sum_dw_local_sq = 0.0;  // sum_i ||w_i^(t+1) - w_i^(t)||^2
    double dw_con_sq = 0.0;        // ||w_con^(t+1) - w_con^(t)||^2
    double mu = 0.0;
    std::vector<double> gamma;     // gamma^(t+1)
    double objective = 0.0;        // G + lambda R at (w^(t+1), w_con^(t+1))
};

struct FederationRun {
    std::vector<ClientState> clients;
    ServerState server;
    HyperParams hp;
    std::vector<RoundRecord> trace;
};

struct FederationOptions {
    /// Sequential when null.
    Scheduler* scheduler = nullptr;
    MessageObserver observer;
    /// Practical gamma bound for the stepsize rule; 1/eps_gamma is the theoretical one.
    double gamma_cap = 1e3;
    /// When set, a failed stepsize check throws instead of being reported.
    bool enforce_stepsize = false;
    /// Common starting graph for every client and the consensus.
    std::optional<GraphVector> initial_graph;
};

struct FederationResult {
    std::vector<GraphVector> locals;
    GraphVector consensus;
    FederationRun run;
    StepsizeCheck stepsize;              // at gamma_cap
    StepsizeCheck theoretical_stepsize;  // at 1/eps_gamma
};

class StepsizeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Aggregate objective sum_i g_i(w_i) + lambda nu sum_i ||w_i - w_con|| + lambda ||w_con||_1.
/// Evaluated by the orchestrator, which holds every client state.
double aggregate_objective(std::span<const ClientState> clients, const GraphVector& w_con,
                           const HyperParams& hp);

FederationResult run_federation(std::size_t clients, std::size_t d,
                                const ClientDataSource& source, const HyperParams& hp,
                                const FederationOptions& options = {});

FederationResult run_federation(std::span<const Matrix> datasets, const HyperParams& hp,
                                const FederationOptions& options = {});

struct ConvergenceReport {
    bool sufficient = false;        // at least 5 rounds
    bool at_fixed_point = false;    // every trace increment is exactly zero
    std::vector<double> avg_local;  // A_local(T') for T' = 1..T
    std::vector<double> avg_con;
    double local_exponent = 0.0;    // slope of log A vs log T'; NaN when undefined
    double con_exponent = 0.0;
    /// T' A(T') non-increasing for T' >= tail_start.
    bool local_scaled_nonincreasing = false;
    bool con_scaled_nonincreasing = false;
    /// Largest T' A(T') over the run, the empirical C_1 / C_2.
    double local_scaled_max = 0.0;
    double con_scaled_max = 0.0;
    std::size_t tail_start = 10;
};

ConvergenceReport convergence_report(const FederationRun& run, std::size_t tail_start = 10);

/// CSV: round,sum_dw_local_sq,dw_con_sq,mu,gamma_1..gamma_I,objective
void write_trace_csv(std::ostream& out, const FederationRun& run);

}  // namespace fedgl
