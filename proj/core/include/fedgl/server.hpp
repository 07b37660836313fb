#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fedgl/client.hpp"
#include "fedgl/graph.hpp"
#include "fedgl/objective.hpp"

namespace fedgl {

/// Raised when the update set for a round is incomplete, duplicated or inconsistent.
class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// What the server sends back to one client after aggregation.
struct BroadcastMsg {
    ClientId client = 0;
    std::size_t round = 0;
    double gamma = 0.0;
    GraphVector consensus;
};

/// "gamma=<value> round=<t>" header followed by the consensus edge list.
/// The header carries no client id; routing is the transport's concern.
std::string serialize(const BroadcastMsg& msg);
BroadcastMsg parse_broadcast(const std::string& text, ClientId client);

struct ServerState {
    GraphVector consensus;
    std::vector<double> gamma;
    std::size_t round = 0;

    std::size_t clients() const noexcept { return gamma.size(); }

    /// gamma_i = 1/I for every client, consensus = w0.
    static ServerState initial(std::size_t clients, GraphVector w0);
};

struct ConsensusStep {
    GraphVector consensus;
    double gamma_sum = 0.0;  // C_gamma
    double mu = 0.0;         // lambda / (C_gamma rho)
};

/// w_con <- soft_threshold(sum_i gamma_i w_i / C_gamma, mu), summing in
/// ascending client order regardless of arrival order.
ConsensusStep consensus_update(std::span<const ClientUpdateMsg> updates, const ServerState& s,
                               const HyperParams& hp);

/// gamma_i = 1 / (||w_i - w_con|| + eps_gamma), indexed by client id.
std::vector<double> gamma_update(std::span<const ClientUpdateMsg> updates,
                                 const GraphVector& w_con, const HyperParams& hp);

struct ServerRoundResult {
    ServerState state;
    std::vector<BroadcastMsg> broadcasts;  // one per client, ascending id
    double mu = 0.0;
};

/// Consensus update with the current weights, then the weight update against
/// the new consensus. Advances the round counter.
ServerRoundResult server_round(std::span<const ClientUpdateMsg> updates, const ServerState& s,
                               const HyperParams& hp);

}  // namespace fedgl
