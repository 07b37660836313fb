#include "fedgl/server.hpp"

#include <iomanip>
#include <sstream>

namespace fedgl {

namespace {

// Returns updates reordered by client id after checking that the set is complete.
std::vector<const ClientUpdateMsg*> ordered_updates(std::span<const ClientUpdateMsg> updates,
                                                    std::size_t clients, std::size_t round,
                                                    std::size_t d) {
    if (updates.size() != clients) {
        throw ProtocolError("expected " + std::to_string(clients) + " client updates, got " +
                            std::to_string(updates.size()));
    }
    std::vector<const ClientUpdateMsg*> by_id(clients, nullptr);
    for (const auto& msg : updates) {
        if (msg.client >= clients) {
            throw ProtocolError("update from unknown client " + std::to_string(msg.client + 1));
        }
        if (by_id[msg.client] != nullptr) {
            throw ProtocolError("duplicate update from client " + std::to_string(msg.client + 1) +
                                " in round " + std::to_string(msg.round));
        }
        if (msg.round != round) {
            throw ProtocolError("client " + std::to_string(msg.client + 1) + " sent round " +
                                std::to_string(msg.round) + ", server is at round " +
                                std::to_string(round));
        }
        if (msg.graph.nodes() != d) {
            throw ProtocolError("client " + std::to_string(msg.client + 1) +
                                " sent a graph with the wrong node count");
        }
        by_id[msg.client] = &msg;
    }
    return by_id;
}

}  // namespace

std::string serialize(const BroadcastMsg& msg) {
    std::ostringstream out;
    out << std::setprecision(17) << "gamma=" << msg.gamma << " round=" << msg.round << '\n';
    write_edge_list(out, msg.consensus);
    return out.str();
}

BroadcastMsg parse_broadcast(const std::string& text, ClientId client) {
    std::istringstream in(text);
    std::string header;
    std::getline(in, header);
    std::istringstream fields(header);
    std::string a;
    std::string b;
    fields >> a >> b;
    if (a.rfind("gamma=", 0) != 0 || b.rfind("round=", 0) != 0) {
        throw std::runtime_error("broadcast: bad header '" + header + "'");
    }
    BroadcastMsg msg;
    msg.client = client;
    msg.gamma = std::stod(a.substr(6));
    msg.round = std::stoul(b.substr(6));
    msg.consensus = read_edge_list(in);
    return msg;
}

ServerState ServerState::initial(std::size_t clients, GraphVector w0) {
    if (clients == 0) throw std::invalid_argument("server needs at least one client");
    return ServerState{std::move(w0),
                       std::vector<double>(clients, 1.0 / static_cast<double>(clients)), 0};
}

ConsensusStep consensus_update(std::span<const ClientUpdateMsg> updates, const ServerState& s,
                               const HyperParams& hp) {
    const auto by_id = ordered_updates(updates, s.clients(), s.round, s.consensus.nodes());
    ConsensusStep out;
    Vector weighted = Vector::Zero(s.consensus.weights().size());
    for (std::size_t i = 0; i < by_id.size(); ++i) {
        weighted += s.gamma[i] * by_id[i]->graph.weights();
        out.gamma_sum += s.gamma[i];
    }
    weighted /= out.gamma_sum;
    out.mu = hp.lambda / (out.gamma_sum * hp.rho());
    out.consensus = GraphVector(s.consensus.nodes(), soft_threshold(weighted, out.mu));
    return out;
}

std::vector<double> gamma_update(std::span<const ClientUpdateMsg> updates,
                                 const GraphVector& w_con, const HyperParams& hp) {
    std::vector<double> gamma(updates.size(), 0.0);
    std::vector<bool> seen(updates.size(), false);
    for (const auto& msg : updates) {
        if (msg.client >= updates.size() || seen[msg.client]) {
            throw ProtocolError("gamma_update: client ids must be a permutation of 1..I");
        }
        if (msg.graph.size() != w_con.size()) {
            throw DimensionError("gamma_update: graph size mismatch");
        }
        seen[msg.client] = true;
        gamma[msg.client] = 1.0 / ((msg.graph.weights() - w_con.weights()).norm() + hp.eps_gamma);
    }
    return gamma;
}

ServerRoundResult server_round(std::span<const ClientUpdateMsg> updates, const ServerState& s,
                               const HyperParams& hp) {
    ConsensusStep step = consensus_update(updates, s, hp);
    ServerRoundResult out;
    out.mu = step.mu;
    out.state.gamma = gamma_update(updates, step.consensus, hp);
    out.state.consensus = std::move(step.consensus);
    out.state.round = s.round + 1;
    out.broadcasts.reserve(out.state.clients());
    for (ClientId i = 0; i < out.state.clients(); ++i) {
        out.broadcasts.push_back(
            BroadcastMsg{i, out.state.round, out.state.gamma[i], out.state.consensus});
    }
    return out;
}

}  // namespace fedgl
