#include "fedgl/client.hpp"

#include <sstream>
#include <stdexcept>

namespace fedgl {

std::string serialize(const ClientUpdateMsg& msg) {
    std::ostringstream out;
    out << "client=" << (msg.client + 1) << " round=" << msg.round << '\n';
    write_edge_list(out, msg.graph);
    return out.str();
}

ClientUpdateMsg parse_client_update(const std::string& text) {
    std::istringstream in(text);
    std::string header;
    std::getline(in, header);
    std::size_t id = 0;
    std::size_t round = 0;
    std::istringstream fields(header);
    std::string a;
    std::string b;
    fields >> a >> b;
    if (a.rfind("client=", 0) != 0 || b.rfind("round=", 0) != 0) {
        throw std::runtime_error("client update: bad header '" + header + "'");
    }
    id = std::stoul(a.substr(7));
    round = std::stoul(b.substr(6));
    if (id == 0) throw std::runtime_error("client update: ids are 1-based");
    return ClientUpdateMsg{id - 1, round, read_edge_list(in)};
}

GraphVector default_initial_graph(std::size_t d) {
    return GraphVector::complete(d, 1.0 / static_cast<double>(d - 1));
}

GraphVector accelerated_step(const GraphVector& w, const GraphVector& w_prev,
                             const DistanceVector& z, const GraphVector& w_con, double gamma,
                             const HyperParams& hp) {
    const Vector w_ex = w.weights() + hp.xi * (w.weights() - w_prev.weights());
    const Vector step = w_ex - hp.eta_w * round_gradient(w_ex, w_con, gamma, z, hp);
    return GraphVector(w.nodes(), step.cwiseMax(0.0));
}

ClientState::ClientState(ClientId id, const Matrix& signals, GraphVector w0)
    : id_(id),
      z_(pairwise_distance(signals)),
      w_(std::move(w0)),
      w_prev_(w_),
      w_con_(w_) {
    if (w_.nodes() != z_.nodes()) {
        throw DimensionError("initial graph and signals disagree on node count");
    }
}

void ClientState::receive(const GraphVector& w_con, double gamma) {
    if (w_con.nodes() != nodes()) throw DimensionError("consensus graph has the wrong node count");
    if (!(gamma > 0.0)) throw std::domain_error("gamma must be positive");
    w_con_ = w_con;
    gamma_ = gamma;
}

void ClientState::inner_step(const HyperParams& hp) {
    GraphVector next = accelerated_step(w_, w_prev_, z_, w_con_, gamma_, hp);
    w_prev_ = std::move(w_);
    w_ = std::move(next);
}

ClientUpdateMsg ClientState::local_round(const GraphVector& w_con, double gamma,
                                         const HyperParams& hp) {
    receive(w_con, gamma);
    for (std::size_t k = 0; k < hp.local_loops; ++k) inner_step(hp);
    ClientUpdateMsg msg{id_, round_, w_};
    ++round_;
    return msg;
}

double ClientState::local_objective_value(const HyperParams& hp) const {
    return local_objective(w_.weights(), z_, hp);
}

LocalSolveResult solve_local_to_convergence(const DistanceVector& z, const GraphVector& w_con,
                                            double gamma, const HyperParams& hp, double tol,
                                            std::size_t max_iter, const GraphVector& w0) {
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (w0.nodes() != z.nodes() || w_con.nodes() != z.nodes()) {
        throw DimensionError("solve_local_to_convergence: node count mismatch");
    }
    GraphVector w = w0;
    GraphVector w_prev = w0;
    LocalSolveResult out;
    while (out.iterations < max_iter) {
        GraphVector next = accelerated_step(w, w_prev, z, w_con, gamma, hp);
        ++out.iterations;
        const double moved = (next.weights() - w.weights()).norm();
        const double scale = 1.0 + w.weights().norm();
        w_prev = std::move(w);
        w = std::move(next);
        if (moved <= tol * scale) {
            out.converged = true;
            break;
        }
    }
    out.graph = std::move(w);
    return out;
}

LocalSolveResult solve_local_to_convergence(const DistanceVector& z, const GraphVector& w_con,
                                            double gamma, const HyperParams& hp, double tol,
                                            std::size_t max_iter) {
    return solve_local_to_convergence(z, w_con, gamma, hp, tol, max_iter,
                                      default_initial_graph(z.nodes()));
}

}  // namespace fedgl
