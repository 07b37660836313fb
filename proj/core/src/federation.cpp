#include "fedgl/federation.hpp"

#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

namespace fedgl {

void SequentialScheduler::for_each_client(std::size_t count,
                                          const std::function<void(std::size_t)>& task) {
    for (std::size_t i = 0; i < count; ++i) task(i);
}

void ThreadScheduler::for_each_client(std::size_t count,
                                      const std::function<void(std::size_t)>& task) {
    std::vector<std::thread> workers;
    workers.reserve(count);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (std::size_t i = 0; i < count; ++i) {
        workers.emplace_back([&, i] {
            try {
                task(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : workers) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

double aggregate_objective(std::span<const ClientState> clients, const GraphVector& w_con,
                           const HyperParams& hp) {
    double smooth = 0.0;
    double coupling = 0.0;
    for (const auto& c : clients) {
        smooth += c.local_objective_value(hp);
        coupling += (c.graph().weights() - w_con.weights()).norm();
    }
    return smooth + hp.lambda * (hp.nu * coupling + w_con.weights().lpNorm<1>());
}

FederationResult run_federation(std::size_t clients, std::size_t d,
                                const ClientDataSource& source, const HyperParams& hp,
                                const FederationOptions& options) {
    hp.validate();
    if (clients == 0) throw std::invalid_argument("run_federation: no clients");

    FederationResult result;
    result.stepsize = check_stepsize(hp, d, options.gamma_cap);
    result.theoretical_stepsize = check_stepsize(hp, d, 1.0 / hp.eps_gamma);
    if (options.enforce_stepsize && !result.stepsize.ok) {
        throw StepsizeError("eta_w exceeds 1/L_max = " + std::to_string(result.stepsize.max_step));
    }

    SequentialScheduler fallback;
    Scheduler& scheduler = options.scheduler ? *options.scheduler : fallback;
    const GraphVector w0 = options.initial_graph ? *options.initial_graph : default_initial_graph(d);
    if (w0.nodes() != d) throw DimensionError("initial graph has the wrong node count");

    std::vector<std::optional<ClientState>> slots(clients);
    scheduler.for_each_client(clients, [&](std::size_t i) {
        const Matrix signals = source(i);
        if (static_cast<std::size_t>(signals.rows()) != d) {
            throw DimensionError("client " + std::to_string(i + 1) + " has " +
                                 std::to_string(signals.rows()) + " nodes, expected " +
                                 std::to_string(d));
        }
        slots[i].emplace(i, signals, w0);
    });

    FederationRun& run = result.run;
    run.hp = hp;
    run.clients.reserve(clients);
    for (auto& slot : slots) run.clients.push_back(std::move(*slot));
    run.server = ServerState::initial(clients, w0);

    auto notify = [&](const WireMessage& msg) {
        if (options.observer) options.observer(msg);
    };

    std::vector<BroadcastMsg> inbox;
    inbox.reserve(clients);
    for (ClientId i = 0; i < clients; ++i) {
        inbox.push_back(BroadcastMsg{i, 0, run.server.gamma[i], run.server.consensus});
    }
    for (const auto& b : inbox) notify(b);

    std::vector<ClientUpdateMsg> updates(clients);
    std::vector<GraphVector> before(clients);
    for (std::size_t t = 0; t < hp.rounds; ++t) {
        for (std::size_t i = 0; i < clients; ++i) before[i] = run.clients[i].graph();

        scheduler.for_each_client(clients, [&](std::size_t i) {
            updates[i] = run.clients[i].local_round(inbox[i].consensus, inbox[i].gamma, hp);
        });
        for (const auto& u : updates) notify(u);

        const GraphVector con_before = run.server.consensus;
        ServerRoundResult step = server_round(updates, run.server, hp);
        run.server = std::move(step.state);

        RoundRecord rec;
        rec.round = t;
        for (std::size_t i = 0; i < clients; ++i) {
            rec.sum_dw_local_sq += (updates[i].graph.weights() - before[i].weights()).squaredNorm();
        }
        rec.dw_con_sq = (run.server.consensus.weights() - con_before.weights()).squaredNorm();
        rec.mu = step.mu;
        rec.gamma = run.server.gamma;
        rec.objective = aggregate_objective(run.clients, run.server.consensus, hp);
        run.trace.push_back(std::move(rec));

        inbox = std::move(step.broadcasts);
        for (const auto& b : inbox) notify(b);
    }

    result.locals.reserve(clients);
    for (const auto& c : run.clients) result.locals.push_back(c.graph());
    result.consensus = run.server.consensus;
    return result;
}

FederationResult run_federation(std::span<const Matrix> datasets, const HyperParams& hp,
                                const FederationOptions& options) {
    if (datasets.empty()) throw std::invalid_argument("run_federation: no datasets");
    const auto d = static_cast<std::size_t>(datasets.front().rows());
    return run_federation(
        datasets.size(), d, [&](ClientId i) { return datasets[i]; }, hp, options);
}

namespace {

double fitted_exponent(const std::vector<double>& avg) {
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < avg.size(); ++k) {
        if (!(avg[k] > 0.0)) continue;
        const double x = std::log(static_cast<double>(k + 1));
        const double y = std::log(avg[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    const double denom = static_cast<double>(n) * sxx - sx * sx;
    if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (static_cast<double>(n) * sxy - sx * sy) / denom;
}

struct ScaledTail {
    bool nonincreasing = true;
    double max = 0.0;
};

// T' A(T') is the cumulative sum of increments up to T'.
ScaledTail scaled_tail(const std::vector<double>& avg, std::size_t tail_start) {
    ScaledTail out;
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < avg.size(); ++k) {
        const double scaled = avg[k] * static_cast<double>(k + 1);
        out.max = std::max(out.max, scaled);
        if (k + 1 < tail_start) continue;
        if (scaled > prev) out.nonincreasing = false;
        prev = scaled;
    }
    return out;
}

}  // namespace

ConvergenceReport convergence_report(const FederationRun& run, std::size_t tail_start) {
    ConvergenceReport rep;
    rep.tail_start = tail_start;
    const auto& trace = run.trace;
    rep.sufficient = trace.size() >= 5;

    double cum_local = 0.0;
    double cum_con = 0.0;
    rep.at_fixed_point = true;
    for (std::size_t k = 0; k < trace.size(); ++k) {
        cum_local += trace[k].sum_dw_local_sq;
        cum_con += trace[k].dw_con_sq;
        if (trace[k].sum_dw_local_sq != 0.0 || trace[k].dw_con_sq != 0.0) rep.at_fixed_point = false;
        rep.avg_local.push_back(cum_local / static_cast<double>(k + 1));
        rep.avg_con.push_back(cum_con / static_cast<double>(k + 1));
    }
    rep.local_exponent = fitted_exponent(rep.avg_local);
    rep.con_exponent = fitted_exponent(rep.avg_con);
    const auto local_tail = scaled_tail(rep.avg_local, tail_start);
    const auto con_tail = scaled_tail(rep.avg_con, tail_start);
    rep.local_scaled_nonincreasing = rep.sufficient && local_tail.nonincreasing;
    rep.con_scaled_nonincreasing = rep.sufficient && con_tail.nonincreasing;
    rep.local_scaled_max = local_tail.max;
    rep.con_scaled_max = con_tail.max;
    return rep;
}

void write_trace_csv(std::ostream& out, const FederationRun& run) {
    const std::size_t clients = run.clients.size();
    out << "round,sum_dw_local_sq,dw_con_sq,mu";
    for (std::size_t i = 0; i < clients; ++i) out << ",gamma_" << (i + 1);
    out << ",objective\n";
    out << std::setprecision(17);
    for (const auto& rec : run.trace) {
        out << rec.round << ',' << rec.sum_dw_local_sq << ',' << rec.dw_con_sq << ',' << rec.mu;
        for (double g : rec.gamma) out << ',' << g;
        out << ',' << rec.objective << '\n';
    }
}

}  // namespace fedgl
