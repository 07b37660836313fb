#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fedgl/datagen.hpp"
#include "fedgl/federation.hpp"
#include "oracles.hpp"

using fedgl::FederationOptions;
using fedgl::GraphVector;
using fedgl::HyperParams;
using fedgl::Matrix;
using fedgl::Vector;

namespace {

std::vector<Matrix> synthetic_silos(std::size_t clients, std::size_t n, double q,
                                    std::uint64_t seed) {
    const GraphVector g0 = fedgl::generate_rbf_graph(20, 0.5, 0.7, seed);
    const auto fam = fedgl::make_family(g0, clients, q, seed + 1);
    std::vector<Matrix> out;
    for (std::size_t i = 0; i < clients; ++i) {
        out.push_back(fedgl::sample_smooth_signals(fam.locals_truth[i], n, 0.1, seed + 10 + i));
    }
    return out;
}

}  // namespace

TEST(Federation, SingleClientRecoversLocalSolution) {
    std::mt19937_64 rng(1);
    const std::vector<Matrix> data{oracle::random_signals(6, 40, rng)};
    HyperParams hp;
    hp.lambda = 1e-9;
    hp.rounds = 4000;
    const auto fed = fedgl::run_federation(data, hp);
    HyperParams solo = hp;
    const auto ref = fedgl::solve_local_to_convergence(fedgl::pairwise_distance(data[0]),
                                                       GraphVector(6), 0.0, solo, 1e-12, 200000);
    ASSERT_TRUE(ref.converged);
    EXPECT_LT((fed.locals[0].weights() - ref.graph.weights()).norm(),
              1e-4 * (1.0 + ref.graph.weights().norm()));
}

TEST(Federation, IdenticalClientsStayIdentical) {
    std::mt19937_64 rng(2);
    const Matrix x = oracle::random_signals(6, 30, rng);
    const std::vector<Matrix> data{x, x, x};
    HyperParams hp;
    hp.rounds = 10;
    FederationOptions opts;
    std::vector<fedgl::ClientUpdateMsg> seen;
    opts.observer = [&](const fedgl::WireMessage& m) {
        if (auto* u = std::get_if<fedgl::ClientUpdateMsg>(&m)) seen.push_back(*u);
    };
    const auto fed = fedgl::run_federation(data, hp, opts);
    ASSERT_EQ(seen.size(), 30u);
    for (std::size_t k = 0; k < seen.size(); k += 3) {
        EXPECT_EQ(seen[k].graph, seen[k + 1].graph);
        EXPECT_EQ(seen[k].graph, seen[k + 2].graph);
    }
    const double mu = fed.run.trace.back().mu;
    EXPECT_LT((fed.consensus.weights() - fedgl::soft_threshold(fed.locals[0].weights(), mu)).norm(),
              1e-12);
}

TEST(Federation, DefaultScaleRunIsFinite) {
    const auto data = synthetic_silos(5, 100, 0.5, 3);
    const HyperParams hp;
    const auto fed = fedgl::run_federation(data, hp);
    ASSERT_EQ(fed.run.trace.size(), hp.rounds);
    for (std::size_t t = 0; t < fed.run.trace.size(); ++t) {
        const auto& r = fed.run.trace[t];
        EXPECT_EQ(r.round, t);
        EXPECT_TRUE(std::isfinite(r.sum_dw_local_sq));
        EXPECT_TRUE(std::isfinite(r.dw_con_sq));
        EXPECT_TRUE(std::isfinite(r.objective));
        EXPECT_TRUE(std::isfinite(r.mu));
        ASSERT_EQ(r.gamma.size(), 5u);
    }
    EXPECT_EQ(fed.locals.size(), 5u);
    EXPECT_EQ(fed.run.server.round, hp.rounds);
    for (const auto& c : fed.run.clients) EXPECT_EQ(c.round(), hp.rounds);
}

TEST(Federation, TraceMatchesRecordedMessages) {
    const auto data = synthetic_silos(3, 50, 0.5, 4);
    HyperParams hp;
    hp.rounds = 6;
    std::vector<std::vector<GraphVector>> locals(hp.rounds + 1);
    std::vector<GraphVector> cons;
    FederationOptions opts;
    opts.observer = [&](const fedgl::WireMessage& m) {
        if (auto* u = std::get_if<fedgl::ClientUpdateMsg>(&m)) locals[u->round + 1].push_back(u->graph);
        if (auto* b = std::get_if<fedgl::BroadcastMsg>(&m); b && b->client == 0) cons.push_back(b->consensus);
    };
    const auto fed = fedgl::run_federation(data, hp, opts);
    locals[0].assign(3, fedgl::default_initial_graph(20));
    for (std::size_t t = 0; t < hp.rounds; ++t) {
        double sum = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            sum += (locals[t + 1][i].weights() - locals[t][i].weights()).squaredNorm();
        }
        EXPECT_DOUBLE_EQ(fed.run.trace[t].sum_dw_local_sq, sum);
        EXPECT_DOUBLE_EQ(fed.run.trace[t].dw_con_sq, (cons[t + 1].weights() - cons[t].weights()).squaredNorm());
    }
}

TEST(Federation, ObjectiveDescendsWithoutMomentum) {
    const auto data = synthetic_silos(4, 60, 0.5, 5);
    HyperParams hp;
    hp.xi = 0.0;
    hp.zeta = 0.5;
    hp.rounds = 40;
    FederationOptions opts;
    opts.gamma_cap = 50.0;
    hp.eta_w = fedgl::check_stepsize(hp, 20, opts.gamma_cap).max_step;
    opts.enforce_stepsize = true;
    const auto fed = fedgl::run_federation(data, hp, opts);
    for (const auto& r : fed.run.trace) {
        for (double g : r.gamma) ASSERT_LE(g, opts.gamma_cap);
    }
    for (std::size_t t = 1; t < fed.run.trace.size(); ++t) {
        EXPECT_LE(fed.run.trace[t].objective, fed.run.trace[t - 1].objective + 1e-9);
    }
}

TEST(Federation, MomentumRunStaysBounded) {
    const auto data = synthetic_silos(5, 100, 0.5, 6);
    const auto fed = fedgl::run_federation(data, HyperParams{});
    const double first = fed.run.trace.front().objective;
    for (const auto& r : fed.run.trace) {
        EXPECT_TRUE(std::isfinite(r.objective));
        EXPECT_LE(r.objective, std::abs(first) * 10.0 + 10.0);
    }
}

TEST(Federation, SchedulerDoesNotChangeResults) {
    const auto data = synthetic_silos(5, 80, 0.5, 7);
    HyperParams hp;
    hp.rounds = 20;
    fedgl::ThreadScheduler threads;
    FederationOptions opts;
    opts.scheduler = &threads;
    const auto seq = fedgl::run_federation(data, hp);
    const auto par = fedgl::run_federation(data, hp, opts);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(seq.locals[i], par.locals[i]);
    EXPECT_EQ(seq.consensus, par.consensus);
    std::ostringstream a;
    std::ostringstream b;
    fedgl::write_trace_csv(a, seq.run);
    fedgl::write_trace_csv(b, par.run);
    EXPECT_EQ(a.str(), b.str());
}

TEST(Federation, MessageAuditSeesOnlyGraphsAndScalars) {
    const auto data = synthetic_silos(3, 40, 0.5, 8);
    HyperParams hp;
    hp.rounds = 5;
    std::vector<std::string> wire;
    std::size_t updates = 0;
    std::size_t broadcasts = 0;
    FederationOptions opts;
    opts.observer = [&](const fedgl::WireMessage& m) {
        std::visit(
            [&](const auto& msg) {
                using T = std::decay_t<decltype(msg)>;
                if constexpr (std::is_same_v<T, fedgl::ClientUpdateMsg>) {
                    ++updates;
                    const auto back = fedgl::parse_client_update(fedgl::serialize(msg));
                    EXPECT_LT((back.graph.weights() - msg.graph.weights()).norm(), 1e-9);
                } else {
                    ++broadcasts;
                    const auto back = fedgl::parse_broadcast(fedgl::serialize(msg), msg.client);
                    EXPECT_EQ(back.gamma, msg.gamma);
                }
                wire.push_back(fedgl::serialize(msg));
            },
            m);
    };
    fedgl::run_federation(data, hp, opts);
    EXPECT_EQ(updates, 15u);
    EXPECT_EQ(broadcasts, 18u);
    for (const auto& text : wire) {
        std::istringstream in(text);
        std::string line;
        std::getline(in, line);
        EXPECT_TRUE(line.rfind("client=", 0) == 0 || line.rfind("gamma=", 0) == 0) << line;
        std::getline(in, line);
        EXPECT_EQ(line, "d=20");
        while (std::getline(in, line)) {
            EXPECT_EQ(std::count(line.begin(), line.end(), ','), 2) << line;
        }
    }
}

TEST(Federation, StepsizeWarningAndOverride) {
    const auto data = synthetic_silos(2, 30, 0.5, 9);
    HyperParams hp;
    hp.rounds = 2;
    const auto fed = fedgl::run_federation(data, hp);
    EXPECT_FALSE(fed.stepsize.ok);
    EXPECT_FALSE(fed.theoretical_stepsize.ok);
    EXPECT_LT(fed.theoretical_stepsize.max_step, fed.stepsize.max_step);
    FederationOptions strict;
    strict.enforce_stepsize = true;
    EXPECT_THROW(fedgl::run_federation(data, hp, strict), fedgl::StepsizeError);
}

TEST(Federation, RejectsInconsistentInput) {
    std::mt19937_64 rng(10);
    const std::vector<Matrix> mixed{oracle::random_signals(5, 10, rng), oracle::random_signals(6, 10, rng)};
    EXPECT_THROW(fedgl::run_federation(mixed, HyperParams{}), fedgl::DimensionError);
    EXPECT_THROW(fedgl::run_federation(std::vector<Matrix>{}, HyperParams{}), std::invalid_argument);
    FederationOptions opts;
    opts.initial_graph = GraphVector(4);
    const std::vector<Matrix> ok{oracle::random_signals(5, 10, rng)};
    EXPECT_THROW(fedgl::run_federation(ok, HyperParams{}, opts), fedgl::DimensionError);
}

TEST(ThreadScheduler, RunsEveryTaskAndRethrows) {
    fedgl::ThreadScheduler s;
    std::vector<int> hit(8, 0);
    s.for_each_client(8, [&](std::size_t i) { hit[i] = 1; });
    EXPECT_EQ(std::count(hit.begin(), hit.end(), 1), 8);
    EXPECT_THROW(s.for_each_client(3, [](std::size_t i) {
        if (i == 1) throw std::runtime_error("boom");
    }),
                 std::runtime_error);
}

TEST(ConvergenceReport, FixedPoint) {
    fedgl::FederationRun run;
    run.trace.resize(8);
    const auto rep = fedgl::convergence_report(run);
    EXPECT_TRUE(rep.sufficient);
    EXPECT_TRUE(rep.at_fixed_point);
    EXPECT_TRUE(std::isnan(rep.local_exponent));
    EXPECT_TRUE(std::isnan(rep.con_exponent));
    for (double a : rep.avg_local) EXPECT_EQ(a, 0.0);
}

TEST(ConvergenceReport, TooShort) {
    fedgl::FederationRun run;
    run.trace.resize(4);
    EXPECT_FALSE(fedgl::convergence_report(run).sufficient);
}

TEST(ConvergenceReport, RunningAverages) {
    fedgl::FederationRun run;
    const std::vector<double> inc{4, 2, 1, 0.5, 0.25, 0.125};
    for (double v : inc) {
        fedgl::RoundRecord r;
        r.sum_dw_local_sq = v;
        r.dw_con_sq = v / 2;
        run.trace.push_back(r);
    }
    const auto rep = fedgl::convergence_report(run, 2);
    double cum = 0.0;
    for (std::size_t t = 0; t < inc.size(); ++t) {
        cum += inc[t];
        EXPECT_DOUBLE_EQ(rep.avg_local[t], cum / static_cast<double>(t + 1));
        EXPECT_DOUBLE_EQ(rep.avg_con[t], cum / 2 / static_cast<double>(t + 1));
        // running average never exceeds the largest increment so far
        EXPECT_LE(rep.avg_con[t], 2.0);
    }
    EXPECT_DOUBLE_EQ(rep.local_scaled_max, cum);
    EXPECT_FALSE(rep.local_scaled_nonincreasing);
    EXPECT_LT(rep.local_exponent, 0.0);
}

TEST(ConvergenceReport, PowerLawExponent) {
    fedgl::FederationRun run;
    // Increments chosen so that A(T) = 1/T exactly: T A(T) = 1 for every T.
    for (int t = 0; t < 20; ++t) {
        fedgl::RoundRecord r;
        r.sum_dw_local_sq = t == 0 ? 1.0 : 0.0;
        r.dw_con_sq = r.sum_dw_local_sq;
        run.trace.push_back(r);
    }
    const auto rep = fedgl::convergence_report(run);
    EXPECT_NEAR(rep.local_exponent, -1.0, 1e-12);
    EXPECT_TRUE(rep.local_scaled_nonincreasing);
    EXPECT_TRUE(rep.con_scaled_nonincreasing);
}

TEST(TraceCsv, HeaderAndRows) {
    const auto data = synthetic_silos(2, 30, 0.5, 11);
    HyperParams hp;
    hp.rounds = 3;
    const auto fed = fedgl::run_federation(data, hp);
    std::ostringstream out;
    fedgl::write_trace_csv(out, fed.run);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "round,sum_dw_local_sq,dw_con_sq,mu,gamma_1,gamma_2,objective");
    int rows = 0;
    while (std::getline(in, line)) {
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 6);
        ++rows;
    }
    EXPECT_EQ(rows, 3);
}
