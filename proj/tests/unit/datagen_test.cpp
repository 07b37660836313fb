#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fedgl/datagen.hpp"
#include "fedgl/objective.hpp"
#include "oracles.hpp"

using fedgl::GraphVector;
using fedgl::Matrix;
using fedgl::Vector;

namespace {

std::size_t edges_of(const GraphVector& g) {
    std::size_t n = 0;
    for (std::size_t k = 0; k < g.size(); ++k) n += g[k] != 0.0;
    return n;
}

GraphVector default_base(std::uint64_t seed) { return fedgl::generate_rbf_graph(20, 0.5, 0.7, seed); }

}  // namespace

TEST(RbfWeight, HandExamples) {
    EXPECT_NEAR(fedgl::rbf_weight(0.5, 0.5, 0.0), std::exp(-0.5), 1e-15);
    EXPECT_NEAR(fedgl::rbf_weight(0.5, 0.5, 0.0), 0.6065306597, 1e-10);
    EXPECT_EQ(fedgl::rbf_weight(0.5, 0.5, 0.7), 0.0);
    EXPECT_EQ(fedgl::rbf_weight(0.0, 0.5, 0.7), 1.0);
    EXPECT_EQ(fedgl::rbf_weight(0.0, 0.01, 0.99), 1.0);
}

TEST(RbfGraph, MatchesPointsDrawnFromTheSameStream) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::vector<std::array<double, 2>> pts(6);
        for (auto& p : pts) {
            p[0] = unit(rng);
            p[1] = unit(rng);
        }
        const GraphVector g = fedgl::generate_rbf_graph(6, 0.5, 0.7, seed);
        const Matrix a = fedgl::to_adjacency(g);
        for (int i = 0; i < 6; ++i) {
            for (int j = 0; j < 6; ++j) {
                if (i == j) continue;
                const double d2 = std::pow(pts[i][0] - pts[j][0], 2) + std::pow(pts[i][1] - pts[j][1], 2);
                const double w = std::exp(-d2 / 0.5);
                EXPECT_NEAR(a(i, j), w < 0.7 ? 0.0 : w, 1e-14);
            }
        }
    }
}

TEST(RbfGraph, DefaultsGiveNonemptyGraphs) {
    int nonempty = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) nonempty += edges_of(default_base(seed)) > 0;
    EXPECT_EQ(nonempty, 100);
}

TEST(RbfGraph, Deterministic) {
    EXPECT_EQ(default_base(5), default_base(5));
    EXPECT_NE(default_base(5), default_base(6));
}

TEST(RbfGraph, RejectsBadArguments) {
    EXPECT_THROW(fedgl::generate_rbf_graph(1, 0.5, 0.7, 0), std::invalid_argument);
    EXPECT_THROW(fedgl::generate_rbf_graph(5, 0.0, 0.7, 0), std::invalid_argument);
    EXPECT_THROW(fedgl::generate_rbf_graph(5, 0.5, 1.0, 0), std::invalid_argument);
}

TEST(Family, FullRetentionCopiesTheBase) {
    const GraphVector g0 = default_base(1);
    const auto fam = fedgl::make_family(g0, 5, 1.0, 2);
    EXPECT_EQ(fam.consensus_truth, g0);
    for (const auto& g : fam.locals_truth) EXPECT_EQ(g, g0);
}

TEST(Family, SmallRetentionSharesOnlyConsensusEdges) {
    // Ten edges in a path-like graph on 8 nodes.
    Vector w = Vector::Zero(28);
    for (int k = 0; k < 10; ++k) w[k] = 0.8;
    const GraphVector g0(8, w);
    const auto fam = fedgl::make_family(g0, 2, 0.15, 3);
    EXPECT_EQ(edges_of(fam.consensus_truth), 2u);
    for (const auto& g : fam.locals_truth) EXPECT_EQ(edges_of(g), 10u);
}

TEST(Family, EdgeCountAndInclusionAudit) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const GraphVector g0 = default_base(seed);
        const std::size_t m = edges_of(g0);
        for (double q : {0.3, 0.5, 0.9}) {
            const auto fam = fedgl::make_family(g0, 5, q, seed + 1000);
            const auto keep = static_cast<std::size_t>(std::ceil(q * static_cast<double>(m)));
            const auto add = static_cast<std::size_t>(std::floor((1.0 - q) * static_cast<double>(m)));
            ASSERT_EQ(edges_of(fam.consensus_truth), keep);
            for (std::size_t k = 0; k < g0.size(); ++k) {
                if (fam.consensus_truth[k] != 0.0) ASSERT_EQ(fam.consensus_truth[k], g0[k]);
            }
            for (const auto& g : fam.locals_truth) {
                ASSERT_EQ(edges_of(g), keep + add);
                if (keep + add == m) EXPECT_EQ(edges_of(g), m);
                for (std::size_t k = 0; k < g.size(); ++k) {
                    if (fam.consensus_truth[k] != 0.0) {
                        ASSERT_EQ(g[k], fam.consensus_truth[k]);
                    } else if (g[k] != 0.0) {
                        ASSERT_GE(g[k], 0.7);
                        ASSERT_LE(g[k], 1.0);
                    }
                }
            }
        }
    }
}

TEST(Family, DeterministicAndSeedSensitive) {
    const GraphVector g0 = default_base(9);
    const auto a = fedgl::make_family(g0, 3, 0.5, 4);
    const auto b = fedgl::make_family(g0, 3, 0.5, 4);
    const auto c = fedgl::make_family(g0, 3, 0.5, 5);
    EXPECT_EQ(a.consensus_truth, b.consensus_truth);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(a.locals_truth[i], b.locals_truth[i]);
    bool differs = !(a.consensus_truth == c.consensus_truth);
    for (std::size_t i = 0; i < 3; ++i) differs = differs || !(a.locals_truth[i] == c.locals_truth[i]);
    EXPECT_TRUE(differs);
}

TEST(Family, Errors) {
    EXPECT_THROW(fedgl::make_family(GraphVector(5), 2, 0.5, 0), std::invalid_argument);
    EXPECT_THROW(fedgl::make_family(default_base(1), 2, 0.0, 0), std::invalid_argument);
    EXPECT_THROW(fedgl::make_family(default_base(1), 0, 0.5, 0), std::invalid_argument);
    // A complete graph leaves exactly enough absent pairs once half is dropped.
    const auto fam = fedgl::make_family(GraphVector::complete(4, 0.9), 2, 0.5, 0);
    for (const auto& g : fam.locals_truth) EXPECT_EQ(edges_of(g), 6u);
}

TEST(Covariance, EmptyGraphIsScaledIdentity) {
    const Matrix s = fedgl::signal_covariance(GraphVector(5), 1.0);
    EXPECT_LT((s - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-15);
    const Matrix x = fedgl::sample_smooth_signals(GraphVector(5), 20000, 1.0, 7);
    EXPECT_LT((oracle::sample_covariance(x) - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff(), 0.05);
}

TEST(Covariance, MatchesPseudoInverseOracle) {
    std::mt19937_64 rng(8);
    const GraphVector g(5, oracle::random_nonneg(10, rng, 0.2, 1.0));
    const Matrix lap = oracle::adjacency(g.weights(), 5).rowwise().sum().asDiagonal().toDenseMatrix() -
                       oracle::adjacency(g.weights(), 5);
    const Matrix expected = oracle::pseudo_inverse(lap) + 0.01 * Matrix::Identity(5, 5);
    EXPECT_LT((fedgl::signal_covariance(g, 0.1) - expected).cwiseAbs().maxCoeff(), 1e-10);

    const Matrix x = fedgl::sample_smooth_signals(g, 20000, 0.1, 9);
    EXPECT_LT((oracle::sample_covariance(x) - expected).cwiseAbs().maxCoeff(), 0.05);
    EXPECT_LT(x.rowwise().mean().cwiseAbs().maxCoeff(), 0.05);
}

TEST(Covariance, DisconnectedGraphWithoutNoiseIsStillUsable) {
    Vector w = Vector::Zero(10);
    w[0] = 1.0;
    const GraphVector g(5, w);
    const Matrix x = fedgl::sample_smooth_signals(g, 10, 0.0, 1);
    EXPECT_TRUE(x.allFinite());
    EXPECT_THROW(fedgl::sample_smooth_signals(g, 0, 0.1, 1), std::invalid_argument);
}

TEST(Signals, DeterministicGivenSeed) {
    const GraphVector g = default_base(3);
    EXPECT_EQ(fedgl::sample_smooth_signals(g, 50, 0.1, 4), fedgl::sample_smooth_signals(g, 50, 0.1, 4));
}

TEST(Signals, SmootherOnTheirOwnGraphThanOnPermutedOnes) {
    int wins = 0;
    int trials = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const GraphVector g = default_base(seed);
        const Matrix x = fedgl::sample_smooth_signals(g, 100, 0.1, seed + 50);
        const auto z = fedgl::pairwise_distance(x);
        const double own = fedgl::smoothness_value(g.weights(), z);
        std::mt19937_64 rng(seed);
        for (int r = 0; r < 10; ++r) {
            std::vector<int> perm(20);
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            const Matrix a = fedgl::to_adjacency(g);
            Matrix b(20, 20);
            for (int i = 0; i < 20; ++i) {
                for (int j = 0; j < 20; ++j) b(i, j) = a(perm[i], perm[j]);
            }
            const double other = fedgl::smoothness_value(fedgl::GraphVector::from_adjacency(b).weights(), z);
            wins += own < other;
            ++trials;
        }
    }
    EXPECT_GE(wins, trials * 95 / 100);
}
