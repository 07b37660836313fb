#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "fedgl/graph.hpp"
#include "oracles.hpp"

using fedgl::DegreeOperator;
using fedgl::GraphVector;
using fedgl::Matrix;
using fedgl::Vector;

namespace {

Vector vec(std::initializer_list<double> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index k = 0;
    for (double x : xs) v[k++] = x;
    return v;
}

}  // namespace

TEST(EdgeIndex, RowMajorUpperTriangle) {
    const std::size_t d = 5;
    std::size_t k = 0;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j, ++k) {
            EXPECT_EQ(fedgl::edge_index(i, j, d), k);
            EXPECT_EQ(fedgl::edge_endpoints(k, d), std::make_pair(i, j));
        }
    }
    EXPECT_EQ(fedgl::edge_count(d), k);
    EXPECT_EQ(fedgl::nodes_for_edges(k), d);
    EXPECT_THROW(fedgl::nodes_for_edges(7), fedgl::DimensionError);
}

TEST(GraphVector, RejectsBadInput) {
    EXPECT_THROW(GraphVector(3, vec({1, 2})), fedgl::DimensionError);
    EXPECT_THROW(GraphVector(3, vec({1, -2, 0})), std::domain_error);
    EXPECT_THROW(GraphVector(2, vec({std::nan("")})), std::domain_error);
}

TEST(ToAdjacency, ThreeNodes) {
    Matrix expected(3, 3);
    expected << 0, 1, 2, 1, 0, 3, 2, 3, 0;
    EXPECT_EQ(fedgl::to_adjacency(GraphVector(3, vec({1, 2, 3}))), expected);
}

TEST(ToAdjacency, EmptyAndComplete) {
    EXPECT_EQ(fedgl::to_adjacency(GraphVector(2)), Matrix::Zero(2, 2));
    const Matrix a = fedgl::to_adjacency(GraphVector::complete(4, 1.0));
    EXPECT_EQ(a, Matrix::Ones(4, 4) - Matrix::Identity(4, 4));
}

TEST(ToAdjacency, RoundTrip) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const GraphVector g(7, oracle::random_nonneg(21, rng));
        EXPECT_EQ(GraphVector::from_adjacency(fedgl::to_adjacency(g)), g);
    }
}

TEST(ToLaplacian, SmallGraphs) {
    Matrix single(2, 2);
    single << 1, -1, -1, 1;
    EXPECT_EQ(fedgl::to_laplacian(GraphVector(2, vec({1}))), single);
    Matrix path(3, 3);
    path << 1, -1, 0, -1, 2, -1, 0, -1, 1;
    EXPECT_EQ(fedgl::to_laplacian(GraphVector(3, vec({1, 0, 1}))), path);
}

TEST(ToLaplacian, NullVectorIsOnes) {
    std::mt19937_64 rng(5);
    const GraphVector g(6, oracle::random_nonneg(15, rng));
    const Matrix lap = fedgl::to_laplacian(g);
    EXPECT_LT((lap * Vector::Ones(6)).norm(), 1e-12);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(lap);
    EXPECT_NEAR(eig.eigenvalues()[0], 0.0, 1e-12);
    EXPECT_GE(eig.eigenvalues()[1], -1e-12);
}

TEST(DegreeOperator, HandExamples) {
    const DegreeOperator s3(3);
    EXPECT_EQ(s3.apply(vec({1, 2, 3})), vec({3, 4, 5}));
    EXPECT_EQ(DegreeOperator(2).apply(vec({0})), vec({0, 0}));
    EXPECT_EQ(s3.adjoint(vec({1, 1, 1})), vec({2, 2, 2}));
    EXPECT_EQ(s3.adjoint(vec({1, 0, 0})), vec({1, 1, 0}));
}

TEST(DegreeOperator, MatchesDenseOracle) {
    std::mt19937_64 rng(17);
    const DegreeOperator s(6);
    const Matrix dense = oracle::degree_matrix(6);
    for (int trial = 0; trial < 20; ++trial) {
        const Vector w = oracle::random_nonneg(15, rng);
        const Vector v = oracle::random_nonneg(6, rng, -1.0, 1.0);
        EXPECT_LT((s.apply(w) - oracle::adjacency(w, 6).rowwise().sum()).norm(), 1e-12);
        EXPECT_LT((s.adjoint(v) - dense.transpose() * v).norm(), 1e-12);
        EXPECT_NEAR(s.apply(w).dot(v), w.dot(s.adjoint(v)), 1e-12);
    }
}

TEST(DegreeOperator, DimensionMismatch) {
    EXPECT_THROW(DegreeOperator(3).apply(vec({1, 2})), fedgl::DimensionError);
    EXPECT_THROW(DegreeOperator(3).adjoint(vec({1, 2})), fedgl::DimensionError);
}

TEST(ProjectNonneg, ClampsAndIsIdempotent) {
    EXPECT_EQ(fedgl::project_nonneg(vec({-1, 0.5, 0})).weights(), vec({0, 0.5, 0}));
    const Vector v = vec({0.1, 0.2, 0.3});
    EXPECT_EQ(fedgl::project_nonneg(v).weights(), v);
}

TEST(ProjectNonneg, Nonexpansive) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const Vector a = oracle::random_nonneg(10, rng, -1.0, 1.0);
        const Vector b = oracle::random_nonneg(10, rng, -1.0, 1.0);
        const double moved =
            (fedgl::project_nonneg(a).weights() - fedgl::project_nonneg(b).weights()).norm();
        EXPECT_LE(moved, (a - b).norm() + 1e-15);
    }
}

TEST(SoftThreshold, HandExamples) {
    const Vector out = fedgl::soft_threshold(vec({0.5, 0.05, 0}), 0.1);
    EXPECT_NEAR(out[0], 0.4, 1e-15);
    EXPECT_EQ(out[1], 0.0);
    EXPECT_EQ(out[2], 0.0);
    const Vector v = vec({-0.3, 0.7, 2.0});
    EXPECT_EQ(fedgl::soft_threshold(v, 0.0), v);
    EXPECT_THROW(fedgl::soft_threshold(v, -1.0), std::domain_error);
}

TEST(EdgeList, RoundTripAndFormat) {
    const GraphVector g(4, vec({0.5, 0, 1.25, 0, 0, 3}));
    const std::string text = fedgl::to_edge_list(g);
    EXPECT_EQ(text, "d=4\n1,2,0.5\n1,4,1.25\n3,4,3\n");
    EXPECT_EQ(fedgl::parse_edge_list(text), g);
    EXPECT_THROW(fedgl::parse_edge_list("d=4\n1,1,2\n"), std::runtime_error);
    EXPECT_THROW(fedgl::parse_edge_list("nodes\n"), std::runtime_error);
}
