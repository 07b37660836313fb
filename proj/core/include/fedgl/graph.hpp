#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace fedgl {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Edges are indexed in row-major upper-triangle order:
// (0,1), (0,2), ..., (0,d-1), (1,2), ..., (d-2,d-1).
constexpr std::size_t edge_count(std::size_t d) noexcept { return d * (d - 1) / 2; }

/// Position of edge (i, j), i < j, both 0-based.
constexpr std::size_t edge_index(std::size_t i, std::size_t j, std::size_t d) noexcept {
    return i * (2 * d - i - 1) / 2 + (j - i - 1);
}

/// Inverse of edge_index.
std::pair<std::size_t, std::size_t> edge_endpoints(std::size_t k, std::size_t d);

/// Node count for an edge vector of length p; throws DimensionError if p is not triangular.
std::size_t nodes_for_edges(std::size_t p);

/// Nonnegative upper-triangle edge weights of an undirected graph without self-loops.
class GraphVector {
public:
    GraphVector() = default;

    /// Empty graph on d nodes.
    explicit GraphVector(std::size_t d);

    /// Throws DimensionError on a length mismatch and std::domain_error on a
    /// negative or non-finite weight.
    GraphVector(std::size_t d, Vector weights);

    static GraphVector complete(std::size_t d, double weight);

    /// Reads the strict upper triangle of a symmetric, zero-diagonal, nonnegative matrix.
    static GraphVector from_adjacency(const Matrix& adjacency);

    std::size_t nodes() const noexcept { return d_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(w_.size()); }
    const Vector& weights() const noexcept { return w_; }

    double operator[](std::size_t k) const { return w_[static_cast<Eigen::Index>(k)]; }
    double weight(std::size_t i, std::size_t j) const;

    /// Number of entries strictly above threshold.
    std::size_t edges_above(double threshold = 0.0) const;

    friend bool operator==(const GraphVector& a, const GraphVector& b) {
        return a.d_ == b.d_ && a.w_ == b.w_;
    }

private:
    std::size_t d_ = 0;
    Vector w_;
};

/// The node-degree map S: R^p -> R^d and its adjoint, applied without storing S.
class DegreeOperator {
public:
    explicit DegreeOperator(std::size_t d) : d_(d) {}

    std::size_t nodes() const noexcept { return d_; }

    /// (S w)[i] = sum over j != i of A[i][j].
    Vector apply(const Vector& w) const;

    /// (S^T v) at edge (i, j) = v[i] + v[j].
    Vector adjoint(const Vector& v) const;

private:
    std::size_t d_;
};

Matrix to_adjacency(const GraphVector& g);

/// L = D - A.
Matrix to_laplacian(const GraphVector& g);

/// Elementwise max(v, 0).
GraphVector project_nonneg(const Vector& v);

/// Proximal operator of mu * ||.||_1: sign(v) * max(|v| - mu, 0).
Vector soft_threshold(const Vector& v, double mu);

/// Edge-list text format: a "d=<n>" header, then one "i,j,weight" line per
/// nonzero edge with 1-based node indices and 12 significant digits.
void write_edge_list(std::ostream& out, const GraphVector& g);
std::string to_edge_list(const GraphVector& g);

/// Inverse of write_edge_list. Throws std::runtime_error on malformed input.
GraphVector read_edge_list(std::istream& in);
GraphVector parse_edge_list(const std::string& text);

}  // namespace fedgl
