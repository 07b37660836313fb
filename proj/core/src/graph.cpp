#include "fedgl/graph.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace fedgl {

std::pair<std::size_t, std::size_t> edge_endpoints(std::size_t k, std::size_t d) {
    if (k >= edge_count(d)) {
        throw DimensionError("edge index " + std::to_string(k) + " out of range for d=" +
                             std::to_string(d));
    }
    std::size_t i = 0;
    std::size_t row = d - 1;  // edges in row i
    while (k >= row) {
        k -= row;
        ++i;
        --row;
    }
    return {i, i + 1 + k};
}

std::size_t nodes_for_edges(std::size_t p) {
    const auto d = static_cast<std::size_t>(std::llround((1.0 + std::sqrt(1.0 + 8.0 * p)) / 2.0));
    if (d < 2 || edge_count(d) != p) {
        throw DimensionError("edge vector length " + std::to_string(p) +
                             " is not d(d-1)/2 for any d >= 2");
    }
    return d;
}

GraphVector::GraphVector(std::size_t d) : d_(d), w_(Vector::Zero(static_cast<Eigen::Index>(edge_count(d)))) {
    if (d < 2) throw DimensionError("a graph needs at least 2 nodes");
}

GraphVector::GraphVector(std::size_t d, Vector weights) : d_(d), w_(std::move(weights)) {
    if (d < 2) throw DimensionError("a graph needs at least 2 nodes");
    if (static_cast<std::size_t>(w_.size()) != edge_count(d)) {
        throw DimensionError("edge vector has length " + std::to_string(w_.size()) + ", expected " +
                             std::to_string(edge_count(d)));
    }
    for (Eigen::Index k = 0; k < w_.size(); ++k) {
        if (!(w_[k] >= 0.0) || !std::isfinite(w_[k])) {
            throw std::domain_error("edge weight " + std::to_string(k) +
                                    " is negative or not finite");
        }
    }
}

GraphVector GraphVector::complete(std::size_t d, double weight) {
    return GraphVector(d, Vector::Constant(static_cast<Eigen::Index>(edge_count(d)), weight));
}

GraphVector GraphVector::from_adjacency(const Matrix& adjacency) {
    if (adjacency.rows() != adjacency.cols()) throw DimensionError("adjacency matrix is not square");
    const auto d = static_cast<std::size_t>(adjacency.rows());
    if (d < 2) throw DimensionError("a graph needs at least 2 nodes");
    Vector w(static_cast<Eigen::Index>(edge_count(d)));
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < adjacency.rows(); ++i) {
        if (adjacency(i, i) != 0.0) throw std::domain_error("adjacency matrix has a self-loop");
        for (Eigen::Index j = i + 1; j < adjacency.cols(); ++j) {
            if (adjacency(i, j) != adjacency(j, i)) {
                throw std::domain_error("adjacency matrix is not symmetric");
            }
            w[k++] = adjacency(i, j);
        }
    }
    return GraphVector(d, std::move(w));
}

double GraphVector::weight(std::size_t i, std::size_t j) const {
    if (i >= d_ || j >= d_) throw DimensionError("node index out of range");
    if (i == j) return 0.0;
    if (i > j) std::swap(i, j);
    return (*this)[edge_index(i, j, d_)];
}

std::size_t GraphVector::edges_above(double threshold) const {
    return static_cast<std::size_t>((w_.array() > threshold).count());
}

Vector DegreeOperator::apply(const Vector& w) const {
    if (static_cast<std::size_t>(w.size()) != edge_count(d_)) {
        throw DimensionError("degree operator: edge vector length mismatch");
    }
    Vector deg = Vector::Zero(static_cast<Eigen::Index>(d_));
    Eigen::Index k = 0;
    for (std::size_t i = 0; i < d_; ++i) {
        for (std::size_t j = i + 1; j < d_; ++j, ++k) {
            deg[static_cast<Eigen::Index>(i)] += w[k];
            deg[static_cast<Eigen::Index>(j)] += w[k];
        }
    }
    return deg;
}

Vector DegreeOperator::adjoint(const Vector& v) const {
    if (static_cast<std::size_t>(v.size()) != d_) {
        throw DimensionError("degree adjoint: node vector length mismatch");
    }
    Vector out(static_cast<Eigen::Index>(edge_count(d_)));
    Eigen::Index k = 0;
    for (std::size_t i = 0; i < d_; ++i) {
        for (std::size_t j = i + 1; j < d_; ++j, ++k) {
            out[k] = v[static_cast<Eigen::Index>(i)] + v[static_cast<Eigen::Index>(j)];
        }
    }
    return out;
}

Matrix to_adjacency(const GraphVector& g) {
    const auto d = static_cast<Eigen::Index>(g.nodes());
    Matrix a = Matrix::Zero(d, d);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = i + 1; j < d; ++j, ++k) {
            a(i, j) = g.weights()[k];
            a(j, i) = g.weights()[k];
        }
    }
    return a;
}

Matrix to_laplacian(const GraphVector& g) {
    Matrix a = to_adjacency(g);
    Matrix l = -a;
    l.diagonal() = a.rowwise().sum();
    return l;
}

GraphVector project_nonneg(const Vector& v) {
    return GraphVector(nodes_for_edges(static_cast<std::size_t>(v.size())), v.cwiseMax(0.0));
}

Vector soft_threshold(const Vector& v, double mu) {
    if (!(mu >= 0.0)) throw std::domain_error("soft_threshold: mu must be nonnegative");
    return v.unaryExpr([mu](double x) {
        const double mag = std::abs(x) - mu;
        if (mag <= 0.0) return 0.0;
        return x > 0.0 ? mag : -mag;
    });
}

void write_edge_list(std::ostream& out, const GraphVector& g) {
    const auto d = g.nodes();
    out << "d=" << d << '\n';
    std::ostringstream line;
    line << std::setprecision(12);
    std::size_t k = 0;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j, ++k) {
            const double w = g[k];
            if (w == 0.0) continue;
            line.str({});
            line << (i + 1) << ',' << (j + 1) << ',' << w << '\n';
            out << line.str();
        }
    }
}

std::string to_edge_list(const GraphVector& g) {
    std::ostringstream out;
    write_edge_list(out, g);
    return out.str();
}

GraphVector read_edge_list(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("d=", 0) != 0) {
        throw std::runtime_error("edge list: missing 'd=<n>' header");
    }
    std::size_t d = 0;
    try {
        d = std::stoul(line.substr(2));
    } catch (const std::exception&) {
        throw std::runtime_error("edge list: bad header '" + line + "'");
    }
    Vector w = Vector::Zero(static_cast<Eigen::Index>(edge_count(d)));
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::size_t i = 0;
        std::size_t j = 0;
        double weight = 0.0;
        char c1 = 0;
        char c2 = 0;
        if (!(fields >> i >> c1 >> j >> c2 >> weight) || c1 != ',' || c2 != ',') {
            throw std::runtime_error("edge list: malformed line '" + line + "'");
        }
        if (i < 1 || j < 1 || i > d || j > d || i == j) {
            throw std::runtime_error("edge list: invalid endpoints in '" + line + "'");
        }
        if (i > j) std::swap(i, j);
        w[static_cast<Eigen::Index>(edge_index(i - 1, j - 1, d))] = weight;
    }
    return GraphVector(d, std::move(w));
}

GraphVector parse_edge_list(const std::string& text) {
    std::istringstream in(text);
    return read_edge_list(in);
}

}  // namespace fedgl
