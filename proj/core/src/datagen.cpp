#include "fedgl/datagen.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace fedgl {

namespace {

constexpr double kPinvCutoff = 1e-10;
constexpr double kAddedWeightLow = 0.7;
constexpr double kAddedWeightHigh = 1.0;

// First k entries of pool after a partial Fisher-Yates shuffle.
std::vector<std::size_t> sample_without_replacement(std::vector<std::size_t> pool, std::size_t k,
                                                    std::mt19937_64& rng) {
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(k);
    return pool;
}

Matrix symmetric_sqrt(const Matrix& sigma) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma);
    const Vector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

double rbf_weight(double distance, double sigma_r, double threshold) {
    const double weight = std::exp(-distance * distance / (2.0 * sigma_r * sigma_r));
    return weight < threshold ? 0.0 : weight;
}

GraphVector generate_rbf_graph(std::size_t d, double sigma_r, double threshold,
                               std::uint64_t seed) {
    if (d < 2) throw std::invalid_argument("generate_rbf_graph: need at least 2 nodes");
    if (!(sigma_r > 0.0)) throw std::invalid_argument("generate_rbf_graph: sigma_r must be positive");
    if (!(threshold >= 0.0 && threshold < 1.0)) {
        throw std::invalid_argument("generate_rbf_graph: threshold must lie in [0, 1)");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Matrix points(static_cast<Eigen::Index>(d), 2);
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        points(i, 0) = unit(rng);
        points(i, 1) = unit(rng);
    }
    Vector w = Vector::Zero(static_cast<Eigen::Index>(edge_count(d)));
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < points.rows(); ++j, ++k) {
            const double dist = (points.row(i) - points.row(j)).norm();
            w[static_cast<Eigen::Index>(k)] = rbf_weight(dist, sigma_r, threshold);
        }
    }
    return GraphVector(d, std::move(w));
}

GraphFamily make_family(const GraphVector& g0, std::size_t clients, double q,
                        std::uint64_t seed) {
    if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("make_family: q must lie in (0, 1]");
    if (clients == 0) throw std::invalid_argument("make_family: need at least one client");

    std::vector<std::size_t> edges;
    for (std::size_t k = 0; k < g0.size(); ++k) {
        if (g0[k] > 0.0) edges.push_back(k);
    }
    const std::size_t m = edges.size();
    const auto keep = static_cast<std::size_t>(std::ceil(q * static_cast<double>(m)));
    const auto add = static_cast<std::size_t>(std::floor((1.0 - q) * static_cast<double>(m)));
    if (keep == 0) throw std::invalid_argument("make_family: no edges left to keep");
    if (keep + add > g0.size()) {
        throw std::invalid_argument("make_family: not enough absent pairs for " +
                                    std::to_string(add) + " added edges");
    }

    std::mt19937_64 rng(seed);
    GraphFamily fam;
    fam.base = g0;
    fam.q = q;
    fam.seed = seed;

    Vector con = Vector::Zero(static_cast<Eigen::Index>(g0.size()));
    for (std::size_t k : sample_without_replacement(edges, keep, rng)) {
        con[static_cast<Eigen::Index>(k)] = g0[k];
    }
    fam.consensus_truth = GraphVector(g0.nodes(), con);

    std::vector<std::size_t> absent;
    for (std::size_t k = 0; k < g0.size(); ++k) {
        if (con[static_cast<Eigen::Index>(k)] == 0.0) absent.push_back(k);
    }
    std::uniform_real_distribution<double> added_weight(kAddedWeightLow, kAddedWeightHigh);
    fam.locals_truth.reserve(clients);
    for (std::size_t i = 0; i < clients; ++i) {
        Vector local = con;
        for (std::size_t k : sample_without_replacement(absent, add, rng)) {
            local[static_cast<Eigen::Index>(k)] = added_weight(rng);
        }
        fam.locals_truth.emplace_back(g0.nodes(), std::move(local));
    }
    return fam;
}

Matrix signal_covariance(const GraphVector& g, double sigma_w) {
    if (!(sigma_w >= 0.0)) throw std::invalid_argument("sigma_w must be nonnegative");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(to_laplacian(g));
    Vector inv = eig.eigenvalues();
    for (Eigen::Index k = 0; k < inv.size(); ++k) inv[k] = inv[k] < kPinvCutoff ? 0.0 : 1.0 / inv[k];
    Matrix sigma = eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
    sigma.diagonal().array() += sigma_w * sigma_w;
    return sigma;
}

Matrix sample_smooth_signals(const GraphVector& g, std::size_t samples, double sigma_w,
                             std::uint64_t seed) {
    if (samples == 0) throw std::invalid_argument("sample_smooth_signals: need at least one sample");
    const Matrix root = symmetric_sqrt(signal_covariance(g, sigma_w));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix noise(root.cols(), static_cast<Eigen::Index>(samples));
    for (Eigen::Index n = 0; n < noise.cols(); ++n) {
        for (Eigen::Index i = 0; i < noise.rows(); ++i) noise(i, n) = gauss(rng);
    }
    return root * noise;
}

}  // namespace fedgl
