#include "fedgl/objective.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fedgl {

namespace {

void require_same_nodes(const Vector& w, const DistanceVector& z) {
    if (static_cast<std::size_t>(w.size()) != edge_count(z.nodes())) {
        throw DimensionError("graph has " + std::to_string(w.size()) + " edges, data has " +
                             std::to_string(edge_count(z.nodes())));
    }
}

}  // namespace

DistanceVector::DistanceVector(std::size_t d, Vector z, std::size_t samples)
    : d_(d), z_(std::move(z)), n_(samples) {
    if (d < 2) throw DimensionError("distance vector needs d >= 2");
    if (static_cast<std::size_t>(z_.size()) != edge_count(d)) {
        throw DimensionError("distance vector length mismatch");
    }
    if (n_ == 0) throw std::invalid_argument("distance vector needs at least one sample");
    if ((z_.array() < 0.0).any()) throw std::domain_error("distances must be nonnegative");
}

void HyperParams::validate() const {
    auto fail = [](const char* what) { throw std::invalid_argument(what); };
    if (!(alpha > 0)) fail("alpha must be > 0");
    if (!(beta > 0)) fail("beta must be > 0");
    if (!(nu > 0)) fail("nu must be > 0");
    if (!(lambda > 0)) fail("lambda must be > 0");
    if (!(xi >= 0 && xi < 1)) fail("xi must lie in [0, 1)");
    if (!(eta_w > 0)) fail("eta_w must be > 0");
    if (!(zeta > 0)) fail("zeta must be > 0");
    if (!(eps_gamma > 0)) fail("eps_gamma must be > 0");
    if (local_loops < 1) fail("local_loops must be >= 1");
    if (rounds < 1) fail("rounds must be >= 1");
}

DistanceVector pairwise_distance(const Matrix& signals) {
    const auto d = static_cast<std::size_t>(signals.rows());
    if (d < 2) throw DimensionError("pairwise_distance needs d >= 2");
    if (signals.cols() < 1) throw std::invalid_argument("pairwise_distance needs N >= 1");
    Vector z(static_cast<Eigen::Index>(edge_count(d)));
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < signals.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < signals.rows(); ++j, ++k) {
            z[k] = (signals.row(i) - signals.row(j)).squaredNorm();
        }
    }
    return DistanceVector(d, std::move(z), static_cast<std::size_t>(signals.cols()));
}

double smoothness_value(const Vector& w, const DistanceVector& z) {
    require_same_nodes(w, z);
    return z.values().dot(w) / static_cast<double>(z.samples());
}

double local_objective(const Vector& w, const DistanceVector& z, const HyperParams& hp) {
    require_same_nodes(w, z);
    const Vector deg = DegreeOperator(z.nodes()).apply(w);
    const double barrier = (deg.array() + hp.zeta).log().sum();
    return smoothness_value(w, z) - hp.alpha * barrier + 2.0 * hp.beta * w.squaredNorm();
}

Vector local_gradient(const Vector& w, const DistanceVector& z, const HyperParams& hp) {
    require_same_nodes(w, z);
    const DegreeOperator s(z.nodes());
    const Vector inv_deg = (s.apply(w).array() + hp.zeta).inverse();
    return z.values() / static_cast<double>(z.samples()) - hp.alpha * s.adjoint(inv_deg) +
           4.0 * hp.beta * w;
}

double round_objective(const Vector& w, const GraphVector& w_con, double gamma,
                       const DistanceVector& z, const HyperParams& hp) {
    if (w.size() != w_con.weights().size()) throw DimensionError("round_objective: size mismatch");
    return local_objective(w, z, hp) +
           0.5 * hp.rho() * gamma * (w - w_con.weights()).squaredNorm();
}

Vector round_gradient(const Vector& w, const GraphVector& w_con, double gamma,
                      const DistanceVector& z, const HyperParams& hp) {
    if (w.size() != w_con.weights().size()) throw DimensionError("round_gradient: size mismatch");
    return local_gradient(w, z, hp) + hp.rho() * gamma * (w - w_con.weights());
}

double lipschitz_bound(const HyperParams& hp, std::size_t d, double gamma) {
    return 4.0 * hp.beta + 2.0 * hp.alpha * static_cast<double>(d - 1) / (hp.zeta * hp.zeta) +
           hp.rho() * gamma;
}

StepsizeCheck check_stepsize(double eta_w, double lipschitz) {
    StepsizeCheck out;
    out.lipschitz = lipschitz;
    out.max_step = 1.0 / lipschitz;
    out.ok = eta_w <= out.max_step;
    return out;
}

StepsizeCheck check_stepsize(const HyperParams& hp, std::size_t d, double gamma_max) {
    return check_stepsize(hp.eta_w, lipschitz_bound(hp, d, gamma_max));
}

}  // namespace fedgl
