#pragma once

#include <cstddef>

#include "fedgl/graph.hpp"

namespace fedgl {

/// Squared pairwise row distances of one client's signal matrix, plus the
/// sample count used to produce them. This is the only data-derived object a
/// local solver reads.
class DistanceVector {
public:
    DistanceVector(std::size_t d, Vector z, std::size_t samples);

    std::size_t nodes() const noexcept { return d_; }
    std::size_t samples() const noexcept { return n_; }
    const Vector& values() const noexcept { return z_; }

private:
    std::size_t d_;
    Vector z_;
    std::size_t n_;
};

/// Model and solver constants. rho is always lambda * nu.
struct HyperParams {
    double alpha = 1.0;     // log-degree weight
    double beta = 0.01;     // squared-norm weight
    double nu = 2.4;        // local/consensus coupling
    double lambda = 0.1;    // l1 weight on the consensus graph
    double xi = 0.9;        // momentum
    double eta_w = 0.005;   // stepsize
    double zeta = 1e-4;     // degree floor inside the log
    double eps_gamma = 1e-8;
    std::size_t local_loops = 5;  // K
    std::size_t rounds = 50;      // T

    double rho() const noexcept { return lambda * nu; }

    /// Throws std::invalid_argument naming the first violated constraint.
    void validate() const;
};

/// z[(i,j)] = ||X[i,:] - X[j,:]||^2 for a d x N signal matrix.
DistanceVector pairwise_distance(const Matrix& signals);

/// (1/N) z^T w, the mean Dirichlet energy of the signals over w.
double smoothness_value(const Vector& w, const DistanceVector& z);

/// g(w) = (1/N) z^T w - alpha * sum log(Sw + zeta) + 2 beta ||w||^2.
double local_objective(const Vector& w, const DistanceVector& z, const HyperParams& hp);

/// grad g(w) = (1/N) z - alpha S^T (1 / (Sw + zeta)) + 4 beta w.
Vector local_gradient(const Vector& w, const DistanceVector& z, const HyperParams& hp);

/// f(w) = g(w) + (rho gamma / 2) ||w - w_con||^2.
double round_objective(const Vector& w, const GraphVector& w_con, double gamma,
                       const DistanceVector& z, const HyperParams& hp);

Vector round_gradient(const Vector& w, const GraphVector& w_con, double gamma,
                      const DistanceVector& z, const HyperParams& hp);

/// 4 beta + 2 alpha (d - 1) / zeta^2 + rho gamma.
double lipschitz_bound(const HyperParams& hp, std::size_t d, double gamma);

struct StepsizeCheck {
    bool ok = false;
    double lipschitz = 0.0;  // L_max at gamma_max
    double max_step = 0.0;   // 1 / L_max
};

/// Passes iff eta_w <= 1 / lipschitz_bound(hp, d, gamma_max).
StepsizeCheck check_stepsize(const HyperParams& hp, std::size_t d, double gamma_max);
StepsizeCheck check_stepsize(double eta_w, double lipschitz);

}  // namespace fedgl
