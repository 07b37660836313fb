#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "fedgl/objective.hpp"

namespace fedgl {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Everything one experiment needs. Text form is one "key = value" per line;
/// '#' starts a comment; list values are comma separated.
struct ExperimentConfig {
    HyperParams hp;

    // data
    std::size_t d = 20;
    std::size_t clients = 5;
    std::vector<std::size_t> samples{100};  // one value for all clients, or one per client
    double q = 0.5;
    double sigma_r = 0.5;
    double rbf_threshold = 0.7;
    double sigma_w = 0.1;
    std::uint64_t seed = 1;

    // solvers and scoring
    double edge_threshold = 1e-4;
    double gamma_cap = 1e3;
    bool enforce_stepsize = false;
    double beta_global = 30.0;
    double solver_tol = 1e-8;
    std::size_t solver_max_iter = 100000;
    std::string scheduler = "sequential";  // or "threads"
    /// Uniform starting edge weight; negative means 1/(d-1).
    double init_weight = -1.0;

    // grid search; an empty beta grid means {beta/2, beta, 2 beta}
    std::vector<double> grid_beta;
    std::vector<double> grid_nu{1.0, 3.1622776601683795, 10.0, 31.622776601683793, 100.0};
    std::vector<double> grid_lambda{0.01, 0.031622776601683791, 0.1, 0.31622776601683794, 1.0};

    /// Sample count of client i.
    std::size_t samples_for(std::size_t i) const;
    std::vector<double> beta_grid() const;
    double initial_weight() const;

    /// Throws ConfigError naming the first bad field.
    void validate() const;
};

/// Applies every key in text on top of base. Unknown keys and malformed
/// values are errors.
ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

/// Every key, in a fixed order, with values that parse back exactly.
std::string to_text(const ExperimentConfig& config);

/// Sets one key from its text value.
void set_config_value(ExperimentConfig& config, const std::string& key, const std::string& value);

}  // namespace fedgl
