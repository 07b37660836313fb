#include "fedgl/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <string_view>
#include <utility>

namespace fedgl {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& key, std::string_view text) {
    text = trim(text);
    T value{};
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
        throw ConfigError("config key '" + key + "': cannot parse '" + std::string(text) + "'");
    }
    return value;
}

template <typename T>
std::vector<T> parse_list(const std::string& key, std::string_view text) {
    std::vector<T> out;
    text = trim(text);
    if (text.empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        out.push_back(parse_number<T>(key, text.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

bool parse_bool(const std::string& key, std::string_view text) {
    text = trim(text);
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw ConfigError("config key '" + key + "': expected true or false");
}

std::string format(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format(std::size_t v) { return std::to_string(v); }
std::string format(std::uint64_t v, int) { return std::to_string(v); }

template <typename T>
std::string format_list(const std::vector<T>& values) {
    std::string out;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (k) out += ',';
        out += format(values[k]);
    }
    return out;
}

struct Field {
    const char* key;
    std::function<void(ExperimentConfig&, const std::string&, std::string_view)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

template <typename T>
Field number_field(const char* key, T ExperimentConfig::*member) {
    return {key,
            [member](ExperimentConfig& c, const std::string& k, std::string_view v) {
                c.*member = parse_number<T>(k, v);
            },
            [member](const ExperimentConfig& c) {
                if constexpr (std::is_same_v<T, std::uint64_t>) {
                    return format(c.*member, 0);
                } else {
                    return format(c.*member);
                }
            }};
}

template <typename T>
Field hp_field(const char* key, T HyperParams::*member) {
    return {key,
            [member](ExperimentConfig& c, const std::string& k, std::string_view v) {
                c.hp.*member = parse_number<T>(k, v);
            },
            [member](const ExperimentConfig& c) { return format(c.hp.*member); }};
}

template <typename T>
Field list_field(const char* key, std::vector<T> ExperimentConfig::*member) {
    return {key,
            [member](ExperimentConfig& c, const std::string& k, std::string_view v) {
                c.*member = parse_list<T>(k, v);
            },
            [member](const ExperimentConfig& c) { return format_list(c.*member); }};
}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        hp_field("alpha", &HyperParams::alpha),
        hp_field("beta", &HyperParams::beta),
        hp_field("nu", &HyperParams::nu),
        hp_field("lambda", &HyperParams::lambda),
        hp_field("xi", &HyperParams::xi),
        hp_field("eta_w", &HyperParams::eta_w),
        hp_field("zeta", &HyperParams::zeta),
        hp_field("eps_gamma", &HyperParams::eps_gamma),
        hp_field("local_loops", &HyperParams::local_loops),
        hp_field("rounds", &HyperParams::rounds),
        number_field("d", &ExperimentConfig::d),
        number_field("clients", &ExperimentConfig::clients),
        list_field("samples", &ExperimentConfig::samples),
        number_field("q", &ExperimentConfig::q),
        number_field("sigma_r", &ExperimentConfig::sigma_r),
        number_field("rbf_threshold", &ExperimentConfig::rbf_threshold),
        number_field("sigma_w", &ExperimentConfig::sigma_w),
        number_field("seed", &ExperimentConfig::seed),
        number_field("edge_threshold", &ExperimentConfig::edge_threshold),
        number_field("gamma_cap", &ExperimentConfig::gamma_cap),
        {"enforce_stepsize",
         [](ExperimentConfig& c, const std::string& k, std::string_view v) {
             c.enforce_stepsize = parse_bool(k, v);
         },
         [](const ExperimentConfig& c) { return std::string(c.enforce_stepsize ? "true" : "false"); }},
        number_field("beta_global", &ExperimentConfig::beta_global),
        number_field("solver_tol", &ExperimentConfig::solver_tol),
        number_field("solver_max_iter", &ExperimentConfig::solver_max_iter),
        {"scheduler",
         [](ExperimentConfig& c, const std::string&, std::string_view v) {
             c.scheduler = std::string(trim(v));
         },
         [](const ExperimentConfig& c) { return c.scheduler; }},
        number_field("init_weight", &ExperimentConfig::init_weight),
        list_field("grid_beta", &ExperimentConfig::grid_beta),
        list_field("grid_nu", &ExperimentConfig::grid_nu),
        list_field("grid_lambda", &ExperimentConfig::grid_lambda),
    };
    return table;
}

}  // namespace

std::size_t ExperimentConfig::samples_for(std::size_t i) const {
    return samples.size() == 1 ? samples.front() : samples.at(i);
}

std::vector<double> ExperimentConfig::beta_grid() const {
    if (!grid_beta.empty()) return grid_beta;
    return {hp.beta / 2.0, hp.beta, 2.0 * hp.beta};
}

double ExperimentConfig::initial_weight() const {
    return init_weight < 0.0 ? 1.0 / static_cast<double>(d - 1) : init_weight;
}

void ExperimentConfig::validate() const {
    try {
        hp.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (d < 2) throw ConfigError("d must be at least 2");
    if (clients == 0) throw ConfigError("clients must be at least 1");
    if (samples.size() != 1 && samples.size() != clients) {
        throw ConfigError("samples needs one value or one per client");
    }
    for (std::size_t n : samples) {
        if (n == 0) throw ConfigError("samples must be positive");
    }
    if (!(q > 0.0 && q <= 1.0)) throw ConfigError("q must lie in (0, 1]");
    if (!(sigma_r > 0.0)) throw ConfigError("sigma_r must be positive");
    if (!(rbf_threshold >= 0.0 && rbf_threshold < 1.0)) {
        throw ConfigError("rbf_threshold must lie in [0, 1)");
    }
    if (!(sigma_w >= 0.0)) throw ConfigError("sigma_w must be nonnegative");
    if (!(edge_threshold >= 0.0)) throw ConfigError("edge_threshold must be nonnegative");
    if (!(gamma_cap > 0.0)) throw ConfigError("gamma_cap must be positive");
    if (!(beta_global >= 0.0)) throw ConfigError("beta_global must be nonnegative");
    if (!(solver_tol > 0.0)) throw ConfigError("solver_tol must be positive");
    if (solver_max_iter == 0) throw ConfigError("solver_max_iter must be positive");
    if (scheduler != "sequential" && scheduler != "threads") {
        throw ConfigError("scheduler must be 'sequential' or 'threads'");
    }
    if (grid_nu.empty() || grid_lambda.empty()) throw ConfigError("grids must be nonempty");
    for (double v : beta_grid()) {
        if (!(v >= 0.0)) throw ConfigError("grid_beta values must be nonnegative");
    }
    for (double v : grid_nu) {
        if (!(v > 0.0)) throw ConfigError("grid_nu values must be positive");
    }
    for (double v : grid_lambda) {
        if (!(v > 0.0)) throw ConfigError("grid_lambda values must be positive");
    }
}

void set_config_value(ExperimentConfig& config, const std::string& key, const std::string& value) {
    for (const auto& f : fields()) {
        if (key == f.key) {
            f.set(config, key, value);
            return;
        }
    }
    throw ConfigError("unknown config key '" + key + "'");
}

ExperimentConfig parse_config(const std::string& text, ExperimentConfig base) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view(line);
        if (const auto hash = view.find('#'); hash != std::string_view::npos) {
            view = view.substr(0, hash);
        }
        view = trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        set_config_value(base, std::string(trim(view.substr(0, eq))),
                         std::string(trim(view.substr(eq + 1))));
    }
    return base;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), std::move(base));
}

std::string to_text(const ExperimentConfig& config) {
    std::string out;
    for (const auto& f : fields()) {
        out += f.key;
        out += " = ";
        out += f.get(config);
        out += '\n';
    }
    return out;
}

}  // namespace fedgl
