#include "fedgl/experiment.hpp"

#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "fedgl/baselines.hpp"

namespace fedgl {

namespace {

enum SeedStream : std::uint64_t { kGraphStream = 0, kFamilyStream = 1, kSignalStream = 2 };

std::string samples_label(const ExperimentConfig& config) {
    std::string out;
    for (std::size_t i = 0; i < config.samples.size(); ++i) {
        if (i) out += ';';
        out += std::to_string(config.samples[i]);
    }
    return out;
}

std::string format_number(double v) {
    std::ostringstream out;
    out << std::setprecision(10) << v;
    return out.str();
}

std::string stepsize_warning(const FederationResult& r, const ExperimentConfig& config) {
    std::ostringstream out;
    out << std::setprecision(6) << "eta_w = " << config.hp.eta_w << " exceeds 1/L_max = "
        << r.stepsize.max_step << " at gamma_cap = " << config.gamma_cap
        << " (bound at gamma = 1/eps_gamma: " << r.theoretical_stepsize.max_step << ")";
    return out.str();
}

bool trace_finite(const FederationRun& run) {
    for (const auto& rec : run.trace) {
        if (!std::isfinite(rec.sum_dw_local_sq) || !std::isfinite(rec.dw_con_sq) ||
            !std::isfinite(rec.objective)) {
            return false;
        }
    }
    return true;
}

void write_graphs(const std::filesystem::path& out, const MethodOutput& result) {
    for (std::size_t i = 0; i < result.locals.size(); ++i) {
        write_graph_file(out / ("local_" + std::to_string(i + 1) + ".edges"), result.locals[i]);
    }
    if (result.shared) {
        const char* name = result.method == Method::global ? "global.edges" : "consensus.edges";
        write_graph_file(out / name, *result.shared);
    }
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::istringstream in(line);
    std::string cell;
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    return cells;
}

}  // namespace

Method parse_method(const std::string& name) {
    if (name == "ppgl") return Method::ppgl;
    if (name == "igl") return Method::igl;
    if (name == "global") return Method::global;
    throw ConfigError("unknown method '" + name + "' (expected ppgl, igl or global)");
}

std::string method_name(Method m) {
    switch (m) {
        case Method::ppgl: return "ppgl";
        case Method::igl: return "igl";
        case Method::global: return "global";
    }
    return "unknown";
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + (stream + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

SeedPlan seed_plan(const ExperimentConfig& config) {
    SeedPlan plan;
    plan.graph = derive_seed(config.seed, kGraphStream);
    plan.family = derive_seed(config.seed, kFamilyStream);
    for (std::size_t i = 0; i < config.clients; ++i) {
        plan.signals.push_back(derive_seed(config.seed, kSignalStream + i));
    }
    return plan;
}

SyntheticData generate_synthetic(const ExperimentConfig& config) {
    config.validate();
    const SeedPlan plan = seed_plan(config);
    const GraphVector g0 =
        generate_rbf_graph(config.d, config.sigma_r, config.rbf_threshold, plan.graph);
    if (g0.edges_above() == 0) {
        throw std::runtime_error("seed " + std::to_string(config.seed) +
                                 " produced a base graph with no edges");
    }
    SyntheticData data;
    data.family = make_family(g0, config.clients, config.q, plan.family);
    data.signals.reserve(config.clients);
    for (std::size_t i = 0; i < config.clients; ++i) {
        data.signals.push_back(sample_smooth_signals(data.family.locals_truth[i],
                                                     config.samples_for(i), config.sigma_w,
                                                     plan.signals[i]));
    }
    return data;
}

Manifest make_manifest(const ExperimentConfig& config) {
    const SeedPlan plan = seed_plan(config);
    Manifest m;
    m.set("d", std::to_string(config.d));
    m.set("clients", std::to_string(config.clients));
    m.set("samples", samples_label(config));
    m.set("q", format_number(config.q));
    m.set("homogeneous", config.q == 1.0 ? "true" : "false");
    m.set("sigma_r", format_number(config.sigma_r));
    m.set("rbf_threshold", format_number(config.rbf_threshold));
    m.set("sigma_w", format_number(config.sigma_w));
    m.set("seed", std::to_string(config.seed));
    m.set("graph_seed", std::to_string(plan.graph));
    m.set("family_seed", std::to_string(plan.family));
    for (std::size_t i = 0; i < plan.signals.size(); ++i) {
        m.set("signal_seed_" + std::to_string(i + 1), std::to_string(plan.signals[i]));
    }
    m.set("assumption_added_edge_weights", "uniform[0.7,1.0]");
    m.set("assumption_added_edge_collisions", "allowed");
    return m;
}

void cmd_generate(const ExperimentConfig& config, const std::filesystem::path& out) {
    const SyntheticData data = generate_synthetic(config);
    write_text_file(out / "manifest.txt", make_manifest(config).text());
    write_family(out, data.family);
    for (std::size_t i = 0; i < data.signals.size(); ++i) {
        std::ostringstream csv;
        write_matrix_csv(csv, data.signals[i]);
        write_text_file(signals_path(out, i), csv.str());
    }
}

std::unique_ptr<Scheduler> make_scheduler(const ExperimentConfig& config) {
    if (config.scheduler == "threads") return std::make_unique<ThreadScheduler>();
    return std::make_unique<SequentialScheduler>();
}

MethodOutput run_method(const ExperimentConfig& config, Method method,
                        const ClientDataSource& raw_source) {
    config.validate();
    const ClientDataSource source = [&](ClientId i) {
        Matrix x = raw_source(i);
        if (static_cast<std::size_t>(x.rows()) != config.d) {
            throw ConfigError("client " + std::to_string(i + 1) + " has " + std::to_string(x.rows()) +
                              " nodes, config has d = " + std::to_string(config.d));
        }
        return x;
    };
    const auto scheduler = make_scheduler(config);
    MethodOutput out;
    out.method = method;
    switch (method) {
        case Method::ppgl: {
            FederationOptions options;
            options.scheduler = scheduler.get();
            options.gamma_cap = config.gamma_cap;
            options.enforce_stepsize = config.enforce_stepsize;
            options.initial_graph = GraphVector::complete(config.d, config.initial_weight());
            FederationResult r = run_federation(config.clients, config.d, source, config.hp, options);
            if (!r.stepsize.ok) out.warnings.push_back(stepsize_warning(r, config));
            out.converged = trace_finite(r.run);
            out.locals = r.locals;
            out.shared = r.consensus;
            out.federation = std::move(r);
            break;
        }
        case Method::igl: {
            IglResult r = solve_igl(config.clients, source, config.hp, config.solver_tol,
                                    config.solver_max_iter, scheduler.get());
            out.converged = r.all_converged();
            out.locals = std::move(r.graphs);
            break;
        }
        case Method::global: {
            std::vector<Matrix> datasets;
            datasets.reserve(config.clients);
            for (ClientId i = 0; i < config.clients; ++i) datasets.push_back(source(i));
            GlobalResult r = solve_global(datasets, config.hp, config.beta_global,
                                          config.solver_tol, config.solver_max_iter);
            out.converged = r.converged;
            out.shared = std::move(r.graph);
            break;
        }
    }
    if (!out.converged) {
        out.warnings.push_back(method_name(method) + ": solver did not converge");
    }
    return out;
}

MethodOutput run_method(const ExperimentConfig& config, Method method,
                        std::span<const Matrix> datasets) {
    if (datasets.size() != config.clients) {
        throw ConfigError("config has " + std::to_string(config.clients) + " clients but " +
                          std::to_string(datasets.size()) + " datasets were given");
    }
    for (const auto& x : datasets) {
        if (static_cast<std::size_t>(x.rows()) != config.d) {
            throw ConfigError("dataset node count does not match d = " + std::to_string(config.d));
        }
    }
    return run_method(config, method, [&](ClientId i) { return datasets[i]; });
}

std::vector<MetricsRow> metrics_rows(const ExperimentConfig& config, const MethodOutput& out,
                                     const GraphFamily& family) {
    const auto row = [&](std::string name, const GraphMetrics& m) {
        return MetricsRow{std::move(name), config.seed, samples_label(config), config.q, m};
    };
    std::vector<MetricsRow> rows;
    switch (out.method) {
        case Method::ppgl: {
            const RunMetrics rm = score_run(out.locals, *out.shared, family, config.edge_threshold);
            rows.push_back(row("ppgl-local", rm.local_average));
            rows.push_back(row("ppgl-consensus", rm.consensus));
            break;
        }
        case Method::igl: {
            std::vector<GraphMetrics> all;
            for (std::size_t i = 0; i < out.locals.size(); ++i) {
                all.push_back(score_graph(out.locals[i], family.locals_truth.at(i),
                                          config.edge_threshold));
            }
            rows.push_back(row("igl", average_metrics(all)));
            break;
        }
        case Method::global:
            rows.push_back(row("global", score_against_locals(*out.shared, family,
                                                              config.edge_threshold)));
            rows.push_back(row("global-consensus", score_graph(*out.shared, family.consensus_truth,
                                                               config.edge_threshold)));
            break;
    }
    return rows;
}

std::string metrics_csv(const std::vector<MetricsRow>& rows) {
    std::ostringstream out;
    out << "method,seed,N,q,precision,recall,fs,re\n";
    for (const auto& r : rows) {
        out << r.method << ',' << r.seed << ',' << r.samples << ',' << format_number(r.q) << ','
            << format_number(r.metrics.precision) << ',' << format_number(r.metrics.recall) << ','
            << format_number(r.metrics.fs) << ',' << format_number(r.metrics.re) << '\n';
    }
    return out.str();
}

RunSummary cmd_run(const ExperimentConfig& config, const std::filesystem::path& data,
                   Method method, const std::filesystem::path& out) {
    config.validate();
    const GraphFamily family = read_family(data);
    if (family.locals_truth.size() != config.clients) {
        throw ConfigError("dataset has " + std::to_string(family.locals_truth.size()) +
                          " clients, config has " + std::to_string(config.clients));
    }
    DatasetReader reader(data);
    const MethodOutput result =
        run_method(config, method, [&reader](ClientId i) { return reader.load(i); });

    RunSummary summary;
    summary.rows = metrics_rows(config, result, family);
    summary.converged = result.converged;
    summary.warnings = result.warnings;

    write_text_file(out / "config.txt", to_text(config));
    write_text_file(out / "metrics.csv", metrics_csv(summary.rows));
    write_graphs(out, result);
    if (result.federation) {
        std::ostringstream trace;
        write_trace_csv(trace, result.federation->run);
        write_text_file(out / "trace.csv", trace.str());
    }
    return summary;
}

GridReport run_grid(const ExperimentConfig& config, std::span<const Matrix> datasets,
                    const GraphFamily& family) {
    config.validate();
    GridReport report;
    for (double beta : config.beta_grid()) {
        for (double nu : config.grid_nu) {
            for (double lambda : config.grid_lambda) {
                ExperimentConfig point = config;
                point.hp.beta = beta;
                point.hp.nu = nu;
                point.hp.lambda = lambda;
                const MethodOutput r = run_method(point, Method::ppgl, datasets);
                report.converged = report.converged && r.converged;
                const RunMetrics m = score_run(r.locals, *r.shared, family, config.edge_threshold);
                report.points.push_back(GridPoint{beta, nu, lambda, m.local_average, m.consensus});
            }
        }
    }
    for (std::size_t k = 1; k < report.points.size(); ++k) {
        if (report.points[k].local.fs > report.points[report.best_local].local.fs) {
            report.best_local = k;
        }
        if (report.points[k].consensus.fs > report.points[report.best_consensus].consensus.fs) {
            report.best_consensus = k;
        }
    }
    return report;
}

GridReport cmd_grid(const ExperimentConfig& config, const std::filesystem::path& data,
                    const std::filesystem::path& out) {
    config.validate();
    const GraphFamily family = read_family(data);
    DatasetReader reader(data);
    std::vector<Matrix> datasets;
    for (ClientId i = 0; i < config.clients; ++i) datasets.push_back(reader.load(i));
    const GridReport report = run_grid(config, datasets, family);

    const auto line = [](const GridPoint& p) {
        return format_number(p.beta) + ',' + format_number(p.nu) + ',' + format_number(p.lambda) +
               ',' + format_number(p.local.precision) + ',' + format_number(p.local.recall) + ',' +
               format_number(p.local.fs) + ',' + format_number(p.local.re) + ',' +
               format_number(p.consensus.precision) + ',' + format_number(p.consensus.recall) +
               ',' + format_number(p.consensus.fs) + ',' + format_number(p.consensus.re) + '\n';
    };
    const std::string header =
        "beta,nu,lambda,local_precision,local_recall,local_fs,local_re,"
        "consensus_precision,consensus_recall,consensus_fs,consensus_re\n";
    std::string grid = header;
    for (const auto& p : report.points) grid += line(p);
    std::string best = "selection," + header;
    best += "best_local," + line(report.points[report.best_local]);
    best += "best_consensus," + line(report.points[report.best_consensus]);

    write_text_file(out / "config.txt", to_text(config));
    write_text_file(out / "grid.csv", grid);
    write_text_file(out / "best.csv", best);
    return report;
}

void cmd_report(const std::vector<std::filesystem::path>& results, std::ostream& out) {
    struct Sum {
        std::size_t runs = 0;
        double precision = 0.0;
        double recall = 0.0;
        double fs = 0.0;
        double re = 0.0;
    };
    std::vector<std::string> order;
    std::map<std::string, Sum> sums;
    for (const auto& dir : results) {
        std::istringstream in(read_text_file(dir / "metrics.csv"));
        std::string line;
        std::getline(in, line);
        if (line != "method,seed,N,q,precision,recall,fs,re") {
            throw IoError("'" + (dir / "metrics.csv").string() + "' has an unexpected header");
        }
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto cells = split_csv(line);
            if (cells.size() != 8) throw IoError("malformed metrics row '" + line + "'");
            if (!sums.count(cells[0])) order.push_back(cells[0]);
            Sum& s = sums[cells[0]];
            ++s.runs;
            s.precision += std::stod(cells[4]);
            s.recall += std::stod(cells[5]);
            s.fs += std::stod(cells[6]);
            s.re += std::stod(cells[7]);
        }
    }
    out << "method,runs,precision,recall,fs,re\n";
    for (const auto& name : order) {
        const Sum& s = sums[name];
        const auto n = static_cast<double>(s.runs);
        out << name << ',' << s.runs << ',' << format_number(s.precision / n) << ','
            << format_number(s.recall / n) << ',' << format_number(s.fs / n) << ','
            << format_number(s.re / n) << '\n';
    }
}

}  // namespace fedgl
