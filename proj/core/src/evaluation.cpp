#include "fedgl/evaluation.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <stdexcept>

namespace fedgl {

GraphMetrics score_graph(const GraphVector& estimate, const GraphVector& truth,
                         double edge_threshold) {
    if (estimate.nodes() != truth.nodes()) {
        throw DimensionError("score_graph: estimate and truth differ in node count");
    }
    if (!(edge_threshold >= 0.0)) throw std::invalid_argument("edge_threshold must be nonnegative");
    GraphMetrics m;
    m.edge_threshold = edge_threshold;
    for (std::size_t k = 0; k < truth.size(); ++k) {
        const bool est = estimate[k] > edge_threshold;
        const bool tru = truth[k] != 0.0;
        if (est && tru) ++m.true_positive;
        else if (est) ++m.false_positive;
        else if (tru) ++m.false_negative;
    }
    const auto tp = static_cast<double>(m.true_positive);
    const auto fp = static_cast<double>(m.false_positive);
    const auto fn = static_cast<double>(m.false_negative);
    m.precision = tp + fp > 0.0 ? tp / (tp + fp) : 0.0;
    m.recall = tp + fn > 0.0 ? tp / (tp + fn) : 0.0;
    m.fs = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                                        : 0.0;
    const double truth_norm = truth.weights().norm();
    if (truth_norm > 0.0) {
        m.re = (estimate.weights() - truth.weights()).norm() / truth_norm;
    } else {
        m.re = std::numeric_limits<double>::quiet_NaN();
        m.re_defined = false;
    }
    return m;
}

GraphMetrics average_metrics(const std::vector<GraphMetrics>& all) {
    if (all.empty()) throw std::invalid_argument("average_metrics: nothing to average");
    GraphMetrics avg;
    avg.edge_threshold = all.front().edge_threshold;
    const auto n = static_cast<double>(all.size());
    for (const auto& m : all) {
        avg.precision += m.precision / n;
        avg.recall += m.recall / n;
        avg.fs += m.fs / n;
        avg.re += m.re / n;
        avg.re_defined = avg.re_defined && m.re_defined;
        avg.true_positive += m.true_positive;
        avg.false_positive += m.false_positive;
        avg.false_negative += m.false_negative;
    }
    if (!avg.re_defined) avg.re = std::numeric_limits<double>::quiet_NaN();
    return avg;
}

RunMetrics score_run(const std::vector<GraphVector>& locals, const GraphVector& consensus,
                     const GraphFamily& family, double edge_threshold) {
    if (locals.size() != family.locals_truth.size()) {
        throw std::invalid_argument("score_run: " + std::to_string(locals.size()) +
                                    " estimates for " +
                                    std::to_string(family.locals_truth.size()) + " clients");
    }
    RunMetrics out;
    for (std::size_t i = 0; i < locals.size(); ++i) {
        out.per_client.push_back(score_graph(locals[i], family.locals_truth[i], edge_threshold));
    }
    out.local_average = average_metrics(out.per_client);
    out.consensus = score_graph(consensus, family.consensus_truth, edge_threshold);
    return out;
}

GraphMetrics score_against_locals(const GraphVector& estimate, const GraphFamily& family,
                                  double edge_threshold) {
    std::vector<GraphMetrics> all;
    for (const auto& truth : family.locals_truth) {
        all.push_back(score_graph(estimate, truth, edge_threshold));
    }
    return average_metrics(all);
}

}  // namespace fedgl
