#include "driftcause/drift_stream.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "driftcause/errors.hpp"

namespace driftcause {

CategoricalBayesNet modified_net(const ScenarioSpec& spec) {
    CategoricalBayesNet net = spec.base_net;
    for (const auto& [feature, cpt] : spec.modifications) {
        net = modify_cpt(net, feature, cpt);
    }
    return net;
}

DriftStream build_stream(const ScenarioSpec& spec) {
    validate_or_throw(spec.base_net);
    if (spec.windows < 2) throw std::invalid_argument("build_stream: windows must be >= 2");
    if (spec.base_net.graph().contains(kTimeFeatureName)) {
        throw DataError("build_stream: base net already uses the reserved time feature name");
    }
    const auto post_net = modified_net(spec);

    DataTable pre = sample(spec.base_net, spec.pre_count, spec.seed);
    DataTable post = sample(post_net, spec.post_count, spec.seed ^ 0xd1f7c0de5eedULL);
    pre.append_rows(post);

    const std::size_t n = pre.num_rows();
    DriftStream stream;
    stream.windows = spec.windows;
    stream.drift_points = {spec.pre_count};
    if (n == 0) {
        stream.records = pre.with_column(kTimeFeatureName, spec.windows, {});
        return stream;
    }

    if (spec.align_drift_to_window && spec.windows == 2) {
        std::vector<int> time(n, 0);
        for (std::size_t i = spec.pre_count; i < n; ++i) time[i] = 1;
        stream.records = pre.with_column(kTimeFeatureName, 2, std::move(time));
        return stream;
    }
    DriftStream uniform = attach_time(pre, spec.windows);
    uniform.drift_points = {spec.pre_count};
    return uniform;
}

DriftStream attach_time(const DataTable& records, int windows) {
    if (windows < 2) throw std::invalid_argument("attach_time: windows must be >= 2");
    const std::size_t n = records.num_rows();
    if (n < static_cast<std::size_t>(windows)) {
        throw DataError("attach_time: fewer records than windows");
    }
    if (records.has_column(kTimeFeatureName)) {
        throw DataError("attach_time: records already carry a time column");
    }
    std::vector<int> time(n);
    for (std::size_t i = 0; i < n; ++i) {
        time[i] = static_cast<int>((i * static_cast<std::size_t>(windows)) / n);
    }
    DriftStream stream;
    stream.windows = windows;
    stream.records = records.with_column(kTimeFeatureName, windows, std::move(time));
    return stream;
}

DataTable window_slice(const DriftStream& stream, int w) {
    if (w < 0 || w >= stream.windows) throw std::invalid_argument("window_slice: window out of range");
    const auto& time = stream.records.column(stream.time_column());
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < time.size(); ++i) {
        if (time[i] == w) rows.push_back(i);
    }
    return stream.records.select_rows(rows);
}

DiscretizeResult discretize(std::span<const double> values, int bins) {
    if (bins < 2) throw std::invalid_argument("discretize: bins must be >= 2");
    if (values.empty()) throw std::invalid_argument("discretize: empty column");
    for (double v : values) {
        if (std::isnan(v)) throw DataError("discretize: NaN value");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    DiscretizeResult result;
    const std::size_t n = sorted.size();
    // Candidate cut points at the k/bins order statistics; cuts at or below
    // the minimum would create an empty first bin and are dropped, as are
    // duplicates caused by ties.
    for (int k = 1; k < bins; ++k) {
        const double edge = sorted[(n * static_cast<std::size_t>(k)) / static_cast<std::size_t>(bins)];
        if (edge > sorted.front() && (result.edges.empty() || edge > result.edges.back())) {
            result.edges.push_back(edge);
        }
    }
    result.cardinality = static_cast<int>(result.edges.size()) + 1;
    result.constant_column = sorted.front() == sorted.back();
    result.codes.reserve(values.size());
    for (double v : values) {
        const auto it = std::upper_bound(result.edges.begin(), result.edges.end(), v);
        result.codes.push_back(static_cast<int>(it - result.edges.begin()));
    }
    return result;
}

CategoricalBayesNet time_augmented_net(const ScenarioSpec& spec, const std::string& time_name) {
    validate_or_throw(spec.base_net);
    if (!(spec.align_drift_to_window && spec.windows == 2)) {
        throw DataError("time_augmented_net: defined only for the aligned two-window scenario");
    }
    if (spec.pre_count + spec.post_count == 0) {
        throw DataError("time_augmented_net: scenario has no samples");
    }
    const auto& base = spec.base_net;
    const auto& g = base.graph();
    if (g.contains(time_name)) throw DataError("time_augmented_net: name collision on " + time_name);
    const auto post_net = modified_net(spec);

    std::vector<std::string> nodes = g.node_names();
    nodes.push_back(time_name);
    const int t = static_cast<int>(nodes.size()) - 1;

    std::set<int> modified;
    for (const auto& [feature, cpt] : spec.modifications) {
        (void)cpt;
        modified.insert(g.index(feature));
    }
    std::vector<std::pair<int, int>> edges = g.edges();
    for (int f : modified) edges.emplace_back(t, f);
    Dag timed(nodes, edges);

    std::vector<int> cards = base.cardinalities();
    cards.push_back(2);

    // Time has the highest index, so it is the fastest-varying digit of every
    // child's row index: rows interleave as (pre, post) per parent config.
    std::vector<Cpt> cpts;
    for (int f = 0; f < g.num_nodes(); ++f) {
        if (!modified.count(f)) {
            cpts.push_back(base.cpt(f));
            continue;
        }
        const auto& pre_rows = base.cpt(f).rows;
        const auto& post_rows = post_net.cpt(f).rows;
        Cpt interleaved;
        interleaved.rows.reserve(pre_rows.size() * 2);
        for (std::size_t r = 0; r < pre_rows.size(); ++r) {
            interleaved.rows.push_back(pre_rows[r]);
            interleaved.rows.push_back(post_rows[r]);
        }
        cpts.push_back(std::move(interleaved));
    }
    const double total = static_cast<double>(spec.pre_count + spec.post_count);
    cpts.push_back(Cpt{{{static_cast<double>(spec.pre_count) / total,
                         static_cast<double>(spec.post_count) / total}}});

    CategoricalBayesNet out(std::move(timed), std::move(cards), std::move(cpts));
    validate_or_throw(out);
    return out;
}

Dag scenario_truth_graph(const ScenarioSpec& spec, const std::string& time_name) {
    const auto& g = spec.base_net.graph();
    std::vector<std::string> nodes = g.node_names();
    nodes.push_back(time_name);
    const int t = static_cast<int>(nodes.size()) - 1;
    std::set<int> modified;
    for (const auto& [feature, cpt] : spec.modifications) {
        (void)cpt;
        modified.insert(g.index(feature));
    }
    std::vector<std::pair<int, int>> edges = g.edges();
    for (int f : modified) edges.emplace_back(t, f);
    return Dag(nodes, edges);
}

}  // namespace driftcause
