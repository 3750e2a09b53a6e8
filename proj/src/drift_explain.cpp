#include "driftcause/drift_explain.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "driftcause/errors.hpp"
#include "driftcause/state_space.hpp"

namespace driftcause {

namespace {

/// Nodes that could be parents of f in a PDAG: directed-in neighbors plus
/// undirected neighbors (orientation unknown).
std::set<int> possible_parents(const Pdag& g, int f) {
    std::set<int> out(g.parents(f));
    const auto& un = g.undirected_neighbors(f);
    out.insert(un.begin(), un.end());
    return out;
}

/// Reverse reachability over possible-parent steps.
std::set<int> possible_ancestors(const Pdag& g, int f) {
    std::set<int> seen;
    std::deque<int> queue(1, f);
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int p : possible_parents(g, v)) {
            if (p != f && seen.insert(p).second) queue.push_back(p);
        }
    }
    return seen;
}

std::set<int> directed_ancestors(const Pdag& g, int f) {
    std::set<int> seen;
    std::deque<int> queue(1, f);
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int p : g.parents(v)) {
            if (p != f && seen.insert(p).second) queue.push_back(p);
        }
    }
    return seen;
}

Explanation extract_sets(const Pdag& graph, int t, const std::vector<PcLogEntry>& log,
                         const std::vector<std::string>& conflicts) {
    Explanation ex;
    ex.graph = graph;
    ex.discovery_conflicts = conflicts;

    std::set<int> children(graph.children(t));
    std::set<int> undirected_time(graph.undirected_neighbors(t));
    std::set<int> c_all(children);
    c_all.insert(undirected_time.begin(), undirected_time.end());

    for (int f : c_all) {
        ex.children.insert(graph.name(f));
        if (undirected_time.count(f)) ex.ambiguous.insert(graph.name(f));
    }

    std::set<int> p_all;
    std::set<int> p_strict;
    std::set<int> a_all;
    std::set<int> a_strict;
    for (int f : c_all) {
        for (int p : possible_parents(graph, f)) p_all.insert(p);
        for (int p : graph.parents(f)) p_strict.insert(p);
        for (int a : possible_ancestors(graph, f)) a_all.insert(a);
        for (int a : directed_ancestors(graph, f)) a_strict.insert(a);
    }
    for (int p : p_all) {
        if (p == t || c_all.count(p)) continue;
        ex.conditional_parents.insert(graph.name(p));
        if (!p_strict.count(p)) ex.ambiguous.insert(graph.name(p));
    }
    for (int a : a_all) {
        if (a == t) continue;
        ex.ancestors.insert(graph.name(a));
        if (!a_strict.count(a)) ex.ambiguous.insert(graph.name(a));
    }

    // Evidence: how close each surviving time edge came to removal.
    for (const auto& entry : log) {
        const bool about_pair = (entry.x == t && c_all.count(entry.y)) ||
                                (entry.y == t && c_all.count(entry.x));
        if (!about_pair) continue;
        const std::string name = graph.name(entry.x == t ? entry.y : entry.x);
        auto [it, inserted] = ex.child_max_p.emplace(name, entry.result.p_value);
        if (!inserted) it->second = std::max(it->second, entry.result.p_value);
    }
    return ex;
}

}  // namespace

std::set<std::string> Explanation::ancestors_outside_children() const {
    std::set<std::string> out;
    for (const auto& a : ancestors) {
        if (!children.count(a)) out.insert(a);
    }
    return out;
}

Explanation explain_drift(const DriftStream& stream, const PcConfig& config) {
    GSquareTester tester(stream.records, config.alpha, config.adequacy_factor);
    return explain_drift(stream, config, tester);
}

Explanation explain_drift(const DriftStream& stream, const PcConfig& config,
                          const CiTester& tester) {
    if (!stream.records.has_column(stream.time_feature)) {
        throw DataError("explain_drift: stream has no time feature " + stream.time_feature);
    }
    if (stream.windows < 2) {
        throw DataError("explain_drift: stream needs at least two windows");
    }
    if (config.background_time && *config.background_time != stream.time_feature) {
        throw DataError("explain_drift: background feature does not match the stream's time feature");
    }
    auto result = pc(stream.records, tester, config);
    const int t = stream.records.column_index(stream.time_feature);
    return extract_sets(result.graph, t, result.log, result.conflicts);
}

Explanation ground_truth_sets(const Dag& truth, const std::string& time_name) {
    if (!truth.contains(time_name)) {
        throw DataError("ground_truth_sets: graph lacks the time feature " + time_name);
    }
    const int t = truth.index(time_name);
    if (!truth.parents(t).empty()) {
        throw DataError("ground_truth_sets: the time feature has parents; not a valid ground truth");
    }
    Explanation ex;
    ex.graph = Pdag::from_dag(truth);
    for (int f : truth.children(t)) {
        ex.children.insert(truth.name(f));
        for (int p : truth.parents(f)) {
            if (p != t && !truth.children(t).count(p)) {
                ex.conditional_parents.insert(truth.name(p));
            }
        }
        for (int a : truth.ancestors(f)) {
            if (a != t) ex.ancestors.insert(truth.name(a));
        }
    }
    return ex;
}

ReversalModel build_restricted_reversal(const CategoricalBayesNet& net, const std::string& time_name,
                                        int window, const std::set<int>& altered, std::size_t cap) {
    validate_or_throw(net);
    const auto& g = net.graph();
    if (!g.contains(time_name)) {
        throw DataError("build_reversal: net lacks the time feature " + time_name);
    }
    const int t = g.index(time_name);
    if (!g.parents(t).empty()) {
        throw DataError("build_reversal: the time feature must be a root");
    }
    if (window < 0 || window >= net.cardinality(t)) {
        throw DataError("build_reversal: window out of range");
    }
    for (int f : altered) {
        if (f == t) throw std::invalid_argument("build_reversal: cannot alter the time feature");
        g.name(f);
    }

    const auto joint = enumerate_joint(net, cap);
    {
        const auto time_marginal = marginal(joint, {t});
        if (time_marginal.probabilities()[static_cast<std::size_t>(window)] <= 0.0) {
            throw DataError("build_reversal: window has zero probability");
        }
    }

    // Old-index -> new-index map with the time node removed; relative order
    // of the data features is preserved.
    const int n = g.num_nodes();
    std::vector<int> remap(static_cast<std::size_t>(n), -1);
    std::vector<std::string> names;
    std::vector<int> cards;
    for (int f = 0; f < n; ++f) {
        if (f == t) continue;
        remap[static_cast<std::size_t>(f)] = static_cast<int>(names.size());
        names.push_back(g.name(f));
        cards.push_back(net.cardinality(f));
    }

    // Position in the topological order drives the child augmentation.
    const auto order = g.topological_order();
    std::vector<int> sigma(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < order.size(); ++i) sigma[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
    std::vector<int> altered_sorted(altered.begin(), altered.end());
    std::sort(altered_sorted.begin(), altered_sorted.end(),
              [&](int a, int b) { return sigma[static_cast<std::size_t>(a)] < sigma[static_cast<std::size_t>(b)]; });

    ReversalModel result;
    std::vector<std::pair<int, int>> edges;
    for (const auto& [u, v] : g.edges()) {
        if (u != t && v != t) {
            edges.emplace_back(remap[static_cast<std::size_t>(u)], remap[static_cast<std::size_t>(v)]);
        }
    }
    for (std::size_t i = 0; i < altered_sorted.size(); ++i) {
        for (std::size_t j = i + 1; j < altered_sorted.size(); ++j) {
            const int from = altered_sorted[i];
            const int to = altered_sorted[j];
            if (!g.has_edge(from, to)) {
                edges.emplace_back(remap[static_cast<std::size_t>(from)],
                                   remap[static_cast<std::size_t>(to)]);
                result.added_edges.emplace_back(g.name(from), g.name(to));
            }
        }
    }
    Dag stripped(names, edges);

    std::vector<Cpt> cpts(names.size());
    for (int f = 0; f < n; ++f) {
        if (f == t) continue;
        const int nf = remap[static_cast<std::size_t>(f)];
        const bool is_child_of_time = g.parents(f).count(t) > 0;
        if (!altered.count(f)) {
            if (!is_child_of_time) {
                cpts[static_cast<std::size_t>(nf)] = net.cpt(f);
            } else {
                // Unaltered child of time: the only time-free stand-in for its
                // kernel is the time-marginal one.
                std::vector<int> given;
                for (int p : g.parents(f)) {
                    if (p != t) given.push_back(p);
                }
                auto rows = conditional_kernel(joint, f, given);
                Cpt cpt;
                for (auto& row : rows) {
                    if (row.empty()) {
                        row.assign(static_cast<std::size_t>(net.cardinality(f)),
                                   1.0 / net.cardinality(f));
                    }
                    cpt.rows.push_back(std::move(row));
                }
                cpts[static_cast<std::size_t>(nf)] = std::move(cpt);
            }
            continue;
        }
        // Altered feature: parents in the new graph are its original non-time
        // parents plus every earlier altered feature; the kernel is the exact
        // window-conditioned conditional. Rows the window never reaches are
        // filled uniformly; they carry no probability under the model.
        std::vector<int> given;
        for (int p : stripped.parents(nf)) {
            // translate back to old indices for the joint lookup
            given.push_back(g.index(stripped.name(p)));
        }
        auto rows = conditional_kernel(joint, f, given, t, window);
        Cpt cpt;
        for (auto& row : rows) {
            if (row.empty()) {
                row.assign(static_cast<std::size_t>(net.cardinality(f)), 1.0 / net.cardinality(f));
            }
            cpt.rows.push_back(std::move(row));
        }
        cpts[static_cast<std::size_t>(nf)] = std::move(cpt);
        result.altered.insert(g.name(f));
    }

    result.model = CategoricalBayesNet(std::move(stripped), std::move(cards), std::move(cpts));
    validate_or_throw(result.model);
    return result;
}

ReversalModel build_reversal(const CategoricalBayesNet& net, const std::string& time_name, int window,
                             std::size_t cap) {
    if (!net.graph().contains(time_name)) {
        throw DataError("build_reversal: net lacks the time feature " + time_name);
    }
    const int t = net.graph().index(time_name);
    std::set<int> altered(net.graph().children(t));
    return build_restricted_reversal(net, time_name, window, altered, cap);
}

double verify_reversal(const CategoricalBayesNet& net, const std::string& time_name, int window,
                       const ReversalModel& model, std::size_t cap) {
    const auto joint = enumerate_joint(net, cap);
    const int t = joint.feature_index(time_name);
    const auto window_law = condition(joint, {{t, window}});
    const auto model_law = enumerate_joint(model.model, cap);
    return total_variation(window_law, model_law);
}

std::vector<KernelWitness> minimality_witness(const CategoricalBayesNet& net,
                                              const std::string& time_name, int preferred_window,
                                              std::size_t cap) {
    validate_or_throw(net);
    const auto& g = net.graph();
    if (!g.contains(time_name)) {
        throw DataError("minimality_witness: net lacks the time feature " + time_name);
    }
    const int t = g.index(time_name);
    if (!g.parents(t).empty()) {
        throw DataError("minimality_witness: the time feature must be a root");
    }
    const int windows = net.cardinality(t);
    if (preferred_window < 0 || preferred_window >= windows) {
        throw DataError("minimality_witness: window out of range");
    }
    const auto joint = enumerate_joint(net, cap);
    constexpr double kTolerance = 1e-9;

    std::vector<KernelWitness> out;
    for (int f : g.children(t)) {
        std::vector<int> given;
        for (int p : g.parents(f)) {
            if (p != t) given.push_back(p);
        }
        std::vector<int> given_cards;
        for (int p : given) given_cards.push_back(net.cardinality(p));
        const auto marginal_rows = conditional_kernel(joint, f, given);

        KernelWitness witness;
        witness.feature = g.name(f);
        witness.unfaithful = true;
        for (int step = 0; step < windows && witness.unfaithful; ++step) {
            const int w = (preferred_window + step) % windows;
            const auto windowed = conditional_kernel(joint, f, given, t, w);
            for (std::size_t r = 0; r < windowed.size() && witness.unfaithful; ++r) {
                if (windowed[r].empty() || marginal_rows[r].empty()) continue;
                for (std::size_t s = 0; s < windowed[r].size(); ++s) {
                    if (std::abs(windowed[r][s] - marginal_rows[r][s]) > kTolerance) {
                        witness.unfaithful = false;
                        witness.window = w;
                        witness.state = static_cast<int>(s);
                        witness.windowed = windowed[r][s];
                        witness.marginal = marginal_rows[r][s];
                        witness.parent_states.assign(given.size(), 0);
                        mixed_radix_decode(r, given_cards, witness.parent_states);
                        break;
                    }
                }
            }
        }
        out.push_back(std::move(witness));
    }
    return out;
}

}  // namespace driftcause
