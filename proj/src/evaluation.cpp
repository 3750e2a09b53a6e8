#include "driftcause/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>

#include "driftcause/ci_test.hpp"
#include "driftcause/errors.hpp"

namespace driftcause {

std::string edge_key(const std::string& from, const std::string& to, bool directed) {
    if (directed) return from + "->" + to;
    return std::min(from, to) + "--" + std::max(from, to);
}

RunReport run_experiment(const ScenarioSpec& spec, const Dag& truth, int runs,
                         const EvalConfig& config) {
    if (runs < 1) throw std::invalid_argument("run_experiment: need at least one run");
    for (const auto& name : spec.base_net.graph().node_names()) {
        if (!truth.contains(name)) {
            throw DataError("run_experiment: truth graph lacks scenario feature " + name);
        }
    }
    RunReport report;
    report.base_seed = spec.seed;
    report.runs_requested = runs;

    for (int i = 0; i < runs; ++i) {
        RunRecord record;
        record.seed = spec.seed + static_cast<std::uint64_t>(i);
        const auto started = std::chrono::steady_clock::now();
        try {
            ScenarioSpec run_spec = spec;
            run_spec.seed = record.seed;
            const auto stream = build_stream(run_spec);
            if (config.use_oracle) {
                OracleTester oracle(truth, stream.records.column_names());
                record.explanation = explain_drift(stream, config.pc, oracle);
            } else {
                record.explanation = explain_drift(stream, config.pc);
            }
            record.edge_diff = compare_edges(truth, record.explanation.graph);
        } catch (const std::exception& e) {
            record.failed = true;
            record.error = e.what();
            ++report.failed_runs;
        }
        record.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

        if (!record.failed) {
            for (const auto& f : record.explanation.children) ++report.child_counts[f];
            for (const auto& f : record.explanation.conditional_parents) ++report.parent_counts[f];
            for (const auto& f : record.explanation.ancestors) ++report.ancestor_counts[f];
            for (const auto& [u, v] : record.explanation.graph.directed_edges()) {
                ++report.edge_counts[edge_key(record.explanation.graph.name(u),
                                              record.explanation.graph.name(v), true)];
            }
            for (const auto& [a, b] : record.explanation.graph.undirected_edges()) {
                ++report.edge_counts[edge_key(record.explanation.graph.name(a),
                                              record.explanation.graph.name(b), false)];
            }
        }
        report.runs.push_back(std::move(record));
    }
    return report;
}

double detection_rate(const RunReport& report, const std::string& feature) {
    bool known = false;
    for (const auto& record : report.runs) {
        if (record.failed) continue;
        if (record.explanation.graph.contains(feature)) known = true;
        break;
    }
    if (!known && report.child_counts.count(feature) == 0) {
        throw DataError("detection_rate: unknown feature " + feature);
    }
    const auto it = report.child_counts.find(feature);
    const int hits = it == report.child_counts.end() ? 0 : it->second;
    return static_cast<double>(hits) / static_cast<double>(report.runs_requested);
}

RenderedReport render_report(const RunReport& report, const Dag& truth,
                             const std::string& time_name) {
    const int runs = report.runs_requested;
    DotOptions options;
    options.graph_name = "report";
    options.extra_statements.push_back("rankdir=LR;");

    // Truth edges in black; detection counts control the green overlay.
    Pdag canvas = Pdag::from_dag(truth);
    std::set<std::string> truth_keys;
    for (const auto& [u, v] : truth.edges()) {
        truth_keys.insert(edge_key(truth.name(u), truth.name(v), true));
        truth_keys.insert(edge_key(truth.name(u), truth.name(v), false));
    }
    for (const auto& [key, count] : report.edge_counts) {
        const auto arrow = key.find("->");
        const bool directed = arrow != std::string::npos;
        const auto sep = directed ? arrow : key.find("--");
        const std::string from = key.substr(0, sep);
        const std::string to = key.substr(sep + 2);
        const double width = 0.5 + 2.5 * static_cast<double>(count) / std::max(1, runs);
        std::ostringstream attrs;
        attrs << "color=green, penwidth=" << width << ", label=\"" << count << "/" << runs << "\"";
        if (!truth.contains(from) || !truth.contains(to)) continue;
        const int fu = canvas.index(from);
        const int fv = canvas.index(to);
        if (!canvas.adjacent(fu, fv)) {
            if (directed) {
                canvas.add_directed(fu, fv);
            } else {
                canvas.add_undirected(fu, fv);
            }
            options.edge_attrs[{from, to}] = attrs.str();
        } else if (directed && canvas.has_directed(fu, fv)) {
            // detected in the truth direction: restyle the truth edge
            options.edge_attrs[{from, to}] = attrs.str();
        } else {
            // adjacency exists with a different type; annotate the truth pair
            std::string tf = truth.name(std::min(fu, fv));
            std::string tt = truth.name(std::max(fu, fv));
            if (truth.has_edge(truth.index(from), truth.index(to))) {
                tf = from;
                tt = to;
            } else if (truth.contains(to) && truth.contains(from) &&
                       truth.has_edge(truth.index(to), truth.index(from))) {
                tf = to;
                tt = from;
            }
            options.edge_attrs[{tf, tt}] =
                "color=\"black:green\", label=\"" + std::to_string(count) + "/" +
                std::to_string(runs) + (directed ? " rev" : " undir") + "\"";
        }
    }
    const int t = truth.contains(time_name) ? truth.index(time_name) : -1;
    if (t >= 0) {
        options.node_attrs[time_name] = "shape=doublecircle";
        for (int child : truth.children(t)) {
            const auto it = report.child_counts.find(truth.name(child));
            const int count = it == report.child_counts.end() ? 0 : it->second;
            std::ostringstream attrs;
            attrs << "color=green, penwidth=" << (0.5 + 2.5 * static_cast<double>(count) / std::max(1, runs))
                  << ", xlabel=\"" << count << "/" << runs << "\"";
            options.node_attrs[truth.name(child)] = attrs.str();
        }
    }

    RenderedReport rendered;
    rendered.dot = to_dot(canvas, options);

    std::ostringstream text;
    text << "runs: " << runs << " (failed: " << report.failed_runs << ")\n";
    int correct = 0;
    int reversed = 0;
    int missing = 0;
    int extra = 0;
    int counted = 0;
    for (const auto& record : report.runs) {
        if (record.failed) continue;
        correct += record.edge_diff.correct;
        reversed += record.edge_diff.reversed;
        missing += record.edge_diff.missing;
        extra += record.edge_diff.extra;
        ++counted;
    }
    text << "edge classification totals over " << counted << " runs: correct " << correct
         << ", reversed " << reversed << ", missing " << missing << ", extra " << extra << "\n";
    text << "detection rates (child of " << time_name << "):\n";
    if (t >= 0) {
        for (int child : truth.children(t)) {
            const auto& name = truth.name(child);
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.2f", detection_rate(report, name));
            text << "  " << name << ": " << buf << "\n";
        }
    }
    for (const auto& [name, count] : report.child_counts) {
        if (t >= 0 && truth.children(t).count(truth.index(name))) continue;
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.2f", static_cast<double>(count) / std::max(1, runs));
        text << "  " << name << ": " << buf << " (not a true child)\n";
    }
    rendered.text = text.str();
    return rendered;
}

}  // namespace driftcause
