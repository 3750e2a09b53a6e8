#ifndef DRIFTCAUSE_EVALUATION_HPP
#define DRIFTCAUSE_EVALUATION_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "driftcause/drift_explain.hpp"
#include "driftcause/drift_stream.hpp"
#include "driftcause/graph.hpp"
#include "driftcause/pc.hpp"

namespace driftcause {

struct EvalConfig {
    PcConfig pc;
    /// Replace the g-square tester with the d-separation oracle on the truth
    /// graph (ceiling runs).
    bool use_oracle = false;
};

struct RunRecord {
    std::uint64_t seed = 0;
    bool failed = false;
    std::string error;
    EdgeDiff edge_diff;
    Explanation explanation;
    /// Wall-clock cost of the run. Diagnostic only: excluded from canonical
    /// serialization so reports stay byte-reproducible.
    double wall_seconds = 0.0;
};

/// Canonical string for an aggregated found edge: "u->v" or "a--b" (min-max).
std::string edge_key(const std::string& from, const std::string& to, bool directed);

struct RunReport {
    std::uint64_t base_seed = 0;
    int runs_requested = 0;
    std::vector<RunRecord> runs;

    /// Count of runs whose explanation lists the feature among the children
    /// of the time node (undirected time-adjacency included).
    std::map<std::string, int> child_counts;
    std::map<std::string, int> parent_counts;
    std::map<std::string, int> ancestor_counts;
    /// Count of runs detecting each found edge, keyed by edge_key.
    std::map<std::string, int> edge_counts;
    int failed_runs = 0;
};

/// Repeats the whole pipeline `runs` times: stream from seed base_seed + i,
/// discovery, explanation, edge comparison against the truth graph. A failed
/// run is recorded, not fatal.
RunReport run_experiment(const ScenarioSpec& spec, const Dag& truth, int runs,
                         const EvalConfig& config);

/// Fraction of runs in which the feature was reported as a child of time.
double detection_rate(const RunReport& report, const std::string& feature);

struct RenderedReport {
    std::string dot;
    std::string text;
};

/// Annotated DOT (truth edges in black, detections in green with thickness
/// proportional to detection count, children of time highlighted) plus a
/// plain-text table of edge classifications and detection rates.
RenderedReport render_report(const RunReport& report, const Dag& truth,
                             const std::string& time_name = kTimeFeatureName);

}  // namespace driftcause

#endif  // DRIFTCAUSE_EVALUATION_HPP
