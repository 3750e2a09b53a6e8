#ifndef DRIFTCAUSE_DRIFT_STREAM_HPP
#define DRIFTCAUSE_DRIFT_STREAM_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "driftcause/bayes_net.hpp"
#include "driftcause/data_table.hpp"

namespace driftcause {

inline constexpr const char* kTimeFeatureName = "__time__";

/// Timestamped record table: data features plus one discrete time column
/// holding the window index of each record.
struct DriftStream {
    DataTable records;
    std::string time_feature = kTimeFeatureName;
    int windows = 0;
    /// Sample indices where the generating distribution switches.
    std::vector<std::size_t> drift_points;

    int time_column() const { return records.column_index(time_feature); }
};

/// Recipe for an abrupt-drift stream: a base net, per-feature CPT
/// replacements active after the drift point, and sampling counts.
struct ScenarioSpec {
    CategoricalBayesNet base_net;
    std::vector<std::pair<std::string, Cpt>> modifications;
    std::size_t pre_count = 0;
    std::size_t post_count = 0;
    std::uint64_t seed = 0;
    int windows = 2;
    /// With two windows (the default) the window boundary sits exactly at the
    /// drift point; turning this off falls back to uniform windowing, which
    /// may misalign when pre_count != post_count.
    bool align_drift_to_window = true;
};

/// The base net with all scenario modifications applied.
CategoricalBayesNet modified_net(const ScenarioSpec& spec);

/// pre_count samples from the base net followed by post_count samples from
/// the modified net, time attached per the scenario's windowing. Deterministic
/// under the scenario seed.
DriftStream build_stream(const ScenarioSpec& spec);

/// Adds the time feature: record i gets window floor(i * windows / n).
/// Requires windows >= 2 and at least `windows` records.
DriftStream attach_time(const DataTable& records, int windows);

/// Exactly the records of window w (full schema, time column included).
DataTable window_slice(const DriftStream& stream, int w);

struct DiscretizeResult {
    std::vector<int> codes;
    /// Interior cut points; value v falls in bin #{edges <= v} (left-closed).
    std::vector<double> edges;
    int cardinality = 0;
    bool constant_column = false;
};

/// Quantile discretization into at most `bins` categories; ties collapse
/// empty bins, so the resulting cardinality may be smaller than requested.
DiscretizeResult discretize(std::span<const double> values, int bins);

/// The scenario's holistic law as an explicit net: data features plus a root
/// time feature whose children are the modified features (pre rows at time 0,
/// post rows at time 1). Requires the aligned two-window configuration, where
/// stream records are distributed exactly as this net's samples.
CategoricalBayesNet time_augmented_net(const ScenarioSpec& spec,
                                       const std::string& time_name = kTimeFeatureName);

/// Ground-truth graph over data features plus the time node: base edges plus
/// one edge from time to every modified feature.
Dag scenario_truth_graph(const ScenarioSpec& spec,
                         const std::string& time_name = kTimeFeatureName);

}  // namespace driftcause

#endif  // DRIFTCAUSE_DRIFT_STREAM_HPP
