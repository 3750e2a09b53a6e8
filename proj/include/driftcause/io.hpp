#ifndef DRIFTCAUSE_IO_HPP
#define DRIFTCAUSE_IO_HPP

#include <filesystem>
#include <optional>
#include <string>

#include "driftcause/bayes_net.hpp"
#include "driftcause/drift_explain.hpp"
#include "driftcause/drift_stream.hpp"
#include "driftcause/evaluation.hpp"

namespace driftcause {

inline constexpr int kNetSchemaVersion = 1;
inline constexpr int kScenarioSchemaVersion = 1;

struct LoadedNet {
    CategoricalBayesNet net;
    std::optional<std::string> time_feature;
};

/// Net specification files: JSON with feature list (name + state labels),
/// edge list, CPT rows in the fixed lexicographic parent-state order, and an
/// optional time-feature designation. save followed by load is the identity;
/// canonical files round-trip byte-stably.
LoadedNet load_net(const std::filesystem::path& path);
void save_net(const CategoricalBayesNet& net, const std::optional<std::string>& time_feature,
              const std::filesystem::path& path);
std::string net_to_string(const CategoricalBayesNet& net,
                          const std::optional<std::string>& time_feature);
LoadedNet net_from_string(const std::string& text, const std::string& origin = "<string>");

/// Graph-only variant: a net file without the "cpts" block parses to its DAG.
Dag load_graph(const std::filesystem::path& path);

/// Scenario files reference the base net by path (resolved relative to the
/// scenario file's directory) and list CPT replacement blocks.
ScenarioSpec load_scenario(const std::filesystem::path& path);
void save_scenario(const ScenarioSpec& spec, const std::filesystem::path& base_net_path,
                   const std::filesystem::path& path);

/// Stream CSV: header row, integer state codes, time column "__time__".
/// Loading infers cardinalities from the data and requires the time column
/// to be a front-to-back window index (nondecreasing, starting at 0, no
/// gaps).
void save_stream_csv(const DriftStream& stream, const std::filesystem::path& path);
DriftStream load_stream_csv(const std::filesystem::path& path);

/// Canonical serializations (sorted keys, stable number formatting): byte
/// identical across repeated runs with identical seeds and flags.
std::string serialize_explanation(const Explanation& ex);
std::string serialize_report(const RunReport& report);
std::string serialize_run_log(const std::vector<PcLogEntry>& log, const DataTable& data);

/// Command-line front end; returns the process exit status
/// (0 ok, 1 usage, 2 data error, 3 internal error).
int run_cli(int argc, const char* const* argv);

}  // namespace driftcause

#endif  // DRIFTCAUSE_IO_HPP
