#ifndef DRIFTCAUSE_PC_HPP
#define DRIFTCAUSE_PC_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "driftcause/ci_test.hpp"
#include "driftcause/data_table.hpp"
#include "driftcause/graph.hpp"

namespace driftcause {

struct PcConfig {
    double alpha = 0.05;
    /// Largest conditioning-set size tried; negative means unbounded.
    int max_cond_size = -1;
    /// Name of the causeless feature, if any: its adjacencies are oriented
    /// away from it between the skeleton and orientation phases, and no rule
    /// may orient an edge into it.
    std::optional<std::string> background_time;
    /// Order-independent skeleton phase (neighborhoods snapshotted per
    /// conditioning-set size).
    bool stable = true;
    double adequacy_factor = 10.0;
};

/// Separating sets recorded during the skeleton phase, keyed by unordered
/// pair (min, max).
struct SepsetMap {
    std::map<std::pair<int, int>, std::vector<int>> sets;

    bool has(int a, int b) const { return sets.count(key(a, b)) > 0; }
    const std::vector<int>& get(int a, int b) const { return sets.at(key(a, b)); }
    void put(int a, int b, std::vector<int> z) { sets[key(a, b)] = std::move(z); }
    bool contains(int a, int b, int v) const;

    static std::pair<int, int> key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }
};

/// One audited CI query: what was asked, what the tester said, what the
/// algorithm did about it.
struct PcLogEntry {
    int x = 0;
    int y = 0;
    std::vector<int> z;
    CiResult result;
    std::string action;
};

struct PcResult {
    Pdag graph;
    SepsetMap sepsets;
    std::vector<PcLogEntry> log;
    /// Human-readable records of v-structure orientation conflicts.
    std::vector<std::string> conflicts;
};

/// Adjacency search: starts from the complete graph and removes the edge
/// (x, y) on the first accepted independence, conditioning on all subsets
/// (size 0, 1, 2, ...) of the neighborhoods of x and of y. Subsets are
/// enumerated lexicographically by node index.
std::pair<Pdag, SepsetMap> pc_skeleton(const DataTable& data, const CiTester& tester,
                                       const PcConfig& config,
                                       std::vector<PcLogEntry>* log = nullptr);

/// Orients every unshielded triple x - z - y with z outside sepset(x, y) as
/// x -> z <- y. A later orientation never overwrites an earlier conflicting
/// one; conflicts are reported. With `forbidden_head` set, orientations into
/// that node are suppressed.
Pdag orient_v_structures(const Pdag& skeleton, const SepsetMap& sepsets,
                         std::optional<int> forbidden_head = std::nullopt,
                         std::vector<std::string>* conflicts = nullptr);

/// Meek rules R1-R4 applied to a fixed point. Orientations into
/// `forbidden_head` are suppressed.
Pdag meek_rules(const Pdag& pdag, std::optional<int> forbidden_head = std::nullopt);

/// Full PC: skeleton, background-time orientation, v-structures, Meek rules.
PcResult pc(const DataTable& data, const CiTester& tester, const PcConfig& config);

}  // namespace driftcause

#endif  // DRIFTCAUSE_PC_HPP
