#include "driftcause/pc.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "driftcause/errors.hpp"

namespace driftcause {

bool SepsetMap::contains(int a, int b, int v) const {
    const auto it = sets.find(key(a, b));
    if (it == sets.end()) return false;
    return std::find(it->second.begin(), it->second.end(), v) != it->second.end();
}

namespace {

std::string query_string(const DataTable& data, int x, int y, const std::vector<int>& z) {
    std::ostringstream os;
    os << data.column_name(x) << " _||_ " << data.column_name(y) << " | {";
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (i) os << ", ";
        os << data.column_name(z[i]);
    }
    os << "}";
    return os.str();
}

/// Enumerates all size-k subsets of `pool` (which is sorted ascending) in
/// lexicographic order, invoking fn until it returns true. Returns whether fn
/// ever returned true.
bool for_each_subset(const std::vector<int>& pool, int k,
                     const std::function<bool(const std::vector<int>&)>& fn) {
    const int n = static_cast<int>(pool.size());
    if (k > n) return false;
    std::vector<int> pick(static_cast<std::size_t>(k));
    std::vector<int> subset(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i;
    while (true) {
        for (int i = 0; i < k; ++i) {
            subset[static_cast<std::size_t>(i)] = pool[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])];
        }
        if (fn(subset)) return true;
        int i = k - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - k + i) --i;
        if (i < 0) return false;
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) {
            pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
}

// True when orienting u -> v would close a directed cycle, i.e. v already
// reaches u through directed edges.
bool would_create_cycle(const Pdag& g, int u, int v) {
    std::deque<int> queue{v};
    std::set<int> seen;
    while (!queue.empty()) {
        int w = queue.front();
        queue.pop_front();
        if (w == u) return true;
        if (!seen.insert(w).second) continue;
        for (int c : g.children(w)) queue.push_back(c);
    }
    return false;
}

}  // namespace

std::pair<Pdag, SepsetMap> pc_skeleton(const DataTable& data, const CiTester& tester,
                                       const PcConfig& config, std::vector<PcLogEntry>* log) {
    const int n = data.num_columns();
    if (n < 2) throw std::invalid_argument("pc_skeleton: need at least two features");

    Pdag graph = Pdag::complete_undirected(data.column_names());
    SepsetMap sepsets;

    auto run_test = [&](int x, int y, const std::vector<int>& z) {
        CiResult result;
        try {
            result = tester.test(x, y, z);
        } catch (const std::exception& e) {
            throw DataError(std::string("CI test failed on query ") + query_string(data, x, y, z) +
                            ": " + e.what());
        }
        if (log) log->push_back({x, y, z, result, result.independent ? "remove" : "keep"});
        return result;
    };

    for (int level = 0;; ++level) {
        if (config.max_cond_size >= 0 && level > config.max_cond_size) break;

        // Neighborhood snapshot: with stable=on, conditioning sets for the
        // whole level are drawn from these, so removals inside the level
        // cannot influence it and the output is order-independent.
        std::vector<std::vector<int>> snapshot(static_cast<std::size_t>(n));
        bool any_candidate = false;
        for (int v = 0; v < n; ++v) {
            auto adj = graph.adjacencies(v);
            snapshot[static_cast<std::size_t>(v)].assign(adj.begin(), adj.end());
            if (static_cast<int>(adj.size()) - 1 >= level) any_candidate = true;
        }
        if (!any_candidate) break;

        for (int x = 0; x < n; ++x) {
            for (int y = x + 1; y < n; ++y) {
                if (!graph.adjacent(x, y)) continue;
                bool removed = false;
                for (int side = 0; side < 2 && !removed; ++side) {
                    if (level == 0 && side == 1) break;  // empty set tested once
                    const int anchor = side == 0 ? x : y;
                    const int other = side == 0 ? y : x;
                    std::vector<int> pool;
                    const auto& neighborhood = config.stable
                                                   ? snapshot[static_cast<std::size_t>(anchor)]
                                                   : [&] {
                                                         auto adj = graph.adjacencies(anchor);
                                                         return std::vector<int>(adj.begin(), adj.end());
                                                     }();
                    for (int v : neighborhood) {
                        if (v != other) pool.push_back(v);
                    }
                    if (static_cast<int>(pool.size()) < level) continue;
                    removed = for_each_subset(pool, level, [&](const std::vector<int>& subset) {
                        const auto result = run_test(x, y, subset);
                        if (result.independent) {
                            graph.remove_adjacency(x, y);
                            sepsets.put(x, y, subset);
                            return true;
                        }
                        return false;
                    });
                }
            }
        }
    }
    return {std::move(graph), std::move(sepsets)};
}

Pdag orient_v_structures(const Pdag& skeleton, const SepsetMap& sepsets,
                         std::optional<int> forbidden_head,
                         std::vector<std::string>* conflicts) {
    Pdag graph = skeleton;
    const int n = graph.num_nodes();

    auto try_orient = [&](int from, int into, int center_x, int center_y) {
        if (forbidden_head && into == *forbidden_head) return;  // background suppression
        if (graph.has_directed(from, into)) return;
        if (graph.has_directed(into, from)) {
            // First orientation stands; record the disagreement.
            if (conflicts) {
                std::ostringstream os;
                os << "v-structure " << graph.name(center_x) << " -> " << graph.name(into)
                   << " <- " << graph.name(center_y) << " conflicts with existing "
                   << graph.name(into) << " -> " << graph.name(from);
                conflicts->push_back(os.str());
            }
            return;
        }
        if (graph.has_undirected(from, into)) graph.orient(from, into);
    };

    for (int z = 0; z < n; ++z) {
        const auto adj = graph.adjacencies(z);
        for (auto itx = adj.begin(); itx != adj.end(); ++itx) {
            for (auto ity = std::next(itx); ity != adj.end(); ++ity) {
                const int x = *itx;
                const int y = *ity;
                if (graph.adjacent(x, y)) continue;        // shielded
                if (!sepsets.has(x, y)) continue;          // nothing recorded for the pair
                if (sepsets.contains(x, y, z)) continue;   // z separates: not a collider
                try_orient(x, z, x, y);
                try_orient(y, z, x, y);
            }
        }
    }
    return graph;
}

Pdag meek_rules(const Pdag& pdag, std::optional<int> forbidden_head) {
    Pdag graph = pdag;
    const int n = graph.num_nodes();

    auto orient = [&](int u, int v) {
        if (forbidden_head && v == *forbidden_head) return false;
        if (!graph.has_undirected(u, v)) return false;
        if (would_create_cycle(graph, u, v)) return false;
        graph.orient(u, v);
        return true;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (int a = 0; a < n; ++a) {
            // R1: a -> b - c with a, c nonadjacent orients b -> c.
            for (int b : graph.children(a)) {
                for (int c : std::set<int>(graph.undirected_neighbors(b))) {
                    if (c != a && !graph.adjacent(a, c)) changed |= orient(b, c);
                }
            }
            // R2: a -> b -> c with a - c orients a -> c.
            for (int c : std::set<int>(graph.undirected_neighbors(a))) {
                bool chain = false;
                for (int b : graph.children(a)) {
                    if (graph.has_directed(b, c)) {
                        chain = true;
                        break;
                    }
                }
                if (chain) changed |= orient(a, c);
            }
            // R3: a - b, a - c, a - d, c -> b, d -> b, c and d nonadjacent
            // orients a -> b.
            for (int b : std::set<int>(graph.undirected_neighbors(a))) {
                const auto& ua = graph.undirected_neighbors(a);
                std::vector<int> into_b;
                for (int c : ua) {
                    if (c != b && graph.has_directed(c, b)) into_b.push_back(c);
                }
                bool fires = false;
                for (std::size_t i = 0; i < into_b.size() && !fires; ++i) {
                    for (std::size_t j = i + 1; j < into_b.size() && !fires; ++j) {
                        if (!graph.adjacent(into_b[i], into_b[j])) fires = true;
                    }
                }
                if (fires) changed |= orient(a, b);
            }
            // R4: a - b, a adjacent to d, d -> c -> b, d and b nonadjacent
            // orients a -> b.
            for (int b : std::set<int>(graph.undirected_neighbors(a))) {
                bool fires = false;
                for (int d : graph.adjacencies(a)) {
                    if (d == b || graph.adjacent(d, b)) continue;
                    for (int c : graph.children(d)) {
                        if (c != a && c != b && graph.has_directed(c, b)) {
                            fires = true;
                            break;
                        }
                    }
                    if (fires) break;
                }
                if (fires) changed |= orient(a, b);
            }
        }
    }
    return graph;
}

PcResult pc(const DataTable& data, const CiTester& tester, const PcConfig& config) {
    PcResult result;
    auto [skeleton, sepsets] = pc_skeleton(data, tester, config, &result.log);

    std::optional<int> t;
    if (config.background_time) {
        if (!data.has_column(*config.background_time)) {
            throw DataError("pc: background time feature " + *config.background_time +
                            " is not a column of the data");
        }
        t = data.column_index(*config.background_time);
        // Causeless background knowledge: every adjacency of the time feature
        // leaves it.
        for (int f : std::set<int>(skeleton.undirected_neighbors(*t))) {
            skeleton.orient(*t, f);
        }
    }

    Pdag oriented = orient_v_structures(skeleton, sepsets, t, &result.conflicts);
    result.graph = meek_rules(oriented, t);
    result.sepsets = std::move(sepsets);
    return result;
}

}  // namespace driftcause
