#ifndef DRIFTCAUSE_GRAPH_HPP
#define DRIFTCAUSE_GRAPH_HPP

#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace driftcause {

/// Directed acyclic graph over named features. Nodes carry a dense index
/// assigned at construction (position in the node list); all structural
/// queries are index-based and deterministic. Immutable once built.
class Dag {
public:
    Dag() = default;
    explicit Dag(std::vector<std::string> nodes);
    Dag(std::vector<std::string> nodes, const std::vector<std::pair<int, int>>& edges);
    Dag(std::vector<std::string> nodes,
        const std::vector<std::pair<std::string, std::string>>& edges);

    int num_nodes() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& node_names() const { return names_; }
    const std::string& name(int idx) const;
    int index(const std::string& node) const;
    bool contains(const std::string& node) const { return index_.count(node) > 0; }

    int num_edges() const { return edge_count_; }
    bool has_edge(int parent, int child) const;
    /// All edges as (parent, child), sorted.
    std::vector<std::pair<int, int>> edges() const;

    const std::set<int>& children(int f) const;
    const std::set<int>& parents(int f) const;
    /// Transitive closure of parents, excluding f itself.
    std::set<int> ancestors(int f) const;
    std::set<int> descendants(int f) const;

    /// Deterministic topological order: Kahn's algorithm with ties broken by
    /// node index, ascending.
    std::vector<int> topological_order() const;

    /// d-separation of x and y given z, via the reachability formulation.
    /// Preconditions: x != y, neither x nor y is in z.
    bool d_separated(int x, int y, const std::set<int>& z) const;

    bool operator==(const Dag& other) const;

private:
    int check(int idx) const;
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> index_;
    std::vector<std::set<int>> children_;
    std::vector<std::set<int>> parents_;
    int edge_count_ = 0;
};

/// Partially directed graph: the output shape of constraint-based discovery.
/// Directed and undirected edge sets are disjoint as adjacencies.
class Pdag {
public:
    Pdag() = default;
    explicit Pdag(std::vector<std::string> nodes);
    static Pdag complete_undirected(std::vector<std::string> nodes);
    static Pdag from_dag(const Dag& g);

    int num_nodes() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& node_names() const { return names_; }
    const std::string& name(int idx) const;
    int index(const std::string& node) const;
    bool contains(const std::string& node) const { return index_.count(node) > 0; }

    void add_directed(int u, int v);
    void add_undirected(int a, int b);
    void remove_adjacency(int a, int b);
    /// Turns the undirected edge u--v into u->v. No-op when u->v already
    /// holds; throws if the adjacency is absent or directed v->u.
    void orient(int u, int v);

    bool adjacent(int a, int b) const;
    bool has_directed(int u, int v) const;
    bool has_undirected(int a, int b) const;

    std::set<int> adjacencies(int a) const;
    const std::set<int>& parents(int v) const;
    const std::set<int>& children(int u) const;
    const std::set<int>& undirected_neighbors(int a) const;

    std::vector<std::pair<int, int>> directed_edges() const;
    /// Unordered pairs reported as (min, max), sorted.
    std::vector<std::pair<int, int>> undirected_edges() const;
    int num_edges() const;

    /// True when the directed part contains a cycle (undirected edges are
    /// ignored). Used as a safety check after orientation phases.
    bool has_directed_cycle() const;

    bool operator==(const Pdag& other) const;

private:
    int check(int idx) const;
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> index_;
    std::vector<std::set<int>> children_;
    std::vector<std::set<int>> parents_;
    std::vector<std::set<int>> undirected_;
};

enum class EdgeClass { Correct, Reversed, Missing, Extra };

const char* edge_class_name(EdgeClass c);

struct EdgeRecord {
    std::string from;
    std::string to;
    EdgeClass cls;
};

/// Classification of a discovered graph against ground truth.
/// correct + reversed + missing always equals the truth edge count.
struct EdgeDiff {
    int correct = 0;
    int reversed = 0;
    int missing = 0;
    int extra = 0;
    std::vector<EdgeRecord> per_edge;
};

/// Classifies every truth edge as correct (same direction), reversed (found
/// flipped or undirected; orientation not recovered), or missing, and counts
/// found adjacencies absent from the truth as extra. Node sets must match.
EdgeDiff compare_edges(const Dag& truth, const Pdag& found);

/// Styling hooks for DOT export. Edge attributes are keyed by node names,
/// with undirected edges keyed as (min-name, max-name) in index order.
struct DotOptions {
    std::map<std::pair<std::string, std::string>, std::string> edge_attrs;
    std::map<std::string, std::string> node_attrs;
    std::vector<std::string> extra_statements;
    std::string graph_name = "g";
};

std::string to_dot(const Dag& g, const DotOptions& options = {});
std::string to_dot(const Pdag& g, const DotOptions& options = {});

}  // namespace driftcause

#endif  // DRIFTCAUSE_GRAPH_HPP
