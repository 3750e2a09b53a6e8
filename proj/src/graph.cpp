#include "driftcause/graph.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace driftcause {

namespace {

std::unordered_map<std::string, int> build_index(const std::vector<std::string>& names) {
    std::unordered_map<std::string, int> index;
    index.reserve(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i].empty()) throw std::invalid_argument("graph: empty node name");
        auto [it, inserted] = index.emplace(names[i], static_cast<int>(i));
        (void)it;
        if (!inserted) throw std::invalid_argument("graph: duplicate node name " + names[i]);
    }
    return index;
}

}  // namespace

Dag::Dag(std::vector<std::string> nodes) : names_(std::move(nodes)) {
    index_ = build_index(names_);
    children_.resize(names_.size());
    parents_.resize(names_.size());
}

Dag::Dag(std::vector<std::string> nodes, const std::vector<std::pair<int, int>>& edges)
    : Dag(std::move(nodes)) {
    for (const auto& [u, v] : edges) {
        check(u);
        check(v);
        if (u == v) throw std::invalid_argument("Dag: self-loop at " + names_[u]);
        if (children_[u].count(v)) {
            throw std::invalid_argument("Dag: duplicate edge " + names_[u] + " -> " + names_[v]);
        }
        children_[u].insert(v);
        parents_[v].insert(u);
        ++edge_count_;
    }
    // Acyclicity: a full topological order must exist.
    if (static_cast<int>(topological_order().size()) != num_nodes()) {
        throw std::invalid_argument("Dag: edge set contains a directed cycle");
    }
}

Dag::Dag(std::vector<std::string> nodes,
         const std::vector<std::pair<std::string, std::string>>& edges)
    : Dag([&] {
          std::vector<std::pair<int, int>> indexed;
          auto idx = build_index(nodes);
          indexed.reserve(edges.size());
          for (const auto& [u, v] : edges) {
              auto fu = idx.find(u);
              auto fv = idx.find(v);
              if (fu == idx.end()) throw std::invalid_argument("Dag: unknown node " + u);
              if (fv == idx.end()) throw std::invalid_argument("Dag: unknown node " + v);
              indexed.emplace_back(fu->second, fv->second);
          }
          return Dag(nodes, indexed);
      }()) {}

int Dag::check(int idx) const {
    if (idx < 0 || idx >= num_nodes()) {
        throw std::invalid_argument("Dag: node index " + std::to_string(idx) + " out of range");
    }
    return idx;
}

const std::string& Dag::name(int idx) const { return names_[static_cast<std::size_t>(check(idx))]; }

int Dag::index(const std::string& node) const {
    auto it = index_.find(node);
    if (it == index_.end()) throw std::invalid_argument("Dag: unknown node " + node);
    return it->second;
}

bool Dag::has_edge(int parent, int child) const {
    check(parent);
    check(child);
    return children_[static_cast<std::size_t>(parent)].count(child) > 0;
}

std::vector<std::pair<int, int>> Dag::edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(static_cast<std::size_t>(edge_count_));
    for (int u = 0; u < num_nodes(); ++u) {
        for (int v : children_[static_cast<std::size_t>(u)]) out.emplace_back(u, v);
    }
    return out;
}

const std::set<int>& Dag::children(int f) const { return children_[static_cast<std::size_t>(check(f))]; }

const std::set<int>& Dag::parents(int f) const { return parents_[static_cast<std::size_t>(check(f))]; }

std::set<int> Dag::ancestors(int f) const {
    check(f);
    std::set<int> seen;
    std::deque<int> queue(parents_[static_cast<std::size_t>(f)].begin(),
                          parents_[static_cast<std::size_t>(f)].end());
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        if (!seen.insert(v).second) continue;
        for (int p : parents_[static_cast<std::size_t>(v)]) {
            if (!seen.count(p)) queue.push_back(p);
        }
    }
    return seen;
}

std::set<int> Dag::descendants(int f) const {
    check(f);
    std::set<int> seen;
    std::deque<int> queue(children_[static_cast<std::size_t>(f)].begin(),
                          children_[static_cast<std::size_t>(f)].end());
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        if (!seen.insert(v).second) continue;
        for (int c : children_[static_cast<std::size_t>(v)]) {
            if (!seen.count(c)) queue.push_back(c);
        }
    }
    return seen;
}

std::vector<int> Dag::topological_order() const {
    std::vector<int> indegree(static_cast<std::size_t>(num_nodes()));
    for (int v = 0; v < num_nodes(); ++v) {
        indegree[static_cast<std::size_t>(v)] = static_cast<int>(parents_[static_cast<std::size_t>(v)].size());
    }
    std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
    for (int v = 0; v < num_nodes(); ++v) {
        if (indegree[static_cast<std::size_t>(v)] == 0) ready.push(v);
    }
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(num_nodes()));
    while (!ready.empty()) {
        int v = ready.top();
        ready.pop();
        order.push_back(v);
        for (int c : children_[static_cast<std::size_t>(v)]) {
            if (--indegree[static_cast<std::size_t>(c)] == 0) ready.push(c);
        }
    }
    return order;
}

bool Dag::d_separated(int x, int y, const std::set<int>& z) const {
    check(x);
    check(y);
    if (x == y) throw std::invalid_argument("d_separated: x and y must differ");
    if (z.count(x) || z.count(y)) {
        throw std::invalid_argument("d_separated: endpoints may not appear in the conditioning set");
    }
    for (int v : z) check(v);

    // Ancestors of the conditioning set (including z itself); colliders are
    // traversable exactly when they lie in this set.
    std::set<int> anc_z(z);
    {
        std::deque<int> queue(z.begin(), z.end());
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (int p : parents_[static_cast<std::size_t>(v)]) {
                if (anc_z.insert(p).second) queue.push_back(p);
            }
        }
    }

    // Reachability over (node, entry direction) states. FromChild marks
    // arrival against an edge (coming up from a child), FromParent arrival
    // along an edge (coming down from a parent).
    enum Dir { FromChild = 0, FromParent = 1 };
    std::vector<std::array<bool, 2>> visited(static_cast<std::size_t>(num_nodes()), {false, false});
    std::deque<std::pair<int, Dir>> queue;
    queue.emplace_back(x, FromChild);
    while (!queue.empty()) {
        auto [v, dir] = queue.front();
        queue.pop_front();
        if (visited[static_cast<std::size_t>(v)][dir]) continue;
        visited[static_cast<std::size_t>(v)][dir] = true;
        if (v == y) return false;

        if (dir == FromChild && !z.count(v)) {
            for (int p : parents_[static_cast<std::size_t>(v)]) queue.emplace_back(p, FromChild);
            for (int c : children_[static_cast<std::size_t>(v)]) queue.emplace_back(c, FromParent);
        } else if (dir == FromParent) {
            if (!z.count(v)) {
                for (int c : children_[static_cast<std::size_t>(v)]) queue.emplace_back(c, FromParent);
            }
            if (anc_z.count(v)) {
                for (int p : parents_[static_cast<std::size_t>(v)]) queue.emplace_back(p, FromChild);
            }
        }
    }
    return true;
}

bool Dag::operator==(const Dag& other) const {
    return names_ == other.names_ && children_ == other.children_;
}

// ---------------------------------------------------------------------------

Pdag::Pdag(std::vector<std::string> nodes) : names_(std::move(nodes)) {
    index_ = build_index(names_);
    children_.resize(names_.size());
    parents_.resize(names_.size());
    undirected_.resize(names_.size());
}

Pdag Pdag::complete_undirected(std::vector<std::string> nodes) {
    Pdag g(std::move(nodes));
    for (int a = 0; a < g.num_nodes(); ++a) {
        for (int b = a + 1; b < g.num_nodes(); ++b) g.add_undirected(a, b);
    }
    return g;
}

Pdag Pdag::from_dag(const Dag& g) {
    Pdag out(g.node_names());
    for (const auto& [u, v] : g.edges()) out.add_directed(u, v);
    return out;
}

int Pdag::check(int idx) const {
    if (idx < 0 || idx >= num_nodes()) {
        throw std::invalid_argument("Pdag: node index " + std::to_string(idx) + " out of range");
    }
    return idx;
}

const std::string& Pdag::name(int idx) const { return names_[static_cast<std::size_t>(check(idx))]; }

int Pdag::index(const std::string& node) const {
    auto it = index_.find(node);
    if (it == index_.end()) throw std::invalid_argument("Pdag: unknown node " + node);
    return it->second;
}

void Pdag::add_directed(int u, int v) {
    check(u);
    check(v);
    if (u == v) throw std::invalid_argument("Pdag: self-loop");
    if (adjacent(u, v)) throw std::invalid_argument("Pdag: nodes already adjacent");
    children_[static_cast<std::size_t>(u)].insert(v);
    parents_[static_cast<std::size_t>(v)].insert(u);
}

void Pdag::add_undirected(int a, int b) {
    check(a);
    check(b);
    if (a == b) throw std::invalid_argument("Pdag: self-loop");
    if (adjacent(a, b)) throw std::invalid_argument("Pdag: nodes already adjacent");
    undirected_[static_cast<std::size_t>(a)].insert(b);
    undirected_[static_cast<std::size_t>(b)].insert(a);
}

void Pdag::remove_adjacency(int a, int b) {
    check(a);
    check(b);
    children_[static_cast<std::size_t>(a)].erase(b);
    children_[static_cast<std::size_t>(b)].erase(a);
    parents_[static_cast<std::size_t>(a)].erase(b);
    parents_[static_cast<std::size_t>(b)].erase(a);
    undirected_[static_cast<std::size_t>(a)].erase(b);
    undirected_[static_cast<std::size_t>(b)].erase(a);
}

void Pdag::orient(int u, int v) {
    check(u);
    check(v);
    if (has_directed(u, v)) return;
    if (!has_undirected(u, v)) {
        throw std::invalid_argument("Pdag: cannot orient " + names_[static_cast<std::size_t>(u)] +
                                    " -> " + names_[static_cast<std::size_t>(v)] +
                                    ": no undirected edge present");
    }
    undirected_[static_cast<std::size_t>(u)].erase(v);
    undirected_[static_cast<std::size_t>(v)].erase(u);
    children_[static_cast<std::size_t>(u)].insert(v);
    parents_[static_cast<std::size_t>(v)].insert(u);
}

bool Pdag::adjacent(int a, int b) const {
    check(a);
    check(b);
    const auto ua = static_cast<std::size_t>(a);
    return children_[ua].count(b) || parents_[ua].count(b) || undirected_[ua].count(b);
}

bool Pdag::has_directed(int u, int v) const {
    check(u);
    check(v);
    return children_[static_cast<std::size_t>(u)].count(v) > 0;
}

bool Pdag::has_undirected(int a, int b) const {
    check(a);
    check(b);
    return undirected_[static_cast<std::size_t>(a)].count(b) > 0;
}

std::set<int> Pdag::adjacencies(int a) const {
    check(a);
    const auto ua = static_cast<std::size_t>(a);
    std::set<int> out(undirected_[ua]);
    out.insert(children_[ua].begin(), children_[ua].end());
    out.insert(parents_[ua].begin(), parents_[ua].end());
    return out;
}

const std::set<int>& Pdag::parents(int v) const { return parents_[static_cast<std::size_t>(check(v))]; }

const std::set<int>& Pdag::children(int u) const { return children_[static_cast<std::size_t>(check(u))]; }

const std::set<int>& Pdag::undirected_neighbors(int a) const {
    return undirected_[static_cast<std::size_t>(check(a))];
}

std::vector<std::pair<int, int>> Pdag::directed_edges() const {
    std::vector<std::pair<int, int>> out;
    for (int u = 0; u < num_nodes(); ++u) {
        for (int v : children_[static_cast<std::size_t>(u)]) out.emplace_back(u, v);
    }
    return out;
}

std::vector<std::pair<int, int>> Pdag::undirected_edges() const {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < num_nodes(); ++a) {
        for (int b : undirected_[static_cast<std::size_t>(a)]) {
            if (a < b) out.emplace_back(a, b);
        }
    }
    return out;
}

int Pdag::num_edges() const {
    return static_cast<int>(directed_edges().size() + undirected_edges().size());
}

bool Pdag::has_directed_cycle() const {
    std::vector<int> indegree(static_cast<std::size_t>(num_nodes()));
    for (int v = 0; v < num_nodes(); ++v) {
        indegree[static_cast<std::size_t>(v)] = static_cast<int>(parents_[static_cast<std::size_t>(v)].size());
    }
    std::deque<int> ready;
    for (int v = 0; v < num_nodes(); ++v) {
        if (indegree[static_cast<std::size_t>(v)] == 0) ready.push_back(v);
    }
    int emitted = 0;
    while (!ready.empty()) {
        int v = ready.front();
        ready.pop_front();
        ++emitted;
        for (int c : children_[static_cast<std::size_t>(v)]) {
            if (--indegree[static_cast<std::size_t>(c)] == 0) ready.push_back(c);
        }
    }
    return emitted != num_nodes();
}

bool Pdag::operator==(const Pdag& other) const {
    return names_ == other.names_ && children_ == other.children_ &&
           undirected_ == other.undirected_;
}

// ---------------------------------------------------------------------------

const char* edge_class_name(EdgeClass c) {
    switch (c) {
        case EdgeClass::Correct: return "correct";
        case EdgeClass::Reversed: return "reversed";
        case EdgeClass::Missing: return "missing";
        case EdgeClass::Extra: return "extra";
    }
    return "?";
}

EdgeDiff compare_edges(const Dag& truth, const Pdag& found) {
    if (truth.num_nodes() != found.num_nodes()) {
        throw std::invalid_argument("compare_edges: node sets differ");
    }
    // Match nodes by name so the two graphs may order them differently.
    std::vector<int> to_found(static_cast<std::size_t>(truth.num_nodes()));
    for (int v = 0; v < truth.num_nodes(); ++v) {
        if (!found.contains(truth.name(v))) {
            throw std::invalid_argument("compare_edges: node sets differ at " + truth.name(v));
        }
        to_found[static_cast<std::size_t>(v)] = found.index(truth.name(v));
    }

    EdgeDiff diff;
    for (const auto& [u, v] : truth.edges()) {
        int fu = to_found[static_cast<std::size_t>(u)];
        int fv = to_found[static_cast<std::size_t>(v)];
        EdgeClass cls;
        if (found.has_directed(fu, fv)) {
            cls = EdgeClass::Correct;
            ++diff.correct;
        } else if (found.has_directed(fv, fu) || found.has_undirected(fu, fv)) {
            // Undirected detection counts as orientation-not-recovered.
            cls = EdgeClass::Reversed;
            ++diff.reversed;
        } else {
            cls = EdgeClass::Missing;
            ++diff.missing;
        }
        diff.per_edge.push_back({truth.name(u), truth.name(v), cls});
    }
    auto truth_adjacent = [&](int fu, int fv) {
        for (const auto& [u, v] : truth.edges()) {
            int tu = to_found[static_cast<std::size_t>(u)];
            int tv = to_found[static_cast<std::size_t>(v)];
            if ((tu == fu && tv == fv) || (tu == fv && tv == fu)) return true;
        }
        return false;
    };
    for (const auto& [u, v] : found.directed_edges()) {
        if (!truth_adjacent(u, v)) {
            ++diff.extra;
            diff.per_edge.push_back({found.name(u), found.name(v), EdgeClass::Extra});
        }
    }
    for (const auto& [a, b] : found.undirected_edges()) {
        if (!truth_adjacent(a, b)) {
            ++diff.extra;
            diff.per_edge.push_back({found.name(a), found.name(b), EdgeClass::Extra});
        }
    }
    return diff;
}

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void emit_header(std::ostringstream& os, const DotOptions& options) {
    os << "digraph " << options.graph_name << " {\n";
    for (const auto& stmt : options.extra_statements) os << "  " << stmt << "\n";
}

void emit_node(std::ostringstream& os, const std::string& name, const DotOptions& options) {
    os << "  " << quote(name);
    auto it = options.node_attrs.find(name);
    if (it != options.node_attrs.end()) os << " [" << it->second << "]";
    os << ";\n";
}

void emit_edge(std::ostringstream& os, const std::string& from, const std::string& to,
               bool directed, const DotOptions& options) {
    os << "  " << quote(from) << " -> " << quote(to);
    std::string attrs = directed ? "" : "dir=none";
    auto it = options.edge_attrs.find({from, to});
    if (it != options.edge_attrs.end()) {
        if (!attrs.empty()) attrs += ", ";
        attrs += it->second;
    }
    if (!attrs.empty()) os << " [" << attrs << "]";
    os << ";\n";
}

}  // namespace

std::string to_dot(const Dag& g, const DotOptions& options) {
    std::ostringstream os;
    emit_header(os, options);
    for (int v = 0; v < g.num_nodes(); ++v) emit_node(os, g.name(v), options);
    for (const auto& [u, v] : g.edges()) emit_edge(os, g.name(u), g.name(v), true, options);
    os << "}\n";
    return os.str();
}

std::string to_dot(const Pdag& g, const DotOptions& options) {
    std::ostringstream os;
    emit_header(os, options);
    for (int v = 0; v < g.num_nodes(); ++v) emit_node(os, g.name(v), options);
    for (const auto& [u, v] : g.directed_edges()) emit_edge(os, g.name(u), g.name(v), true, options);
    for (const auto& [a, b] : g.undirected_edges()) emit_edge(os, g.name(a), g.name(b), false, options);
    os << "}\n";
    return os.str();
}

}  // namespace driftcause
