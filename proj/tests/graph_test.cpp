#include "driftcause/graph.hpp"

#include <algorithm>

#include "doctest.h"
#include "oracles.hpp"

using namespace driftcause;

namespace {

// Fig-style four-node net: time-controlled sprinkler that also reacts to
// rain; both wet the ground.
Dag sprinkler_graph() {
    return Dag({"T", "rain", "sprinkler", "wet"},
               std::vector<std::pair<std::string, std::string>>{
                   {"T", "sprinkler"}, {"rain", "sprinkler"}, {"sprinkler", "wet"}, {"rain", "wet"}});
}

std::set<std::string> names(const Dag& g, const std::set<int>& ids) {
    std::set<std::string> out;
    for (int v : ids) out.insert(g.name(v));
    return out;
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("construction rejects malformed inputs") {
    CHECK_THROWS_AS(Dag({"a", "a"}), std::invalid_argument);
    CHECK_THROWS_AS(Dag({"a", "b"}, std::vector<std::pair<int, int>>{{0, 0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(Dag({"a", "b"}, std::vector<std::pair<int, int>>{{0, 1}, {0, 1}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(Dag({"a", "b", "c"}, std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(Dag({"a"}, std::vector<std::pair<std::string, std::string>>{{"a", "zz"}}),
                    std::invalid_argument);
}

TEST_CASE("children") {
    const auto g = sprinkler_graph();
    CHECK(names(g, g.children(g.index("T"))) == std::set<std::string>{"sprinkler"});

    const Dag single({"only"});
    CHECK(single.children(0).empty());

    const Dag chain({"a", "b", "c"}, std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
    CHECK(chain.children(0) == std::set<int>{1});
    CHECK_THROWS_AS(chain.index("nope"), std::invalid_argument);
}

TEST_CASE("parents") {
    const auto g = sprinkler_graph();
    CHECK(names(g, g.parents(g.index("sprinkler"))) == std::set<std::string>{"T", "rain"});
    CHECK(g.parents(g.index("T")).empty());

    const Dag collider({"a", "b", "c"}, std::vector<std::pair<int, int>>{{0, 2}, {1, 2}});
    CHECK(collider.parents(2) == std::set<int>{0, 1});
}

TEST_CASE("ancestors") {
    const Dag chain({"a", "b", "c"}, std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
    CHECK(chain.ancestors(2) == std::set<int>{0, 1});
    CHECK(chain.ancestors(0).empty());

    const auto g = sprinkler_graph();
    CHECK(names(g, g.ancestors(g.index("wet"))) == std::set<std::string>{"T", "rain", "sprinkler"});
}

TEST_CASE("ancestors match directed-path existence on all small dags") {
    // f is an ancestor of x exactly when a directed path f ~> x exists.
    for (int n = 1; n <= 5; ++n) {
        long long dags = 0;
        testing::for_all_dags(n, [&](const Dag& g) {
            ++dags;
            for (int x = 0; x < n; ++x) {
                const auto anc = g.ancestors(x);
                for (int f = 0; f < n; ++f) {
                    if (f == x) continue;
                    REQUIRE(anc.count(f) == (testing::has_directed_path(g, f, x) ? 1u : 0u));
                }
            }
        });
        CHECK(dags > 0);
    }
}

TEST_CASE("topological order") {
    const Dag chain({"a", "b", "c"}, std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
    CHECK(chain.topological_order() == std::vector<int>{0, 1, 2});

    const Dag edgeless({"x", "y", "z"});
    CHECK(edgeless.topological_order() == std::vector<int>{0, 1, 2});

    const auto g = sprinkler_graph();
    const auto order = g.topological_order();
    REQUIRE(order.size() == 4);
    std::vector<int> position(4);
    for (std::size_t i = 0; i < order.size(); ++i) position[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
    for (const auto& [u, v] : g.edges()) CHECK(position[static_cast<std::size_t>(u)] < position[static_cast<std::size_t>(v)]);
}

TEST_CASE("d-separation textbook cases") {
    const Dag chain({"a", "b", "c"}, std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
    CHECK(chain.d_separated(0, 2, {1}));
    CHECK_FALSE(chain.d_separated(0, 2, {}));

    const Dag collider({"a", "b", "c"}, std::vector<std::pair<int, int>>{{0, 2}, {1, 2}});
    CHECK(collider.d_separated(0, 1, {}));
    CHECK_FALSE(collider.d_separated(0, 1, {2}));

    const auto g = sprinkler_graph();
    // Conditioning on the sprinkler opens the collider path T -> sprinkler <- rain -> wet.
    CHECK_FALSE(g.d_separated(g.index("T"), g.index("wet"), {g.index("sprinkler")}));
    CHECK(g.d_separated(g.index("T"), g.index("wet"),
                        {g.index("sprinkler"), g.index("rain")}));

    CHECK_THROWS_AS(chain.d_separated(0, 0, {}), std::invalid_argument);
    CHECK_THROWS_AS(chain.d_separated(0, 2, {0}), std::invalid_argument);
}

TEST_CASE("d-separation agrees with path enumeration on random dags") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto g = testing::random_dag(2 + static_cast<int>(seed % 5), 0.45, 1000 + seed);
        const int n = g.num_nodes();
        for (int x = 0; x < n; ++x) {
            for (int y = x + 1; y < n; ++y) {
                std::vector<int> others;
                for (int f = 0; f < n; ++f) {
                    if (f != x && f != y) others.push_back(f);
                }
                const std::size_t subsets = std::size_t{1} << others.size();
                for (std::size_t mask = 0; mask < subsets; ++mask) {
                    std::set<int> z;
                    for (std::size_t i = 0; i < others.size(); ++i) {
                        if (mask & (std::size_t{1} << i)) z.insert(others[i]);
                    }
                    REQUIRE(g.d_separated(x, y, z) == testing::d_separated_paths(g, x, y, z));
                }
            }
        }
    }
}

TEST_CASE("topological order ignores node-list permutation given fixed indices") {
    const Dag g({"a", "b", "c", "d"},
                std::vector<std::pair<int, int>>{{2, 0}, {0, 3}, {2, 3}});
    const auto order = g.topological_order();
    CHECK(order == std::vector<int>{1, 2, 0, 3});
}

TEST_CASE("compare_edges classifications") {
    const Dag truth({"a", "b", "c"}, std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});

    SUBCASE("identity") {
        const auto found = Pdag::from_dag(truth);
        const auto diff = compare_edges(truth, found);
        CHECK(diff.correct == 2);
        CHECK(diff.reversed == 0);
        CHECK(diff.missing == 0);
        CHECK(diff.extra == 0);
    }
    SUBCASE("reversal and undirected both count as reversed") {
        Pdag found({"a", "b", "c"});
        found.add_directed(1, 0);     // b -> a: flipped
        found.add_undirected(1, 2);   // b -- c: orientation not recovered
        const auto diff = compare_edges(truth, found);
        CHECK(diff.correct == 0);
        CHECK(diff.reversed == 2);
        CHECK(diff.missing == 0);
        CHECK(diff.extra == 0);
    }
    SUBCASE("missing and extra") {
        Pdag found({"a", "b", "c"});
        found.add_directed(0, 1);
        found.add_directed(0, 2);  // not a truth adjacency
        const auto diff = compare_edges(truth, found);
        CHECK(diff.correct == 1);
        CHECK(diff.missing == 1);
        CHECK(diff.extra == 1);
        CHECK(diff.correct + diff.reversed + diff.missing == truth.num_edges());
    }
    SUBCASE("node mismatch") {
        CHECK_THROWS_AS(compare_edges(truth, Pdag({"a", "b"})), std::invalid_argument);
        CHECK_THROWS_AS(compare_edges(truth, Pdag({"a", "b", "x"})), std::invalid_argument);
    }
    SUBCASE("count invariant on random graphs") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto t = testing::random_dag(5, 0.4, 300 + seed);
            const auto f = testing::random_dag(5, 0.4, 900 + seed);
            const auto diff = compare_edges(t, Pdag::from_dag(f));
            CHECK(diff.correct + diff.reversed + diff.missing == t.num_edges());
        }
    }
}

TEST_CASE("dot export") {
    SUBCASE("empty graph") {
        const Dag g({"solo"});
        const auto dot = to_dot(g);
        CHECK(dot.find("digraph") != std::string::npos);
        CHECK(dot.find("->") == std::string::npos);
    }
    SUBCASE("chain contains the edge statement") {
        const Dag g({"a", "b"}, std::vector<std::pair<int, int>>{{0, 1}});
        CHECK(to_dot(g).find("\"a\" -> \"b\"") != std::string::npos);
    }
    SUBCASE("annotated diff golden") {
        Pdag found({"a", "b", "c"});
        found.add_directed(0, 1);
        found.add_undirected(1, 2);
        DotOptions options;
        options.graph_name = "diff";
        options.edge_attrs[{"a", "b"}] = "color=green";
        options.edge_attrs[{"b", "c"}] = "color=black, style=dashed";
        options.node_attrs["a"] = "shape=box";
        const std::string expected =
            "digraph diff {\n"
            "  \"a\" [shape=box];\n"
            "  \"b\";\n"
            "  \"c\";\n"
            "  \"a\" -> \"b\" [color=green];\n"
            "  \"b\" -> \"c\" [dir=none, color=black, style=dashed];\n"
            "}\n";
        CHECK(to_dot(found, options) == expected);
    }
}

TEST_CASE("pdag mechanics") {
    Pdag g({"a", "b", "c"});
    g.add_undirected(0, 1);
    CHECK(g.has_undirected(0, 1));
    CHECK(g.has_undirected(1, 0));
    CHECK_THROWS_AS(g.add_directed(0, 1), std::invalid_argument);

    g.orient(0, 1);
    CHECK(g.has_directed(0, 1));
    CHECK_FALSE(g.has_undirected(0, 1));
    CHECK_THROWS_AS(g.orient(1, 0), std::invalid_argument);
    g.orient(0, 1);  // idempotent

    g.add_directed(1, 2);
    CHECK(g.adjacencies(1) == std::set<int>{0, 2});
    CHECK_FALSE(g.has_directed_cycle());

    g.remove_adjacency(0, 1);
    CHECK_FALSE(g.adjacent(0, 1));

    const auto complete = Pdag::complete_undirected({"x", "y", "z"});
    CHECK(complete.num_edges() == 3);
}

}  // TEST_SUITE
