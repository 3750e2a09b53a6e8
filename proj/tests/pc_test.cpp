#include "driftcause/pc.hpp"

#include <numeric>

#include "doctest.h"
#include "driftcause/drift_stream.hpp"
#include "driftcause/errors.hpp"
#include "oracles.hpp"

using namespace driftcause;

namespace {

/// Zero-row table carrying only a schema, for oracle-driven runs.
DataTable schema_only(const std::vector<std::string>& names) {
    return DataTable(names, std::vector<int>(names.size(), 2));
}

Dag fig_net() {
    return Dag({"rain", "sprinkler", "wet", "__time__"},
               std::vector<std::pair<std::string, std::string>>{{"rain", "sprinkler"},
                                                                {"rain", "wet"},
                                                                {"sprinkler", "wet"},
                                                                {"__time__", "sprinkler"}});
}

struct ThrowingTester : CiTester {
    CiResult test(int, int, const std::vector<int>&) const override {
        throw std::runtime_error("backend unavailable");
    }
};

CategoricalBayesNet sprinkler_base() {
    Dag g({"rain", "sprinkler", "wet"},
          std::vector<std::pair<std::string, std::string>>{
              {"rain", "sprinkler"}, {"rain", "wet"}, {"sprinkler", "wet"}});
    std::vector<Cpt> cpts(3);
    cpts[0] = Cpt{{{0.7, 0.3}}};
    cpts[1] = Cpt{{{0.3, 0.7}, {0.95, 0.05}}};
    cpts[2] = Cpt{{{0.98, 0.02}, {0.15, 0.85}, {0.1, 0.9}, {0.01, 0.99}}};
    return CategoricalBayesNet(std::move(g), {2, 2, 2}, std::move(cpts));
}

DriftStream sprinkler_stream(std::uint64_t seed, std::size_t per_phase = 2500) {
    ScenarioSpec spec;
    spec.base_net = sprinkler_base();
    spec.modifications.emplace_back("sprinkler", Cpt{{{0.85, 0.15}, {0.98, 0.02}}});
    spec.pre_count = spec.post_count = per_phase;
    spec.seed = seed;
    return build_stream(spec);
}

}  // namespace

TEST_SUITE("pc") {

TEST_CASE("oracle skeleton on the chain records the separating set") {
    const Dag chain({"a", "b", "c"}, std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
    const auto data = schema_only({"a", "b", "c"});
    OracleTester oracle(chain, data.column_names());
    auto [skeleton, sepsets] = pc_skeleton(data, oracle, {});
    CHECK(skeleton.has_undirected(0, 1));
    CHECK(skeleton.has_undirected(1, 2));
    CHECK_FALSE(skeleton.adjacent(0, 2));
    REQUIRE(sepsets.has(0, 2));
    CHECK(sepsets.get(0, 2) == std::vector<int>{1});
}

TEST_CASE("oracle skeleton on the collider separates the roots unconditionally") {
    const Dag collider({"a", "b", "c"}, std::vector<std::pair<int, int>>{{0, 2}, {1, 2}});
    const auto data = schema_only({"a", "b", "c"});
    OracleTester oracle(collider, data.column_names());
    auto [skeleton, sepsets] = pc_skeleton(data, oracle, {});
    CHECK(skeleton.has_undirected(0, 2));
    CHECK(skeleton.has_undirected(1, 2));
    CHECK_FALSE(skeleton.adjacent(0, 1));
    REQUIRE(sepsets.has(0, 1));
    CHECK(sepsets.get(0, 1).empty());
}

TEST_CASE("oracle skeleton equals the brute-force skeleton on random dags") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto g = testing::random_dag(3 + static_cast<int>(seed % 4), 0.45, 2100 + seed);
        const auto data = schema_only(g.node_names());
        OracleTester oracle(g, data.column_names());
        auto [skeleton, sepsets] = pc_skeleton(data, oracle, {});
        const auto reference = testing::skeleton_brute_force(g);
        REQUIRE(skeleton == reference);
    }
}

TEST_CASE("v-structure orientation") {
    SUBCASE("collider oriented") {
        Pdag skeleton({"a", "b", "c"});
        skeleton.add_undirected(0, 2);
        skeleton.add_undirected(1, 2);
        SepsetMap sepsets;
        sepsets.put(0, 1, {});
        const auto oriented = orient_v_structures(skeleton, sepsets);
        CHECK(oriented.has_directed(0, 2));
        CHECK(oriented.has_directed(1, 2));
    }
    SUBCASE("chain stays undirected") {
        Pdag skeleton({"a", "b", "c"});
        skeleton.add_undirected(0, 1);
        skeleton.add_undirected(1, 2);
        SepsetMap sepsets;
        sepsets.put(0, 2, {1});
        const auto oriented = orient_v_structures(skeleton, sepsets);
        CHECK(oriented.has_undirected(0, 1));
        CHECK(oriented.has_undirected(1, 2));
    }
    SUBCASE("conflicting triples: the first orientation stands and is reported") {
        // Path skeleton u - x - z - y with inconsistent separating sets, the
        // kind finite-sample errors produce: both (u, x, z) and (x, z, y)
        // claim a collider, fighting over the x - z edge.
        Pdag skeleton({"u", "x", "z", "y"});
        skeleton.add_undirected(0, 1);
        skeleton.add_undirected(1, 2);
        skeleton.add_undirected(2, 3);
        SepsetMap sepsets;
        sepsets.put(0, 2, {});  // u -> x <- z
        sepsets.put(1, 3, {});  // x -> z <- y
        sepsets.put(0, 3, {});
        std::vector<std::string> conflicts;
        const auto oriented = orient_v_structures(skeleton, sepsets, std::nullopt, &conflicts);
        // centers are processed in index order, so the triple at x fires first
        CHECK(oriented.has_directed(0, 1));
        CHECK(oriented.has_directed(2, 1));
        CHECK(oriented.has_directed(3, 2));
        REQUIRE(conflicts.size() == 1);
        CHECK(conflicts[0].find("x") != std::string::npos);
        CHECK_FALSE(oriented.has_directed(1, 2));
    }
}

TEST_CASE("meek rules") {
    SUBCASE("R1") {
        Pdag g({"a", "b", "c"});
        g.add_directed(0, 1);
        g.add_undirected(1, 2);
        const auto out = meek_rules(g);
        CHECK(out.has_directed(1, 2));
    }
    SUBCASE("R2") {
        Pdag g({"a", "b", "c"});
        g.add_directed(0, 1);
        g.add_directed(1, 2);
        g.add_undirected(0, 2);
        const auto out = meek_rules(g);
        CHECK(out.has_directed(0, 2));
    }
    SUBCASE("R3") {
        Pdag g({"a", "b", "c", "d"});
        g.add_undirected(0, 1);
        g.add_undirected(0, 2);
        g.add_undirected(0, 3);
        g.add_directed(2, 1);
        g.add_directed(3, 1);
        const auto out = meek_rules(g);
        CHECK(out.has_directed(0, 1));
    }
    SUBCASE("R4") {
        // kite with tail: d -> c -> b plus a adjacent to all three
        Pdag g({"a", "b", "c", "d"});
        g.add_undirected(0, 1);  // a - b
        g.add_undirected(0, 2);  // a - c
        g.add_undirected(0, 3);  // a - d
        g.add_directed(3, 2);    // d -> c
        g.add_directed(2, 1);    // c -> b
        const auto out = meek_rules(g);
        CHECK(out.has_directed(0, 1));
        CHECK(out.has_undirected(0, 3));
    }
    SUBCASE("no orientation into a forbidden head") {
        Pdag g({"a", "b", "t"});
        g.add_directed(0, 1);
        g.add_undirected(1, 2);
        const auto out = meek_rules(g, 2);
        CHECK(out.has_undirected(1, 2));
    }
}

TEST_CASE("oracle pc recovers the equivalence class on random dags") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto g = testing::random_dag(2 + static_cast<int>(seed % 5), 0.4, 5200 + seed);
        const auto data = schema_only(g.node_names());
        OracleTester oracle(g, data.column_names());
        const auto result = pc(data, oracle, {});
        const auto reference = testing::cpdag_brute_force(g);
        REQUIRE(result.graph == reference);
        CHECK_FALSE(result.graph.has_directed_cycle());
    }
}

TEST_CASE("background knowledge orients the time edges and stays sound") {
    const auto truth = fig_net();
    const auto data = schema_only(truth.node_names());
    OracleTester oracle(truth, data.column_names());

    PcConfig config;
    config.background_time = "__time__";
    const auto result = pc(data, oracle, config);
    // fully identified: the collider at the sprinkler plus completion rules
    CHECK(result.graph.has_directed(data.column_index("__time__"), data.column_index("sprinkler")));
    CHECK(result.graph.has_directed(data.column_index("rain"), data.column_index("sprinkler")));
    CHECK(result.graph.has_directed(data.column_index("sprinkler"), data.column_index("wet")));
    CHECK(result.graph.has_directed(data.column_index("rain"), data.column_index("wet")));
    CHECK(result.graph.num_edges() == 4);

    // the same class is already fully oriented without background knowledge
    const auto plain = pc(data, oracle, {});
    CHECK(plain.graph == result.graph);

    // background soundness on sampled streams: nothing points into time
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto stream = sprinkler_stream(900 + seed);
        GSquareTester tester(stream.records, 0.05);
        PcConfig sampled_config;
        sampled_config.background_time = kTimeFeatureName;
        const auto sampled = pc(stream.records, tester, sampled_config);
        const int t = stream.records.column_index(kTimeFeatureName);
        CHECK(sampled.graph.parents(t).empty());
        CHECK(sampled.graph.undirected_neighbors(t).empty());
        CHECK_FALSE(sampled.graph.has_directed_cycle());
    }
}

TEST_CASE("no dependencies yields an edgeless graph") {
    // four mutually independent coins
    Dag empty_truth({"a", "b", "c", "d"});
    std::vector<Cpt> cpts(4, Cpt{{{0.5, 0.5}}});
    CategoricalBayesNet net(empty_truth, {2, 2, 2, 2}, cpts);
    const auto data = sample(net, 4000, 8675310);
    GSquareTester tester(data, 0.05);
    const auto result = pc(data, tester, {});
    CHECK(result.graph.num_edges() == 0);
}

TEST_CASE("stable skeleton is invariant under column permutation") {
    SUBCASE("oracle testers") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto g = testing::random_dag(5, 0.45, 6400 + seed);
            const auto data = schema_only(g.node_names());
            OracleTester oracle(g, data.column_names());
            const auto base = pc(data, oracle, {});

            std::vector<int> order(5);
            std::iota(order.begin(), order.end(), 0);
            std::rotate(order.begin(), order.begin() + 2, order.end());
            const auto permuted_data = data.permute_columns(order);
            OracleTester permuted_oracle(g, permuted_data.column_names());
            const auto permuted = pc(permuted_data, permuted_oracle, {});

            for (const auto& [u, v] : base.graph.directed_edges()) {
                CHECK(permuted.graph.has_directed(permuted.graph.index(base.graph.name(u)),
                                                  permuted.graph.index(base.graph.name(v))));
            }
            CHECK(base.graph.num_edges() == permuted.graph.num_edges());
        }
    }
    SUBCASE("sampled data") {
        const auto stream = sprinkler_stream(777);
        GSquareTester tester(stream.records, 0.05);
        const auto base = pc(stream.records, tester, {});

        const std::vector<int> order{2, 0, 3, 1};
        const auto permuted_data = stream.records.permute_columns(order);
        GSquareTester permuted_tester(permuted_data, 0.05);
        const auto permuted = pc(permuted_data, permuted_tester, {});

        CHECK(base.graph.num_edges() == permuted.graph.num_edges());
        for (const auto& [u, v] : base.graph.directed_edges()) {
            CHECK(permuted.graph.has_directed(permuted.graph.index(base.graph.name(u)),
                                              permuted.graph.index(base.graph.name(v))));
        }
        for (const auto& [a, b] : base.graph.undirected_edges()) {
            CHECK(permuted.graph.has_undirected(permuted.graph.index(base.graph.name(a)),
                                                permuted.graph.index(base.graph.name(b))));
        }
    }
}

TEST_CASE("max conditioning size caps the search") {
    const Dag chain({"a", "b", "c"}, std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
    const auto data = schema_only({"a", "b", "c"});
    OracleTester oracle(chain, data.column_names());
    PcConfig config;
    config.max_cond_size = 0;
    auto [skeleton, sepsets] = pc_skeleton(data, oracle, config);
    // a and c can only be separated by {b}, which the cap forbids
    CHECK(skeleton.adjacent(0, 2));
}

TEST_CASE("tester failures propagate with the offending query attached") {
    const auto data = schema_only({"a", "b"});
    ThrowingTester tester;
    CHECK_THROWS_WITH_AS(pc_skeleton(data, tester, {}),
                         doctest::Contains("a _||_ b"), DataError);
}

TEST_CASE("run log records every decision") {
    const Dag chain({"a", "b", "c"}, std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
    const auto data = schema_only({"a", "b", "c"});
    OracleTester oracle(chain, data.column_names());
    const auto result = pc(data, oracle, {});
    CHECK(result.log.size() >= 3);
    bool saw_removal = false;
    for (const auto& entry : result.log) {
        if (entry.action == "remove") saw_removal = true;
    }
    CHECK(saw_removal);
}

}  // TEST_SUITE
