#include "driftcause/drift_explain.hpp"

#include <cmath>

#include "doctest.h"
#include "driftcause/errors.hpp"
#include "driftcause/rng.hpp"
#include "oracles.hpp"

using namespace driftcause;

namespace {

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

ScenarioSpec sprinkler_scenario(std::uint64_t seed) {
    ScenarioSpec spec;
    spec.base_net = sprinkler_base();
    spec.modifications.emplace_back("sprinkler", Cpt{{{0.85, 0.15}, {0.98, 0.02}}});
    spec.pre_count = spec.post_count = 2500;
    spec.seed = seed;
    return spec;
}

PcConfig background_config() {
    PcConfig config;
    config.background_time = kTimeFeatureName;
    return config;
}

using testing::random_timed_net;

}  // namespace

TEST_SUITE("drift_explain") {

TEST_CASE("sprinkler stream explanation") {
    const auto stream = build_stream(sprinkler_scenario(20250));
    const auto explanation = explain_drift(stream, background_config());
    CHECK(explanation.children == std::set<std::string>{"sprinkler"});
    CHECK(explanation.conditional_parents == std::set<std::string>{"rain"});
    CHECK(explanation.ancestors == std::set<std::string>{"rain"});
    CHECK(explanation.ambiguous.empty());
    REQUIRE(explanation.child_max_p.count("sprinkler"));
    CHECK(explanation.child_max_p.at("sprinkler") < 0.05);
}

TEST_CASE("negative control explanation is empty") {
    auto spec = sprinkler_scenario(977);
    spec.modifications.clear();
    const auto stream = build_stream(spec);
    const auto explanation = explain_drift(stream, background_config());
    CHECK(explanation.children.empty());
    CHECK(explanation.conditional_parents.empty());
    CHECK(explanation.ancestors.empty());
}

TEST_CASE("support-analog stream: child with one conditional parent") {
    ScenarioSpec spec;
    Dag g({"sex", "support", "grade"},
          std::vector<std::pair<std::string, std::string>>{
              {"sex", "support"}, {"sex", "grade"}, {"support", "grade"}});
    std::vector<Cpt> cpts(3);
    cpts[0] = Cpt{{{0.5, 0.5}}};
    cpts[1] = Cpt{{{0.9, 0.1}, {0.85, 0.15}}};
    cpts[2] = Cpt{{{0.3, 0.5, 0.2}, {0.15, 0.45, 0.4}, {0.25, 0.5, 0.25}, {0.1, 0.45, 0.45}}};
    spec.base_net = CategoricalBayesNet(std::move(g), {2, 2, 3}, std::move(cpts));
    spec.modifications.emplace_back("support", Cpt{{{0.9, 0.1}, {0.3, 0.7}}});
    spec.pre_count = 2000;
    spec.post_count = 3000;
    spec.seed = 4242;

    const auto stream = build_stream(spec);
    const auto explanation = explain_drift(stream, background_config());
    CHECK(explanation.children == std::set<std::string>{"support"});
    CHECK(explanation.conditional_parents == std::set<std::string>{"sex"});
    CHECK(explanation.ancestors == std::set<std::string>{"sex"});
}

TEST_CASE("explanation invariants hold on sampled runs") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto stream = build_stream(sprinkler_scenario(31400 + seed));
        const auto ex = explain_drift(stream, background_config());
        CHECK_FALSE(ex.children.count(kTimeFeatureName));
        CHECK_FALSE(ex.conditional_parents.count(kTimeFeatureName));
        CHECK_FALSE(ex.ancestors.count(kTimeFeatureName));
        for (const auto& c : ex.children) CHECK_FALSE(ex.conditional_parents.count(c));
        for (const auto& p : ex.conditional_parents) CHECK(ex.ancestors.count(p));
    }
}

TEST_CASE("undirected time adjacency is counted and flagged") {
    // Hand-run the extraction path on a stream the discovery cannot orient:
    // with background off, a single time-child pair stays undirected.
    ScenarioSpec spec;
    Dag g({"x"});
    spec.base_net = CategoricalBayesNet(g, {2}, {Cpt{{{0.8, 0.2}}}});
    spec.modifications.emplace_back("x", Cpt{{{0.3, 0.7}}});
    spec.pre_count = spec.post_count = 2000;
    spec.seed = 5;
    const auto stream = build_stream(spec);
    const auto explanation = explain_drift(stream, PcConfig{});
    CHECK(explanation.children == std::set<std::string>{"x"});
    CHECK(explanation.ambiguous.count("x") == 1);
}

TEST_CASE("explain_drift errors") {
    DataTable no_time({"a", "b"}, {2, 2});
    DriftStream stream;
    stream.records = no_time;
    stream.windows = 2;
    CHECK_THROWS_AS(explain_drift(stream, PcConfig{}), DataError);

    const auto good = build_stream(sprinkler_scenario(1));
    PcConfig mismatched;
    mismatched.background_time = "rain";
    CHECK_THROWS_AS(explain_drift(good, mismatched), DataError);
}

TEST_CASE("ground_truth_sets") {
    SUBCASE("sprinkler truth") {
        const auto truth = scenario_truth_graph(sprinkler_scenario(1));
        const auto ex = ground_truth_sets(truth);
        CHECK(ex.children == std::set<std::string>{"sprinkler"});
        CHECK(ex.conditional_parents == std::set<std::string>{"rain"});
        CHECK(ex.ancestors == std::set<std::string>{"rain"});
    }
    SUBCASE("isolated time gives empty sets") {
        const Dag truth({"a", "b", std::string(kTimeFeatureName)},
                        std::vector<std::pair<int, int>>{{0, 1}});
        const auto ex = ground_truth_sets(truth);
        CHECK(ex.children.empty());
        CHECK(ex.conditional_parents.empty());
        CHECK(ex.ancestors.empty());
    }
    SUBCASE("time with parents is rejected") {
        const Dag bad({"a", std::string(kTimeFeatureName)},
                      std::vector<std::pair<int, int>>{{0, 1}});
        CHECK_THROWS_AS(ground_truth_sets(bad), DataError);
    }
    SUBCASE("multi-child truth includes child-to-child ancestry") {
        // time drives gain, loss and income; gain -> loss -> ... -> income
        const Dag truth({"age", "gain", "loss", "income", std::string(kTimeFeatureName)},
                        std::vector<std::pair<std::string, std::string>>{
                            {"age", "gain"},
                            {"gain", "loss"},
                            {"gain", "income"},
                            {"loss", "income"},
                            {kTimeFeatureName, "gain"},
                            {kTimeFeatureName, "loss"},
                            {kTimeFeatureName, "income"}});
        const auto ex = ground_truth_sets(truth);
        CHECK(ex.children == std::set<std::string>{"gain", "loss", "income"});
        CHECK(ex.conditional_parents == std::set<std::string>{"age"});
        CHECK(ex.ancestors == std::set<std::string>{"age", "gain", "loss"});
        CHECK(ex.ancestors_outside_children() == std::set<std::string>{"age"});
    }
}

TEST_CASE("build_reversal on the sprinkler net") {
    const auto timed = time_augmented_net(sprinkler_scenario(1));
    const auto model = build_reversal(timed, kTimeFeatureName, 1);

    SUBCASE("only the child kernel changes and no edges are added") {
        CHECK(model.added_edges.empty());
        CHECK(model.altered == std::set<std::string>{"sprinkler"});
        const auto& g = model.model.graph();
        REQUIRE(g.num_nodes() == 3);
        CHECK_FALSE(g.contains(kTimeFeatureName));
        // non-children keep their kernels verbatim
        const auto base = sprinkler_base();
        CHECK(model.model.cpt(g.index("rain")) == base.cpt(0));
        CHECK(model.model.cpt(g.index("wet")) == base.cpt(2));
        // the child kernel becomes the exact window-1 conditional, which for
        // this net is the post-drift table
        const auto& rows = model.model.cpt(g.index("sprinkler")).rows;
        REQUIRE(rows.size() == 2);
        CHECK(rows[0][0] == doctest::Approx(0.85).epsilon(1e-12));
        CHECK(rows[1][0] == doctest::Approx(0.98).epsilon(1e-12));
    }
    SUBCASE("the reversal reproduces the window law exactly") {
        CHECK(verify_reversal(timed, kTimeFeatureName, 1, model) < 1e-9);
        const auto model0 = build_reversal(timed, kTimeFeatureName, 0);
        CHECK(verify_reversal(timed, kTimeFeatureName, 0, model0) < 1e-9);
    }
}

TEST_CASE("build_reversal adds child-to-child edges in topological order") {
    // time drives two otherwise unrelated features
    Dag g({"a", "b", std::string(kTimeFeatureName)},
          std::vector<std::pair<std::string, std::string>>{{kTimeFeatureName, "a"},
                                                           {kTimeFeatureName, "b"}});
    FaithfulNetOptions options;
    options.time_feature = 2;
    const auto net = sample_faithful_net(g, {2, 2, 2}, 99, options);
    const auto model = build_reversal(net, kTimeFeatureName, 0);
    REQUIRE(model.added_edges.size() == 1);
    CHECK(model.added_edges[0] == std::pair<std::string, std::string>{"a", "b"});
    CHECK(verify_reversal(net, kTimeFeatureName, 0, model) < 1e-9);
}

TEST_CASE("reversal of a no-drift net is the net itself minus time") {
    Dag g({"x", "y", std::string(kTimeFeatureName)},
          std::vector<std::pair<std::string, std::string>>{{"x", "y"}});
    std::vector<Cpt> cpts(3);
    cpts[0] = Cpt{{{0.4, 0.6}}};
    cpts[1] = Cpt{{{0.75, 0.25}, {0.2, 0.8}}};
    cpts[2] = Cpt{{{0.5, 0.5}}};
    const CategoricalBayesNet net(g, {2, 2, 2}, cpts);
    const auto model = build_reversal(net, kTimeFeatureName, 1);
    CHECK(model.altered.empty());
    CHECK(model.added_edges.empty());
    CHECK(model.model.cpt(0) == cpts[0]);
    CHECK(model.model.cpt(1) == cpts[1]);
    CHECK(verify_reversal(net, kTimeFeatureName, 1, model) < 1e-12);
}

TEST_CASE("reversal is exact on random generic timed nets") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto net = random_timed_net(2 + static_cast<int>(seed % 4), seed);
        const int t = net.graph().index(kTimeFeatureName);
        for (int w = 0; w < net.cardinality(t); ++w) {
            const auto model = build_reversal(net, kTimeFeatureName, w);
            CHECK(verify_reversal(net, kTimeFeatureName, w, model) < 1e-9);
        }
    }
}

TEST_CASE("leaving a drifting child unaltered breaks the reversal") {
    const auto timed = time_augmented_net(sprinkler_scenario(1));
    const auto broken = build_restricted_reversal(timed, kTimeFeatureName, 1, {});
    CHECK(verify_reversal(timed, kTimeFeatureName, 1, broken) > 0.01);
}

TEST_CASE("restricted construction works iff the altered set covers the children") {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const int data_nodes = 3;
        const auto net = random_timed_net(data_nodes, 400 + seed, 1e-3);
        const int t = net.graph().index(kTimeFeatureName);
        const auto& children = net.graph().children(t);
        for (std::size_t mask = 0; mask < (std::size_t{1} << data_nodes); ++mask) {
            std::set<int> altered;
            for (int f = 0; f < data_nodes; ++f) {
                if (mask & (std::size_t{1} << f)) altered.insert(f);
            }
            const bool covers = std::includes(altered.begin(), altered.end(), children.begin(),
                                              children.end());
            const auto model = build_restricted_reversal(net, kTimeFeatureName, 1, altered);
            const double tv = verify_reversal(net, kTimeFeatureName, 1, model);
            if (covers) {
                CHECK(tv < 1e-9);
            } else {
                CHECK(tv >= 1e-9);
            }
        }
    }
}

TEST_CASE("minimality witnesses") {
    SUBCASE("sprinkler: the witness sits in the drifted window") {
        const auto timed = time_augmented_net(sprinkler_scenario(1));
        const auto witnesses = minimality_witness(timed, kTimeFeatureName, 1);
        REQUIRE(witnesses.size() == 1);
        CHECK(witnesses[0].feature == "sprinkler");
        CHECK_FALSE(witnesses[0].unfaithful);
        CHECK(witnesses[0].window == 1);
        CHECK(std::abs(witnesses[0].windowed - witnesses[0].marginal) > 1e-9);
    }
    SUBCASE("no-drift net has no witnesses to produce") {
        Dag g({"x", std::string(kTimeFeatureName)});
        CategoricalBayesNet net(g, {2, 2}, {Cpt{{{0.5, 0.5}}}, Cpt{{{0.5, 0.5}}}});
        CHECK(minimality_witness(net, kTimeFeatureName, 0).empty());
    }
    SUBCASE("a change confined to one parent row names that row") {
        Dag g({"p", "f", std::string(kTimeFeatureName)},
              std::vector<std::pair<std::string, std::string>>{{"p", "f"},
                                                               {kTimeFeatureName, "f"}});
        std::vector<Cpt> cpts(3);
        cpts[0] = Cpt{{{0.5, 0.5}}};
        // rows (p, t): only the p=1 rows depend on the window
        cpts[1] = Cpt{{{0.5, 0.5}, {0.5, 0.5}, {0.8, 0.2}, {0.2, 0.8}}};
        cpts[2] = Cpt{{{0.5, 0.5}}};
        const CategoricalBayesNet net(g, {2, 2, 2}, cpts);
        const auto witnesses = minimality_witness(net, kTimeFeatureName, 0);
        REQUIRE(witnesses.size() == 1);
        CHECK_FALSE(witnesses[0].unfaithful);
        CHECK(witnesses[0].parent_states == std::vector<int>{1});
    }
    SUBCASE("every child of a generic net gets a witness") {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const auto net = random_timed_net(3, 800 + seed);
            const auto witnesses = minimality_witness(net, kTimeFeatureName, 0);
            const int t = net.graph().index(kTimeFeatureName);
            CHECK(witnesses.size() == net.graph().children(t).size());
            for (const auto& w : witnesses) CHECK_FALSE(w.unfaithful);
        }
    }
}

TEST_CASE("reversal precondition errors") {
    const auto timed = time_augmented_net(sprinkler_scenario(1));
    CHECK_THROWS_AS(build_reversal(timed, "unknown", 0), DataError);
    CHECK_THROWS_AS(build_reversal(timed, kTimeFeatureName, 7), DataError);

    // time with a parent is not a valid root
    Dag g({"a", std::string(kTimeFeatureName)},
          std::vector<std::pair<std::string, std::string>>{{"a", kTimeFeatureName}});
    CategoricalBayesNet bad(g, {2, 2}, {Cpt{{{0.5, 0.5}}}, Cpt{{{0.5, 0.5}, {0.5, 0.5}}}});
    CHECK_THROWS_AS(build_reversal(bad, kTimeFeatureName, 0), DataError);

    // zero-probability window
    Dag g2({"a", std::string(kTimeFeatureName)},
           std::vector<std::pair<std::string, std::string>>{{kTimeFeatureName, "a"}});
    CategoricalBayesNet degenerate(g2, {2, 2},
                                   {Cpt{{{0.5, 0.5}, {0.1, 0.9}}}, Cpt{{{1.0, 0.0}}}});
    CHECK_THROWS_AS(build_reversal(degenerate, kTimeFeatureName, 1), DataError);
}

}  // TEST_SUITE
