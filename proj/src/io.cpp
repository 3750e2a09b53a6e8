#include "driftcause/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "driftcause/errors.hpp"

namespace driftcause {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kNetFormat = "driftcause-net";
constexpr const char* kScenarioFormat = "driftcause-scenario";

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const fs::path& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw DataError("write failed on " + path.string());
}

json parse_json(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw DataError(origin + ": " + e.what());
    }
}

void check_header(const json& doc, const std::string& origin, const char* format, int version) {
    if (!doc.is_object()) throw DataError(origin + ": expected a JSON object");
    if (!doc.contains("format") || doc["format"] != format) {
        throw DataError(origin + ": missing or wrong \"format\" (expected " + format + ")");
    }
    if (!doc.contains("version") || !doc["version"].is_number_integer()) {
        throw DataError(origin + ": missing \"version\"");
    }
    if (doc["version"].get<int>() != version) {
        throw DataError(origin + ": unsupported schema version " +
                        std::to_string(doc["version"].get<int>()) + " (expected " +
                        std::to_string(version) + ")");
    }
}

struct ParsedStructure {
    std::vector<std::string> names;
    std::vector<int> cards;
    std::vector<std::pair<std::string, std::string>> edges;
    std::optional<std::string> time_feature;
};

ParsedStructure parse_structure(const json& doc, const std::string& origin) {
    ParsedStructure out;
    if (!doc.contains("features") || !doc["features"].is_array() || doc["features"].empty()) {
        throw DataError(origin + ": missing \"features\" list");
    }
    for (const auto& feature : doc["features"]) {
        if (!feature.is_object() || !feature.contains("name") || !feature.contains("states")) {
            throw DataError(origin + ": each feature needs \"name\" and \"states\"");
        }
        const auto name = feature["name"].get<std::string>();
        const auto& states = feature["states"];
        if (!states.is_array() || states.size() < 2) {
            throw DataError(origin + ": feature " + name + " needs at least two states");
        }
        out.names.push_back(name);
        out.cards.push_back(static_cast<int>(states.size()));
    }
    if (doc.contains("time_feature")) {
        out.time_feature = doc["time_feature"].get<std::string>();
        if (std::find(out.names.begin(), out.names.end(), *out.time_feature) == out.names.end()) {
            throw DataError(origin + ": time_feature " + *out.time_feature +
                            " is not in the feature list");
        }
    }
    for (const auto& name : out.names) {
        if (name == kTimeFeatureName && out.time_feature != name) {
            throw DataError(origin + ": feature name " + name +
                            " is reserved for the designated time feature");
        }
    }
    if (doc.contains("edges")) {
        if (!doc["edges"].is_array()) throw DataError(origin + ": \"edges\" must be a list");
        for (const auto& edge : doc["edges"]) {
            if (!edge.is_array() || edge.size() != 2) {
                throw DataError(origin + ": each edge is a [parent, child] pair");
            }
            out.edges.emplace_back(edge[0].get<std::string>(), edge[1].get<std::string>());
        }
    }
    return out;
}

Cpt parse_cpt(const json& rows, const std::string& origin, const std::string& feature) {
    if (!rows.is_array() || rows.empty()) {
        throw DataError(origin + ": CPT of " + feature + " must be a non-empty list of rows");
    }
    Cpt cpt;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (!row.is_array() || row.empty()) {
            throw DataError(origin + ": CPT of " + feature + ", row " + std::to_string(r) +
                            ": expected a list of probabilities");
        }
        std::vector<double> values;
        for (const auto& v : row) {
            if (!v.is_number()) {
                throw DataError(origin + ": CPT of " + feature + ", row " + std::to_string(r) +
                                ": non-numeric entry");
            }
            values.push_back(v.get<double>());
        }
        cpt.rows.push_back(std::move(values));
    }
    return cpt;
}

json net_to_json(const CategoricalBayesNet& net, const std::optional<std::string>& time_feature) {
    const auto& g = net.graph();
    json doc;
    doc["format"] = kNetFormat;
    doc["version"] = kNetSchemaVersion;
    json features = json::array();
    for (int f = 0; f < g.num_nodes(); ++f) {
        json states = json::array();
        for (int s = 0; s < net.cardinality(f); ++s) states.push_back("s" + std::to_string(s));
        features.push_back({{"name", g.name(f)}, {"states", states}});
    }
    doc["features"] = features;
    json edges = json::array();
    for (const auto& [u, v] : g.edges()) edges.push_back({g.name(u), g.name(v)});
    doc["edges"] = edges;
    json cpts;
    for (int f = 0; f < g.num_nodes(); ++f) cpts[g.name(f)] = net.cpt(f).rows;
    doc["cpts"] = cpts;
    if (time_feature) doc["time_feature"] = *time_feature;
    return doc;
}

DataTable csv_to_table(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw DataError(origin + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> names;
    {
        std::istringstream header(line);
        std::string cell;
        while (std::getline(header, cell, ',')) names.push_back(cell);
    }
    if (names.empty()) throw DataError(origin + ": no columns");

    std::vector<std::vector<int>> columns(names.size());
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::size_t col = 0;
        while (std::getline(row, cell, ',')) {
            if (col >= names.size()) break;
            try {
                std::size_t used = 0;
                const int value = std::stoi(cell, &used);
                if (used != cell.size() || value < 0) throw std::invalid_argument(cell);
                columns[col].push_back(value);
            } catch (const std::exception&) {
                throw DataError(origin + ": line " + std::to_string(line_no) + ", column " +
                                names[col] + ": expected a non-negative integer, got \"" + cell +
                                "\"");
            }
            ++col;
        }
        if (col != names.size()) {
            throw DataError(origin + ": line " + std::to_string(line_no) + ": expected " +
                            std::to_string(names.size()) + " cells, got " + std::to_string(col));
        }
    }

    std::vector<int> cards(names.size(), 1);
    for (std::size_t c = 0; c < names.size(); ++c) {
        for (int v : columns[c]) cards[c] = std::max(cards[c], v + 1);
    }
    DataTable table(names, cards);
    std::vector<int> record(names.size());
    const std::size_t n = columns.empty() ? 0 : columns[0].size();
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < names.size(); ++c) record[c] = columns[c][r];
        table.append_row(record);
    }
    return table;
}

std::string table_to_csv(const DataTable& table) {
    std::ostringstream out;
    for (int c = 0; c < table.num_columns(); ++c) {
        if (c) out << ',';
        const auto& name = table.column_name(c);
        if (name.find(',') != std::string::npos || name.find('\n') != std::string::npos) {
            throw DataError("CSV export: column name contains a separator: " + name);
        }
        out << name;
    }
    out << '\n';
    for (std::size_t r = 0; r < table.num_rows(); ++r) {
        for (int c = 0; c < table.num_columns(); ++c) {
            if (c) out << ',';
            out << table.value(r, c);
        }
        out << '\n';
    }
    return out.str();
}

json explanation_to_json(const Explanation& ex) {
    json doc;
    doc["children"] = ex.children;
    doc["conditional_parents"] = ex.conditional_parents;
    doc["ancestors"] = ex.ancestors;
    doc["ancestors_outside_children"] = ex.ancestors_outside_children();
    doc["ambiguous"] = ex.ambiguous;
    doc["child_max_p"] = ex.child_max_p;
    json directed = json::array();
    for (const auto& [u, v] : ex.graph.directed_edges()) {
        directed.push_back({ex.graph.name(u), ex.graph.name(v)});
    }
    json undirected = json::array();
    for (const auto& [a, b] : ex.graph.undirected_edges()) {
        undirected.push_back({ex.graph.name(a), ex.graph.name(b)});
    }
    doc["graph"] = {{"directed", directed}, {"undirected", undirected}};
    doc["conflicts"] = ex.discovery_conflicts;
    return doc;
}

json edge_diff_to_json(const EdgeDiff& diff) {
    json per_edge = json::array();
    for (const auto& record : diff.per_edge) {
        per_edge.push_back(
            {{"from", record.from}, {"to", record.to}, {"class", edge_class_name(record.cls)}});
    }
    return {{"correct", diff.correct},
            {"reversed", diff.reversed},
            {"missing", diff.missing},
            {"extra", diff.extra},
            {"per_edge", per_edge}};
}

}  // namespace

LoadedNet net_from_string(const std::string& text, const std::string& origin) {
    const json doc = parse_json(text, origin);
    check_header(doc, origin, kNetFormat, kNetSchemaVersion);
    const auto structure = parse_structure(doc, origin);
    if (!doc.contains("cpts") || !doc["cpts"].is_object()) {
        throw DataError(origin + ": missing \"cpts\" block (graph-only files load with load_graph)");
    }
    Dag graph(structure.names, structure.edges);
    std::vector<Cpt> cpts;
    for (const auto& name : structure.names) {
        if (!doc["cpts"].contains(name)) {
            throw DataError(origin + ": no CPT for feature " + name);
        }
        cpts.push_back(parse_cpt(doc["cpts"][name], origin, name));
    }
    for (const auto& [key, value] : doc["cpts"].items()) {
        (void)value;
        if (std::find(structure.names.begin(), structure.names.end(), key) ==
            structure.names.end()) {
            throw DataError(origin + ": CPT for unknown feature " + key);
        }
    }
    LoadedNet loaded{CategoricalBayesNet(std::move(graph), structure.cards, std::move(cpts)),
                     structure.time_feature};
    const auto violations = validate(loaded.net);
    if (!violations.empty()) {
        std::string msg = origin + ": invalid net:";
        for (const auto& v : violations) {
            msg += " [" + v.feature + (v.row >= 0 ? " row " + std::to_string(v.row) : "") + ": " +
                   v.message + "]";
        }
        throw DataError(msg);
    }
    return loaded;
}

LoadedNet load_net(const fs::path& path) {
    return net_from_string(read_text_file(path), path.string());
}

std::string net_to_string(const CategoricalBayesNet& net,
                          const std::optional<std::string>& time_feature) {
    return net_to_json(net, time_feature).dump(2) + "\n";
}

void save_net(const CategoricalBayesNet& net, const std::optional<std::string>& time_feature,
              const fs::path& path) {
    write_text_file(path, net_to_string(net, time_feature));
}

Dag load_graph(const fs::path& path) {
    const std::string origin = path.string();
    const json doc = parse_json(read_text_file(path), origin);
    check_header(doc, origin, kNetFormat, kNetSchemaVersion);
    const auto structure = parse_structure(doc, origin);
    return Dag(structure.names, structure.edges);
}

ScenarioSpec load_scenario(const fs::path& path) {
    const std::string origin = path.string();
    const json doc = parse_json(read_text_file(path), origin);
    check_header(doc, origin, kScenarioFormat, kScenarioSchemaVersion);
    if (!doc.contains("base_net") || !doc["base_net"].is_string()) {
        throw DataError(origin + ": missing \"base_net\" path");
    }
    fs::path net_path = doc["base_net"].get<std::string>();
    if (net_path.is_relative()) net_path = path.parent_path() / net_path;
    auto loaded = load_net(net_path);
    if (loaded.time_feature) {
        throw DataError(origin + ": scenario base nets must not designate a time feature");
    }

    ScenarioSpec spec;
    spec.base_net = std::move(loaded.net);
    if (doc.contains("modifications")) {
        if (!doc["modifications"].is_array()) {
            throw DataError(origin + ": \"modifications\" must be a list");
        }
        for (const auto& mod : doc["modifications"]) {
            if (!mod.is_object() || !mod.contains("feature") || !mod.contains("cpt")) {
                throw DataError(origin + ": each modification needs \"feature\" and \"cpt\"");
            }
            const auto feature = mod["feature"].get<std::string>();
            spec.modifications.emplace_back(feature, parse_cpt(mod["cpt"], origin, feature));
        }
    }
    if (!doc.contains("pre_count") || !doc.contains("post_count")) {
        throw DataError(origin + ": missing \"pre_count\"/\"post_count\"");
    }
    spec.pre_count = doc["pre_count"].get<std::size_t>();
    spec.post_count = doc["post_count"].get<std::size_t>();
    spec.seed = doc.value("seed", std::uint64_t{0});
    spec.windows = doc.value("windows", 2);
    spec.align_drift_to_window = doc.value("align_drift_to_window", true);
    if (spec.windows < 2) throw DataError(origin + ": windows must be >= 2");
    // Validity of the modified net (shapes, row sums) is checked here so the
    // error names the file rather than a later sampling step.
    try {
        (void)modified_net(spec);
    } catch (const std::exception& e) {
        throw DataError(origin + ": " + e.what());
    }
    return spec;
}

void save_scenario(const ScenarioSpec& spec, const fs::path& base_net_path, const fs::path& path) {
    json doc;
    doc["format"] = kScenarioFormat;
    doc["version"] = kScenarioSchemaVersion;
    doc["base_net"] = base_net_path.string();
    json mods = json::array();
    for (const auto& [feature, cpt] : spec.modifications) {
        mods.push_back({{"feature", feature}, {"cpt", cpt.rows}});
    }
    doc["modifications"] = mods;
    doc["pre_count"] = spec.pre_count;
    doc["post_count"] = spec.post_count;
    doc["seed"] = spec.seed;
    doc["windows"] = spec.windows;
    doc["align_drift_to_window"] = spec.align_drift_to_window;
    write_text_file(path, doc.dump(2) + "\n");
}

void save_stream_csv(const DriftStream& stream, const fs::path& path) {
    write_text_file(path, table_to_csv(stream.records));
}

DriftStream load_stream_csv(const fs::path& path) {
    const std::string origin = path.string();
    DataTable table = csv_to_table(read_text_file(path), origin);
    if (!table.has_column(kTimeFeatureName)) {
        throw DataError(origin + ": stream lacks the time column " + std::string(kTimeFeatureName));
    }
    DriftStream stream;
    const auto& time = table.column(table.column_index(kTimeFeatureName));
    int previous = 0;
    for (std::size_t i = 0; i < time.size(); ++i) {
        if (i == 0 && time[0] != 0) throw DataError(origin + ": time column must start at window 0");
        if (time[i] < previous || time[i] > previous + 1) {
            throw DataError(origin + ": time column must be a contiguous nondecreasing window index"
                            " (row " + std::to_string(i + 2) + ")");
        }
        previous = time[i];
    }
    stream.windows = time.empty() ? 0 : previous + 1;
    stream.records = std::move(table);
    return stream;
}

std::string serialize_explanation(const Explanation& ex) {
    return explanation_to_json(ex).dump(2) + "\n";
}

std::string serialize_report(const RunReport& report) {
    json doc;
    doc["base_seed"] = report.base_seed;
    doc["runs_requested"] = report.runs_requested;
    doc["failed_runs"] = report.failed_runs;
    doc["aggregate"] = {{"children", report.child_counts},
                        {"parents", report.parent_counts},
                        {"ancestors", report.ancestor_counts},
                        {"edges", report.edge_counts}};
    json runs = json::array();
    for (const auto& record : report.runs) {
        json entry;
        entry["seed"] = record.seed;
        entry["failed"] = record.failed;
        if (record.failed) {
            entry["error"] = record.error;
        } else {
            entry["edge_diff"] = edge_diff_to_json(record.edge_diff);
            entry["explanation"] = explanation_to_json(record.explanation);
        }
        runs.push_back(entry);
    }
    doc["runs"] = runs;
    return doc.dump(2) + "\n";
}

std::string serialize_run_log(const std::vector<PcLogEntry>& log, const DataTable& data) {
    json entries = json::array();
    for (const auto& entry : log) {
        json z = json::array();
        for (int f : entry.z) z.push_back(data.column_name(f));
        entries.push_back({{"x", data.column_name(entry.x)},
                           {"y", data.column_name(entry.y)},
                           {"z", z},
                           {"statistic", entry.result.statistic},
                           {"dof", entry.result.dof},
                           {"p_value", entry.result.p_value},
                           {"independent", entry.result.independent},
                           {"reliable", entry.result.reliable},
                           {"action", entry.action}});
    }
    return entries.dump(2) + "\n";
}

namespace {

struct DiscoveryFlags {
    double alpha = 0.05;
    std::string background = "on";
    double adequacy = 10.0;
    int max_cond_size = -1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--alpha", alpha, "significance level for the g-square test")
            ->check(CLI::Range(1e-9, 1.0 - 1e-9));
        cmd->add_option("--background-time", background,
                        "treat the time feature as causeless background knowledge (on|off)")
            ->check(CLI::IsMember({"on", "off"}));
        cmd->add_option("--adequacy", adequacy,
                        "sample-adequacy factor: tests with n < factor * dof count as independent");
        cmd->add_option("--max-cond-size", max_cond_size,
                        "largest conditioning set size (-1 = unbounded)");
    }

    PcConfig config() const {
        PcConfig pc_config;
        pc_config.alpha = alpha;
        pc_config.adequacy_factor = adequacy;
        pc_config.max_cond_size = max_cond_size;
        if (background == "on") pc_config.background_time = kTimeFeatureName;
        return pc_config;
    }
};

int dispatch(int argc, const char* const* argv) {
    CLI::App app{"causal concept-drift explanation toolkit"};
    app.require_subcommand(1);

    // sample
    auto* sample_cmd = app.add_subcommand("sample", "draw records from a net file");
    std::string sample_net;
    std::size_t sample_n = 1000;
    std::uint64_t sample_seed = 0;
    std::string sample_out = "-";
    sample_cmd->add_option("--net", sample_net, "net specification file")->required();
    sample_cmd->add_option("--n", sample_n, "number of records");
    sample_cmd->add_option("--seed", sample_seed, "RNG seed");
    sample_cmd->add_option("--out", sample_out, "output CSV path (- for stdout)");

    // scenario
    auto* scenario_cmd = app.add_subcommand("scenario", "build a drift stream CSV from a scenario file");
    std::string scenario_path;
    std::string scenario_out = "-";
    std::optional<std::uint64_t> scenario_seed;
    std::optional<int> scenario_windows;
    scenario_cmd->add_option("--scenario", scenario_path, "scenario file")->required();
    scenario_cmd->add_option("--out", scenario_out, "output CSV path (- for stdout)");
    scenario_cmd->add_option("--seed", scenario_seed, "override the scenario seed");
    scenario_cmd->add_option("--windows", scenario_windows, "override the window count");

    // discover
    auto* discover_cmd = app.add_subcommand("discover", "run causal discovery on a stream CSV");
    std::string discover_stream;
    std::string discover_out = "-";
    std::string discover_log;
    DiscoveryFlags discover_flags;
    discover_cmd->add_option("--stream", discover_stream, "stream CSV")->required();
    discover_cmd->add_option("--out", discover_out, "output DOT path (- for stdout)");
    discover_cmd->add_option("--log", discover_log, "write the CI run log (JSON) here");
    discover_flags.attach(discover_cmd);

    // explain
    auto* explain_cmd = app.add_subcommand("explain", "extract the drift explanation from a stream CSV");
    std::string explain_stream;
    std::string explain_out = "-";
    DiscoveryFlags explain_flags;
    explain_cmd->add_option("--stream", explain_stream, "stream CSV")->required();
    explain_cmd->add_option("--out", explain_out, "output JSON path (- for stdout)");
    explain_flags.attach(explain_cmd);

    // evaluate
    auto* evaluate_cmd = app.add_subcommand("evaluate", "multi-run stability report for a scenario");
    std::string evaluate_scenario;
    std::string evaluate_truth;
    std::string evaluate_report = "-";
    std::string evaluate_dot;
    int evaluate_runs = 10;
    std::optional<std::uint64_t> evaluate_seed;
    std::optional<int> evaluate_windows;
    DiscoveryFlags evaluate_flags;
    evaluate_cmd->add_option("--scenario", evaluate_scenario, "scenario file")->required();
    evaluate_cmd->add_option("--truth", evaluate_truth,
                             "ground-truth graph file (default: derived from the scenario)");
    evaluate_cmd->add_option("--runs", evaluate_runs, "number of runs")->check(CLI::PositiveNumber);
    evaluate_cmd->add_option("--seed", evaluate_seed, "override the scenario base seed");
    evaluate_cmd->add_option("--windows", evaluate_windows, "override the window count");
    evaluate_cmd->add_option("--report", evaluate_report, "report JSON path (- for stdout)");
    evaluate_cmd->add_option("--dot", evaluate_dot, "annotated DOT output path");
    evaluate_flags.attach(evaluate_cmd);

    // verify-thm3
    auto* verify_cmd = app.add_subcommand(
        "verify-thm3", "build the drift-reversal model for one window and verify it exactly");
    std::string verify_net;
    int verify_window = 1;
    std::string verify_out;
    verify_cmd->add_option("--net", verify_net, "time-augmented net file")->required();
    verify_cmd->add_option("--window", verify_window, "window index");
    verify_cmd->add_option("--out", verify_out, "write the reversal model as a net file here");

    // dot
    auto* dot_cmd = app.add_subcommand("dot", "render a net or graph file as DOT");
    std::string dot_net;
    std::string dot_out = "-";
    dot_cmd->add_option("--net", dot_net, "net or graph file")->required();
    dot_cmd->add_option("--out", dot_out, "output DOT path (- for stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (sample_cmd->parsed()) {
        const auto loaded = load_net(sample_net);
        const auto table = sample(loaded.net, sample_n, sample_seed);
        write_text_file(sample_out, table_to_csv(table));
        return 0;
    }
    if (scenario_cmd->parsed()) {
        ScenarioSpec spec = load_scenario(scenario_path);
        if (scenario_seed) spec.seed = *scenario_seed;
        if (scenario_windows) spec.windows = *scenario_windows;
        save_stream_csv(build_stream(spec), scenario_out);
        return 0;
    }
    if (discover_cmd->parsed()) {
        const auto stream = load_stream_csv(discover_stream);
        const auto config = discover_flags.config();
        GSquareTester tester(stream.records, config.alpha, config.adequacy_factor);
        const auto result = pc(stream.records, tester, config);
        write_text_file(discover_out, to_dot(result.graph));
        if (!discover_log.empty()) {
            write_text_file(discover_log, serialize_run_log(result.log, stream.records));
        }
        for (const auto& conflict : result.conflicts) std::cerr << "conflict: " << conflict << "\n";
        return 0;
    }
    if (explain_cmd->parsed()) {
        const auto stream = load_stream_csv(explain_stream);
        const auto explanation = explain_drift(stream, explain_flags.config());
        write_text_file(explain_out, serialize_explanation(explanation));
        return 0;
    }
    if (evaluate_cmd->parsed()) {
        ScenarioSpec spec = load_scenario(evaluate_scenario);
        if (evaluate_seed) spec.seed = *evaluate_seed;
        if (evaluate_windows) spec.windows = *evaluate_windows;
        const Dag truth = evaluate_truth.empty() ? scenario_truth_graph(spec)
                                                 : load_graph(evaluate_truth);
        EvalConfig config;
        config.pc = evaluate_flags.config();
        const auto report = run_experiment(spec, truth, evaluate_runs, config);
        write_text_file(evaluate_report, serialize_report(report));
        if (!evaluate_dot.empty()) {
            write_text_file(evaluate_dot, render_report(report, truth).dot);
        }
        double total_wall = 0.0;
        for (const auto& record : report.runs) total_wall += record.wall_seconds;
        std::fprintf(stderr, "evaluate: %d runs, %.2fs wall total (%.3fs/run)\n",
                     report.runs_requested, total_wall,
                     total_wall / std::max(1, report.runs_requested));
        return 0;
    }
    if (verify_cmd->parsed()) {
        const auto loaded = load_net(verify_net);
        if (!loaded.time_feature) {
            throw DataError(verify_net + ": net does not designate a time feature");
        }
        const auto model = build_reversal(loaded.net, *loaded.time_feature, verify_window);
        const double tv = verify_reversal(loaded.net, *loaded.time_feature, verify_window, model);
        std::printf("window %d: total variation %.3e (%s)\n", verify_window, tv,
                    tv < 1e-9 ? "exact" : "MISMATCH");
        const auto witnesses = minimality_witness(loaded.net, *loaded.time_feature, verify_window);
        for (const auto& w : witnesses) {
            if (w.unfaithful) {
                std::printf("child %s: no kernel-change witness (unfaithful fixture)\n",
                            w.feature.c_str());
                continue;
            }
            std::ostringstream row;
            for (std::size_t i = 0; i < w.parent_states.size(); ++i) {
                if (i) row << ",";
                row << w.parent_states[i];
            }
            std::printf("child %s: kernel must change in window %d (row [%s], state %d: "
                        "%.6f vs marginal %.6f)\n",
                        w.feature.c_str(), w.window, row.str().c_str(), w.state, w.windowed,
                        w.marginal);
        }
        if (!verify_out.empty()) {
            save_net(model.model, std::nullopt, verify_out);
        }
        return tv < 1e-9 ? 0 : 2;
    }
    if (dot_cmd->parsed()) {
        write_text_file(dot_out, to_dot(load_graph(dot_net)));
        return 0;
    }
    return 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    try {
        return dispatch(argc, argv);
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace driftcause
