#include "driftcause/bayes_net.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "driftcause/errors.hpp"
#include "driftcause/rng.hpp"
#include "driftcause/state_space.hpp"

namespace driftcause {

namespace {
constexpr double kRowSumTolerance = 1e-9;
}

CategoricalBayesNet::CategoricalBayesNet(Dag graph, std::vector<int> cardinalities,
                                         std::vector<Cpt> cpts)
    : graph_(std::move(graph)), cards_(std::move(cardinalities)), cpts_(std::move(cpts)) {
    if (cards_.size() != static_cast<std::size_t>(graph_.num_nodes()) ||
        cpts_.size() != static_cast<std::size_t>(graph_.num_nodes())) {
        throw std::invalid_argument("CategoricalBayesNet: per-feature vectors must match node count");
    }
}

int CategoricalBayesNet::cardinality(int feature) const {
    graph_.name(feature);  // range check
    return cards_[static_cast<std::size_t>(feature)];
}

const Cpt& CategoricalBayesNet::cpt(int feature) const {
    graph_.name(feature);
    return cpts_[static_cast<std::size_t>(feature)];
}

std::vector<int> CategoricalBayesNet::parent_list(int feature) const {
    const auto& ps = graph_.parents(feature);
    return {ps.begin(), ps.end()};  // std::set iterates ascending
}

std::size_t CategoricalBayesNet::row_index(int feature, std::span<const int> assignment) const {
    std::size_t idx = 0;
    for (int p : graph_.parents(feature)) {
        idx = idx * static_cast<std::size_t>(cards_[static_cast<std::size_t>(p)]) +
              static_cast<std::size_t>(assignment[static_cast<std::size_t>(p)]);
    }
    return idx;
}

bool CategoricalBayesNet::operator==(const CategoricalBayesNet& other) const {
    return graph_ == other.graph_ && cards_ == other.cards_ && cpts_ == other.cpts_;
}

JointTable::JointTable(std::vector<std::string> features, std::vector<int> cardinalities,
                       std::vector<double> probabilities)
    : features_(std::move(features)), cards_(std::move(cardinalities)),
      probs_(std::move(probabilities)) {
    if (features_.size() != cards_.size()) {
        throw std::invalid_argument("JointTable: features and cardinalities differ in length");
    }
    if (probs_.size() != state_space_size(cards_)) {
        throw std::invalid_argument("JointTable: probability vector has wrong length");
    }
}

int JointTable::feature_index(const std::string& name) const {
    for (std::size_t i = 0; i < features_.size(); ++i) {
        if (features_[i] == name) return static_cast<int>(i);
    }
    throw std::invalid_argument("JointTable: unknown feature " + name);
}

double JointTable::prob(std::span<const int> assignment) const {
    auto strides = mixed_radix_strides(cards_);
    return probs_[mixed_radix_index(assignment, strides)];
}

std::vector<CptViolation> validate(const CategoricalBayesNet& net) {
    std::vector<CptViolation> out;
    const auto& g = net.graph();
    for (int f = 0; f < g.num_nodes(); ++f) {
        const auto uf = static_cast<std::size_t>(f);
        const int card = net.cardinalities()[uf];
        if (card < 2) {
            out.push_back({g.name(f), -1, "cardinality must be >= 2"});
            continue;
        }
        std::size_t expected_rows = 1;
        for (int p : g.parents(f)) {
            expected_rows *= static_cast<std::size_t>(net.cardinalities()[static_cast<std::size_t>(p)]);
        }
        const auto& cpt = net.cpts()[uf];
        if (cpt.rows.size() != expected_rows) {
            out.push_back({g.name(f), -1,
                           "expected " + std::to_string(expected_rows) + " CPT rows, got " +
                               std::to_string(cpt.rows.size())});
            continue;
        }
        for (std::size_t r = 0; r < cpt.rows.size(); ++r) {
            const auto& row = cpt.rows[r];
            if (row.size() != static_cast<std::size_t>(card)) {
                out.push_back({g.name(f), static_cast<int>(r), "row width differs from cardinality"});
                continue;
            }
            double sum = 0.0;
            bool negative = false;
            for (double v : row) {
                if (v < 0.0) negative = true;
                sum += v;
            }
            if (negative) out.push_back({g.name(f), static_cast<int>(r), "negative entry"});
            if (std::abs(sum - 1.0) > kRowSumTolerance) {
                out.push_back({g.name(f), static_cast<int>(r),
                               "row sums to " + std::to_string(sum) + ", expected 1"});
            }
        }
    }
    return out;
}

void validate_or_throw(const CategoricalBayesNet& net) {
    auto violations = validate(net);
    if (violations.empty()) return;
    std::string msg = "invalid net:";
    for (const auto& v : violations) {
        msg += " [" + v.feature + (v.row >= 0 ? " row " + std::to_string(v.row) : "") + ": " +
               v.message + "]";
    }
    throw DataError(msg);
}

DataTable sample(const CategoricalBayesNet& net, std::size_t n, std::uint64_t seed) {
    validate_or_throw(net);
    const auto& g = net.graph();
    DataTable table(g.node_names(), net.cardinalities());
    const auto order = g.topological_order();
    Rng rng(seed);
    std::vector<int> record(static_cast<std::size_t>(g.num_nodes()));
    for (std::size_t i = 0; i < n; ++i) {
        for (int f : order) {
            const auto& row = net.cpt(f).rows[net.row_index(f, record)];
            record[static_cast<std::size_t>(f)] = rng.categorical(row);
        }
        table.append_row(record);
    }
    return table;
}

JointTable enumerate_joint(const CategoricalBayesNet& net, std::size_t cap) {
    validate_or_throw(net);
    const auto& g = net.graph();
    const std::size_t total = state_space_size(net.cardinalities());
    if (total > cap) {
        throw DataError("enumerate_joint: state space of " + std::to_string(total) +
                        " assignments exceeds the cap of " + std::to_string(cap));
    }
    std::vector<double> probs(total);
    std::vector<int> assignment(static_cast<std::size_t>(g.num_nodes()), 0);
    std::size_t idx = 0;
    do {
        double p = 1.0;
        for (int f = 0; f < g.num_nodes(); ++f) {
            p *= net.cpt(f).rows[net.row_index(f, assignment)]
                              [static_cast<std::size_t>(assignment[static_cast<std::size_t>(f)])];
        }
        probs[idx++] = p;
    } while (next_assignment(assignment, net.cardinalities()));
    return JointTable(g.node_names(), net.cardinalities(), std::move(probs));
}

CategoricalBayesNet intervene(const CategoricalBayesNet& net, const Intervention& iv) {
    validate_or_throw(net);
    if (iv.assignments.empty()) throw std::invalid_argument("intervene: empty target set");
    const auto& g = net.graph();
    std::vector<std::pair<int, int>> targets;
    for (const auto& [name, value] : iv.assignments) {
        if (!g.contains(name)) throw DataError("intervene: unknown feature " + name);
        int f = g.index(name);
        if (value < 0 || value >= net.cardinality(f)) {
            throw DataError("intervene: value out of range for " + name);
        }
        targets.emplace_back(f, value);
    }
    std::set<int> target_set;
    for (const auto& [f, v] : targets) {
        (void)v;
        if (!target_set.insert(f).second) {
            throw DataError("intervene: duplicate target " + g.name(f));
        }
    }
    std::vector<std::pair<int, int>> edges;
    for (const auto& [u, v] : g.edges()) {
        if (!target_set.count(v)) edges.emplace_back(u, v);
    }
    Dag cut(g.node_names(), edges);
    auto cpts = net.cpts();
    for (const auto& [f, value] : targets) {
        std::vector<double> point(static_cast<std::size_t>(net.cardinality(f)), 0.0);
        point[static_cast<std::size_t>(value)] = 1.0;
        cpts[static_cast<std::size_t>(f)] = Cpt{{point}};
    }
    return CategoricalBayesNet(std::move(cut), net.cardinalities(), std::move(cpts));
}

JointTable condition(const JointTable& joint, const std::vector<std::pair<int, int>>& evidence) {
    if (evidence.empty()) return joint;
    const auto& cards = joint.cardinalities();
    std::vector<int> fixed(cards.size(), -1);
    for (const auto& [f, v] : evidence) {
        if (f < 0 || static_cast<std::size_t>(f) >= cards.size()) {
            throw std::invalid_argument("condition: feature index out of range");
        }
        if (v < 0 || v >= cards[static_cast<std::size_t>(f)]) {
            throw std::invalid_argument("condition: state out of range");
        }
        if (fixed[static_cast<std::size_t>(f)] != -1) {
            throw std::invalid_argument("condition: duplicate evidence feature");
        }
        fixed[static_cast<std::size_t>(f)] = v;
    }
    std::vector<std::string> rest_names;
    std::vector<int> rest_cards;
    std::vector<int> rest_pos;
    for (std::size_t i = 0; i < cards.size(); ++i) {
        if (fixed[i] == -1) {
            rest_names.push_back(joint.features()[i]);
            rest_cards.push_back(cards[i]);
            rest_pos.push_back(static_cast<int>(i));
        }
    }
    std::vector<double> probs(state_space_size(rest_cards), 0.0);
    std::vector<int> assignment(cards.size(), 0);
    auto strides = mixed_radix_strides(cards);
    auto rest_strides = mixed_radix_strides(rest_cards);
    double total = 0.0;
    std::size_t idx = 0;
    do {
        bool match = true;
        for (std::size_t i = 0; i < cards.size(); ++i) {
            if (fixed[i] != -1 && assignment[i] != fixed[i]) {
                match = false;
                break;
            }
        }
        if (match) {
            const double p = joint.probabilities()[idx];
            total += p;
            std::size_t rest_idx = 0;
            for (std::size_t i = 0; i < rest_pos.size(); ++i) {
                rest_idx += static_cast<std::size_t>(assignment[static_cast<std::size_t>(rest_pos[i])]) *
                            rest_strides[i];
            }
            probs[rest_idx] += p;
        }
        ++idx;
    } while (next_assignment(assignment, cards));
    (void)strides;
    if (total <= 0.0) throw DataError("condition: evidence event has zero probability");
    for (auto& p : probs) p /= total;
    return JointTable(std::move(rest_names), std::move(rest_cards), std::move(probs));
}

JointTable marginal(const JointTable& joint, const std::vector<int>& keep) {
    const auto& cards = joint.cardinalities();
    std::vector<std::string> names;
    std::vector<int> out_cards;
    for (int f : keep) {
        if (f < 0 || static_cast<std::size_t>(f) >= cards.size()) {
            throw std::invalid_argument("marginal: feature index out of range");
        }
        names.push_back(joint.features()[static_cast<std::size_t>(f)]);
        out_cards.push_back(cards[static_cast<std::size_t>(f)]);
    }
    std::vector<double> probs(state_space_size(out_cards), 0.0);
    auto out_strides = mixed_radix_strides(out_cards);
    std::vector<int> assignment(cards.size(), 0);
    std::size_t idx = 0;
    do {
        std::size_t out_idx = 0;
        for (std::size_t i = 0; i < keep.size(); ++i) {
            out_idx += static_cast<std::size_t>(assignment[static_cast<std::size_t>(keep[i])]) *
                       out_strides[i];
        }
        probs[out_idx] += joint.probabilities()[idx++];
    } while (next_assignment(assignment, cards));
    return JointTable(std::move(names), std::move(out_cards), std::move(probs));
}

double total_variation(const JointTable& p, const JointTable& q) {
    if (p.features() != q.features() || p.cardinalities() != q.cardinalities()) {
        throw std::invalid_argument("total_variation: tables range over different state spaces");
    }
    double l1 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        l1 += std::abs(p.probabilities()[i] - q.probabilities()[i]);
    }
    return 0.5 * l1;
}

CategoricalBayesNet modify_cpt(const CategoricalBayesNet& net, int feature, Cpt replacement) {
    net.graph().name(feature);
    auto cpts = net.cpts();
    cpts[static_cast<std::size_t>(feature)] = std::move(replacement);
    CategoricalBayesNet out(net.graph(), net.cardinalities(), std::move(cpts));
    validate_or_throw(out);
    return out;
}

CategoricalBayesNet modify_cpt(const CategoricalBayesNet& net, const std::string& feature,
                               Cpt replacement) {
    if (!net.graph().contains(feature)) throw DataError("modify_cpt: unknown feature " + feature);
    return modify_cpt(net, net.graph().index(feature), std::move(replacement));
}

bool exact_ci(const JointTable& joint, int x, int y, const std::vector<int>& z, double tol) {
    if (x == y) throw std::invalid_argument("exact_ci: x and y must differ");
    for (int f : z) {
        if (f == x || f == y) throw std::invalid_argument("exact_ci: overlapping arguments");
    }
    const auto& cards = joint.cardinalities();
    const int cx = cards.at(static_cast<std::size_t>(x));
    const int cy = cards.at(static_cast<std::size_t>(y));
    std::vector<int> z_cards;
    for (int f : z) z_cards.push_back(cards.at(static_cast<std::size_t>(f)));
    const std::size_t z_total = state_space_size(z_cards);
    auto z_strides = mixed_radix_strides(z_cards);

    // Accumulate P(x, y, z-config), then check the factorization within each
    // positive-probability stratum.
    std::vector<double> cell(z_total * static_cast<std::size_t>(cx) * static_cast<std::size_t>(cy),
                             0.0);
    std::vector<int> assignment(cards.size(), 0);
    std::size_t idx = 0;
    do {
        std::size_t zi = 0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            zi += static_cast<std::size_t>(assignment[static_cast<std::size_t>(z[i])]) * z_strides[i];
        }
        const auto xi = static_cast<std::size_t>(assignment[static_cast<std::size_t>(x)]);
        const auto yi = static_cast<std::size_t>(assignment[static_cast<std::size_t>(y)]);
        cell[(zi * static_cast<std::size_t>(cx) + xi) * static_cast<std::size_t>(cy) + yi] +=
            joint.probabilities()[idx++];
    } while (next_assignment(assignment, cards));

    for (std::size_t zi = 0; zi < z_total; ++zi) {
        double stratum = 0.0;
        std::vector<double> px(static_cast<std::size_t>(cx), 0.0);
        std::vector<double> py(static_cast<std::size_t>(cy), 0.0);
        for (int xi = 0; xi < cx; ++xi) {
            for (int yi = 0; yi < cy; ++yi) {
                const double p = cell[(zi * static_cast<std::size_t>(cx) + static_cast<std::size_t>(xi)) *
                                          static_cast<std::size_t>(cy) +
                                      static_cast<std::size_t>(yi)];
                stratum += p;
                px[static_cast<std::size_t>(xi)] += p;
                py[static_cast<std::size_t>(yi)] += p;
            }
        }
        if (stratum <= 0.0) continue;
        for (int xi = 0; xi < cx; ++xi) {
            for (int yi = 0; yi < cy; ++yi) {
                const double joint_xy =
                    cell[(zi * static_cast<std::size_t>(cx) + static_cast<std::size_t>(xi)) *
                             static_cast<std::size_t>(cy) +
                         static_cast<std::size_t>(yi)] /
                    stratum;
                const double product = (px[static_cast<std::size_t>(xi)] / stratum) *
                                       (py[static_cast<std::size_t>(yi)] / stratum);
                if (std::abs(joint_xy - product) > tol) return false;
            }
        }
    }
    return true;
}

std::vector<std::vector<double>> conditional_kernel(const JointTable& joint, int feature,
                                                    const std::vector<int>& given,
                                                    int extra_feature, int extra_value) {
    const auto& cards = joint.cardinalities();
    std::vector<int> given_cards;
    for (int p : given) given_cards.push_back(cards.at(static_cast<std::size_t>(p)));
    const std::size_t rows = state_space_size(given_cards);
    auto given_strides = mixed_radix_strides(given_cards);
    const int cf = cards.at(static_cast<std::size_t>(feature));

    std::vector<std::vector<double>> acc(rows,
                                         std::vector<double>(static_cast<std::size_t>(cf), 0.0));
    std::vector<double> row_mass(rows, 0.0);
    std::vector<int> assignment(cards.size(), 0);
    std::size_t idx = 0;
    do {
        if (extra_feature < 0 ||
            assignment[static_cast<std::size_t>(extra_feature)] == extra_value) {
            std::size_t ri = 0;
            for (std::size_t i = 0; i < given.size(); ++i) {
                ri += static_cast<std::size_t>(assignment[static_cast<std::size_t>(given[i])]) *
                      given_strides[i];
            }
            const double p = joint.probabilities()[idx];
            acc[ri][static_cast<std::size_t>(assignment[static_cast<std::size_t>(feature)])] += p;
            row_mass[ri] += p;
        }
        ++idx;
    } while (next_assignment(assignment, cards));

    for (std::size_t r = 0; r < rows; ++r) {
        if (row_mass[r] > 0.0) {
            for (auto& v : acc[r]) v /= row_mass[r];
        } else {
            acc[r].clear();
        }
    }
    return acc;
}

CategoricalBayesNet sample_faithful_net(const Dag& graph, const std::vector<int>& cardinalities,
                                        std::uint64_t seed, const FaithfulNetOptions& options) {
    if (cardinalities.size() != static_cast<std::size_t>(graph.num_nodes())) {
        throw std::invalid_argument("sample_faithful_net: cardinality count mismatch");
    }
    for (int attempt = 0; attempt < options.max_tries; ++attempt) {
        Rng rng(seed + static_cast<std::uint64_t>(attempt) * 0x9e3779b97f4a7c15ULL);
        std::vector<Cpt> cpts;
        cpts.reserve(static_cast<std::size_t>(graph.num_nodes()));
        for (int f = 0; f < graph.num_nodes(); ++f) {
            std::size_t rows = 1;
            for (int p : graph.parents(f)) {
                rows *= static_cast<std::size_t>(cardinalities[static_cast<std::size_t>(p)]);
            }
            Cpt cpt;
            cpt.rows.reserve(rows);
            for (std::size_t r = 0; r < rows; ++r) {
                cpt.rows.push_back(rng.dirichlet_flat(cardinalities[static_cast<std::size_t>(f)]));
            }
            cpts.push_back(std::move(cpt));
        }
        CategoricalBayesNet net(graph, cardinalities, std::move(cpts));
        const auto joint = enumerate_joint(net);

        // Faithfulness screen: any exact CI that d-separation does not imply
        // disqualifies the draw.
        bool faithful = true;
        const int n = graph.num_nodes();
        for (int x = 0; x < n && faithful; ++x) {
            for (int y = x + 1; y < n && faithful; ++y) {
                std::vector<int> others;
                for (int f = 0; f < n; ++f) {
                    if (f != x && f != y) others.push_back(f);
                }
                const std::size_t subsets = std::size_t{1} << others.size();
                for (std::size_t mask = 0; mask < subsets && faithful; ++mask) {
                    std::vector<int> zs;
                    for (std::size_t i = 0; i < others.size(); ++i) {
                        if (mask & (std::size_t{1} << i)) zs.push_back(others[i]);
                    }
                    std::set<int> zset(zs.begin(), zs.end());
                    if (!graph.d_separated(x, y, zset) &&
                        exact_ci(joint, x, y, zs, options.ci_tolerance)) {
                        faithful = false;
                    }
                }
            }
        }
        if (!faithful) continue;

        if (options.time_feature && options.window_margin > 0.0) {
            const int t = *options.time_feature;
            bool generic = true;
            for (int child : graph.children(t)) {
                std::vector<int> other_parents;
                for (int p : graph.parents(child)) {
                    if (p != t) other_parents.push_back(p);
                }
                auto marginal_kernel = conditional_kernel(joint, child, other_parents);
                for (int w = 0; w < cardinalities[static_cast<std::size_t>(t)] && generic; ++w) {
                    auto windowed = conditional_kernel(joint, child, other_parents, t, w);
                    double best = 0.0;
                    for (std::size_t r = 0; r < windowed.size(); ++r) {
                        if (windowed[r].empty() || marginal_kernel[r].empty()) continue;
                        for (std::size_t s = 0; s < windowed[r].size(); ++s) {
                            best = std::max(best, std::abs(windowed[r][s] - marginal_kernel[r][s]));
                        }
                    }
                    if (best < options.window_margin) generic = false;
                }
                if (!generic) break;
            }
            if (!generic) continue;
        }
        return net;
    }
    throw DataError("sample_faithful_net: no faithful draw within max_tries");
}

}  // namespace driftcause
