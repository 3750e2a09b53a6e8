#ifndef DRIFTCAUSE_BAYES_NET_HPP
#define DRIFTCAUSE_BAYES_NET_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "driftcause/data_table.hpp"
#include "driftcause/graph.hpp"

namespace driftcause {

/// Conditional probability table for one feature. Rows are indexed by the
/// parent configuration: parents sorted ascending by node index, enumerated
/// lexicographically (first parent most significant, last parent fastest).
/// A parentless feature has exactly one row.
struct Cpt {
    std::vector<std::vector<double>> rows;

    bool operator==(const Cpt& other) const = default;
};

struct CptViolation {
    std::string feature;
    int row;  // -1 when the problem is not tied to one row
    std::string message;
};

/// Categorical Bayesian network: a DAG plus one CPT per feature. Values are
/// immutable; every operation below returns a new net or a derived table.
class CategoricalBayesNet {
public:
    CategoricalBayesNet() = default;
    /// Shape checks are deferred to validate() so malformed nets can be
    /// constructed, inspected and reported.
    CategoricalBayesNet(Dag graph, std::vector<int> cardinalities, std::vector<Cpt> cpts);

    const Dag& graph() const { return graph_; }
    const std::vector<int>& cardinalities() const { return cards_; }
    int cardinality(int feature) const;
    const Cpt& cpt(int feature) const;
    const std::vector<Cpt>& cpts() const { return cpts_; }

    /// Sorted parent list of a feature: the row-index digit order of its CPT.
    std::vector<int> parent_list(int feature) const;
    /// Row index for a full assignment over all features.
    std::size_t row_index(int feature, std::span<const int> assignment) const;

    bool operator==(const CategoricalBayesNet& other) const;

private:
    Dag graph_;
    std::vector<int> cards_;
    std::vector<Cpt> cpts_;
};

/// Exact joint distribution over a feature subset, probabilities stored in
/// lexicographic assignment order (feature 0 most significant).
class JointTable {
public:
    JointTable() = default;
    JointTable(std::vector<std::string> features, std::vector<int> cardinalities,
               std::vector<double> probabilities);

    const std::vector<std::string>& features() const { return features_; }
    const std::vector<int>& cardinalities() const { return cards_; }
    const std::vector<double>& probabilities() const { return probs_; }
    std::size_t size() const { return probs_.size(); }

    int feature_index(const std::string& name) const;
    double prob(std::span<const int> assignment) const;

private:
    std::vector<std::string> features_;
    std::vector<int> cards_;
    std::vector<double> probs_;
};

/// Point intervention: forces each target feature to a fixed state.
struct Intervention {
    std::vector<std::pair<std::string, int>> assignments;
};

/// Checks all net invariants; returns every violation found (empty = ok).
std::vector<CptViolation> validate(const CategoricalBayesNet& net);
void validate_or_throw(const CategoricalBayesNet& net);

/// Ancestral sampling: n records drawn in topological order, byte-stable
/// given the seed.
DataTable sample(const CategoricalBayesNet& net, std::size_t n, std::uint64_t seed);

inline constexpr std::size_t kDefaultJointCap = std::size_t{1} << 20;

/// Exact joint by multiplying CPT entries per assignment. Throws when the
/// state space exceeds `cap`.
JointTable enumerate_joint(const CategoricalBayesNet& net, std::size_t cap = kDefaultJointCap);

/// Graph surgery for do(X = x): removes all edges into each target and pins
/// its CPT to a point mass. Everything else is untouched.
CategoricalBayesNet intervene(const CategoricalBayesNet& net, const Intervention& iv);

/// Exact conditional given evidence (feature index into the table, state).
/// The returned table ranges over the remaining features, in order.
JointTable condition(const JointTable& joint,
                     const std::vector<std::pair<int, int>>& evidence);

/// Marginal over `keep` (indices into the table, in table order).
JointTable marginal(const JointTable& joint, const std::vector<int>& keep);

/// Half the L1 distance between two tables over the same state space.
double total_variation(const JointTable& p, const JointTable& q);

/// New net with exactly one CPT replaced; the result is validated.
CategoricalBayesNet modify_cpt(const CategoricalBayesNet& net, int feature, Cpt replacement);
CategoricalBayesNet modify_cpt(const CategoricalBayesNet& net, const std::string& feature,
                               Cpt replacement);

/// Exact conditional-independence check X _||_ Y | Z on an enumerated joint:
/// factorization of the conditional table within `tol`, per z-configuration
/// of positive probability.
bool exact_ci(const JointTable& joint, int x, int y, const std::vector<int>& z,
              double tol = 1e-9);

/// Exact kernel rows P(feature | given [, extra = value]) in lexicographic
/// order of the `given` features (ascending index, first most significant).
/// Rows whose conditioning event has zero probability come back empty.
/// extra_feature = -1 skips the extra conditioning.
std::vector<std::vector<double>> conditional_kernel(const JointTable& joint, int feature,
                                                    const std::vector<int>& given,
                                                    int extra_feature = -1, int extra_value = -1);

struct FaithfulNetOptions {
    double ci_tolerance = 1e-6;
    int max_tries = 1000;
    /// When set (node index), every child of this feature must additionally
    /// have, for every state w of it, some positive-probability parent row
    /// where the w-conditioned kernel and the marginal kernel differ by at
    /// least `window_margin` — keeps exhaustive minimality checks away from
    /// degenerate draws.
    std::optional<int> time_feature;
    double window_margin = 0.0;
};

/// Draws CPT rows from a flat Dirichlet and rejects draws exhibiting an exact
/// conditional independence not implied by d-separation. Only practical for
/// small graphs (all CI triples are checked exhaustively).
CategoricalBayesNet sample_faithful_net(const Dag& graph, const std::vector<int>& cardinalities,
                                        std::uint64_t seed, const FaithfulNetOptions& options = {});

}  // namespace driftcause

#endif  // DRIFTCAUSE_BAYES_NET_HPP
