#ifndef DRIFTCAUSE_DRIFT_EXPLAIN_HPP
#define DRIFTCAUSE_DRIFT_EXPLAIN_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "driftcause/bayes_net.hpp"
#include "driftcause/drift_stream.hpp"
#include "driftcause/graph.hpp"
#include "driftcause/pc.hpp"

namespace driftcause {

/// Drift explanation: the children of the time feature (the conditional
/// intervention targets), their other parents (the conditioning context),
/// and their ancestors (the full intervention set).
struct Explanation {
    std::set<std::string> children;
    std::set<std::string> conditional_parents;
    std::set<std::string> ancestors;
    /// The graph the sets were read from.
    Pdag graph;
    /// Per-child: the largest p-value any accepted time-edge test produced
    /// (closeness of the edge to removal; smaller is stronger).
    std::map<std::string, double> child_max_p;
    /// Features whose membership rests on an undirected edge somewhere:
    /// time-adjacency for children, ancestry paths for parents/ancestors.
    std::set<std::string> ambiguous;
    std::vector<std::string> discovery_conflicts;

    /// Ancestors that are not themselves children: the full intervention
    /// set with the core targets removed.
    std::set<std::string> ancestors_outside_children() const;
};

/// Runs discovery on the time-augmented records and extracts (C, P, A).
/// Undirected time-adjacencies count into C; over a PDAG, parent and
/// ancestor queries treat undirected edges as bidirectional and flag the
/// affected features as ambiguous.
Explanation explain_drift(const DriftStream& stream, const PcConfig& config);

/// Same extraction with an injected tester (oracle runs in the harness).
Explanation explain_drift(const DriftStream& stream, const PcConfig& config,
                          const CiTester& tester);

/// Exact (C, P, A) read off a ground-truth DAG containing the time node,
/// which must be parentless.
Explanation ground_truth_sets(const Dag& truth, const std::string& time_name = kTimeFeatureName);

/// Time-free graphical model reproducing one window's distribution: the
/// children of time keep window-conditioned kernels over their original
/// parents plus earlier children (topological order), everything else keeps
/// its kernel verbatim.
struct ReversalModel {
    CategoricalBayesNet model;
    /// Child-to-child augmentation edges actually added, as (from, to).
    std::vector<std::pair<std::string, std::string>> added_edges;
    /// Features whose kernels were replaced.
    std::set<std::string> altered;
};

ReversalModel build_reversal(const CategoricalBayesNet& net, const std::string& time_name, int window,
                             std::size_t cap = kDefaultJointCap);

/// Generalized construction allowing only `altered` features to change their
/// kernels; unaltered children of time fall back to their time-marginal
/// kernels. build_reversal equals this with altered = children(time).
ReversalModel build_restricted_reversal(const CategoricalBayesNet& net, const std::string& time_name,
                                        int window, const std::set<int>& altered,
                                        std::size_t cap = kDefaultJointCap);

/// Total-variation distance between the window-conditioned law of the net
/// (marginalized to the data features) and the model's law. The faithful
/// construction keeps this below 1e-9.
double verify_reversal(const CategoricalBayesNet& net, const std::string& time_name, int window,
                       const ReversalModel& model, std::size_t cap = kDefaultJointCap);

/// Evidence that one child of time cannot be dropped from the altered set:
/// a window and a kernel row where the window-conditioned kernel differs
/// from the time-marginal kernel.
struct KernelWitness {
    std::string feature;
    int window = -1;
    /// States of the feature's non-time parents identifying the row.
    std::vector<int> parent_states;
    int state = -1;
    double windowed = 0.0;
    double marginal = 0.0;
    /// Set when no witness exists: the fixture is not generic.
    bool unfaithful = false;
};

/// One witness per child of the time feature. The search starts at
/// `preferred_window` and wraps around all windows; tolerance 1e-9.
std::vector<KernelWitness> minimality_witness(const CategoricalBayesNet& net,
                                              const std::string& time_name, int preferred_window,
                                              std::size_t cap = kDefaultJointCap);

}  // namespace driftcause

#endif  // DRIFTCAUSE_DRIFT_EXPLAIN_HPP
