#pragma once

#include "causalmix/graph.hpp"
#include "causalmix/random.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace causalmix {

/// Conditional probability table P(variable | parents).
///
/// Row r holds the distribution of `variable` under parent configuration r. Configurations
/// are mixed-radix over `parents` with the last parent varying fastest.
class Cpt {
public:
    Cpt(Vertex variable, std::vector<Vertex> parents, std::vector<std::size_t> parent_cardinalities,
        std::size_t cardinality, std::vector<double> table);

    Vertex variable() const { return variable_; }
    const std::vector<Vertex>& parents() const { return parents_; }
    const std::vector<std::size_t>& parent_cardinalities() const { return parent_cards_; }
    std::size_t cardinality() const { return cardinality_; }
    std::size_t config_count() const { return table_.size() / cardinality_; }
    const std::vector<double>& table() const { return table_; }

    /// Parent configuration read off a full assignment indexed by vertex.
    template <typename Assignment>
    std::size_t config_of(const Assignment& assignment) const {
        std::size_t config = 0;
        for (std::size_t i = 0; i < parents_.size(); ++i)
            config = config * parent_cards_[i] + static_cast<std::size_t>(assignment[parents_[i]]);
        return config;
    }

    std::span<const double> row(std::size_t config) const {
        return {table_.data() + config * cardinality_, cardinality_};
    }
    double probability(std::size_t config, std::size_t state) const { return table_[config * cardinality_ + state]; }

    bool operator==(const Cpt&) const = default;

private:
    Vertex variable_;
    std::vector<Vertex> parents_;
    std::vector<std::size_t> parent_cards_;
    std::size_t cardinality_;
    std::vector<double> table_;
};

/// DAG plus one CPT per vertex. Unchanged CPTs are shared between a net and its intervened
/// variants; nets are immutable, so sharing is unobservable.
class DiscreteBayesNet {
public:
    DiscreteBayesNet(Dag dag, std::vector<std::vector<std::string>> states,
                     std::vector<std::shared_ptr<const Cpt>> cpts);

    const Dag& dag() const { return dag_; }
    std::size_t size() const { return dag_.size(); }
    const std::vector<std::string>& names() const { return dag_.names(); }
    std::size_t cardinality(Vertex v) const { return states_.at(v).size(); }
    std::vector<std::size_t> cardinalities() const;
    const std::vector<std::string>& states(Vertex v) const { return states_.at(v); }
    const std::vector<std::vector<std::string>>& all_states() const { return states_; }
    const Cpt& cpt(Vertex v) const { return *cpts_.at(v); }
    const std::shared_ptr<const Cpt>& shared_cpt(Vertex v) const { return cpts_.at(v); }
    const std::vector<Vertex>& order() const { return order_; }

private:
    Dag dag_;
    std::vector<std::vector<std::string>> states_;
    std::vector<std::shared_ptr<const Cpt>> cpts_;
    std::vector<Vertex> order_;
};

/// Replacement mechanism for one manipulated vertex.
struct TargetIntervention {
    Vertex target;
    /// Subset of the target's parents that survive the intervention, in the original parent order.
    std::vector<Vertex> retained_parents;
    /// P_j(target | retained_parents). May be null for structure-only specs.
    std::shared_ptr<const Cpt> cpt;
};

/// One intervention experiment: the manipulated targets and their new mechanisms.
class InterventionSpec {
public:
    InterventionSpec() = default;
    explicit InterventionSpec(std::vector<TargetIntervention> entries);

    const std::vector<TargetIntervention>& entries() const { return entries_; }
    VertexSet targets() const;
    bool manipulates(Vertex v) const;
    const TargetIntervention* find(Vertex v) const;
    bool empty() const { return entries_.empty(); }

    /// Throws ModelError unless every target exists and keeps a subset of its parents. When a
    /// net is given, each target must also carry a CPT shaped for its retained parents.
    void validate(const Dag& dag, const DiscreteBayesNet* net = nullptr) const;

private:
    std::vector<TargetIntervention> entries_;  // sorted by target
};

/// Full joint distribution over all variables; index is mixed-radix with variable 0 most
/// significant.
class JointTable {
public:
    JointTable(std::vector<std::size_t> cardinalities, std::vector<double> probabilities);

    std::size_t variable_count() const { return cards_.size(); }
    const std::vector<std::size_t>& cardinalities() const { return cards_; }
    const std::vector<double>& probabilities() const { return probs_; }
    std::size_t size() const { return probs_.size(); }

    /// Marginal over `vars` (in the given order), laid out the same way.
    std::vector<double> marginal(const std::vector<Vertex>& vars) const;

private:
    std::vector<std::size_t> cards_;
    std::vector<double> probs_;
};

/// Categorical records stored column-wise, with an optional per-record intervention label.
class SampleTable {
public:
    using Category = std::uint8_t;

    SampleTable() = default;
    SampleTable(std::vector<std::string> variables, std::vector<std::size_t> cardinalities,
                std::vector<std::vector<Category>> columns, std::vector<int> labels = {});

    std::size_t variable_count() const { return variables_.size(); }
    std::size_t rows() const { return columns_.empty() ? 0 : columns_.front().size(); }
    const std::vector<std::string>& variables() const { return variables_; }
    const std::vector<std::size_t>& cardinalities() const { return cards_; }
    std::span<const Category> column(Vertex v) const { return columns_.at(v); }
    Category at(std::size_t row, Vertex v) const { return columns_[v][row]; }
    bool has_labels() const { return !labels_.empty(); }
    const std::vector<int>& labels() const { return labels_; }

    bool operator==(const SampleTable&) const = default;

private:
    std::vector<std::string> variables_;
    std::vector<std::size_t> cards_;
    std::vector<std::vector<Category>> columns_;
    std::vector<int> labels_;
};

inline constexpr std::size_t kDefaultStateSpaceCap = std::size_t{1} << 20;

/// Product of the CPT entries selected by `assignment` (one category per vertex).
double joint_probability(const DiscreteBayesNet& net, std::span<const std::size_t> assignment);

JointTable enumerate_distribution(const DiscreteBayesNet& net, std::size_t cap = kDefaultStateSpaceCap);

/// max |P(x,y|s) - P(x|s) P(y|s)| <= eps over strata with P(s) > 0. Sets may be multi-vertex.
bool ci_exact(const JointTable& joint, const VertexSet& xs, const VertexSet& ys, const VertexSet& s,
              double eps = 1e-9);
inline bool ci_exact(const JointTable& joint, Vertex x, Vertex y, const VertexSet& s, double eps = 1e-9) {
    return ci_exact(joint, VertexSet{x}, VertexSet{y}, s, eps);
}

/// Each incoming edge of each target is cut with probability `cut_prob`; the replacement
/// table's rows are drawn from a symmetric Dirichlet(dirichlet_alpha).
InterventionSpec generate_intervention_spec(const DiscreteBayesNet& net, const VertexSet& targets, double cut_prob,
                                            double dirichlet_alpha, Rng& rng);

/// Post-intervention DAG: edges into each target reduced to its retained parents.
Dag apply_intervention(const Dag& dag, const InterventionSpec& spec);
DiscreteBayesNet apply_intervention(const DiscreteBayesNet& net, const InterventionSpec& spec);

/// Ancestral sampling in topological order. Records carry `label` when it is non-negative.
SampleTable sample(const DiscreteBayesNet& net, std::size_t n, Rng& rng, int label = -1);

/// P_M(x) = sum_j w_j P_j(x).
JointTable mixture(std::span<const DiscreteBayesNet> nets, std::span<const double> weights,
                   std::size_t cap = kDefaultStateSpaceCap);

/// Random DAG: each pair (i, j) of a random vertex order is joined with probability `edge_prob`.
Dag random_dag(std::size_t vertex_count, double edge_prob, Rng& rng);

/// Random net over `dag` with per-vertex cardinality in [min_card, max_card] and Dirichlet(1) rows.
DiscreteBayesNet random_net(const Dag& dag, std::size_t min_card, std::size_t max_card, Rng& rng);

}  // namespace causalmix
