#include "causalmix/bayesnet.hpp"

#include "causalmix/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace causalmix {

namespace {

constexpr double kRowTolerance = 1e-9;

std::size_t product(const std::vector<std::size_t>& xs) {
    return std::accumulate(xs.begin(), xs.end(), std::size_t{1}, std::multiplies<>());
}

std::size_t checked_state_space(const std::vector<std::size_t>& cards, std::size_t cap) {
    std::size_t total = 1;
    for (std::size_t c : cards) {
        if (c == 0 || total > cap / c) throw ModelError("state space exceeds the enumeration cap of " + std::to_string(cap));
        total *= c;
    }
    return total;
}

void check_set(const char* what, const VertexSet& vs, std::size_t n) {
    for (Vertex v : vs)
        if (v >= n) throw ModelError(std::string(what) + " refers to unknown variable index " + std::to_string(v));
}

}  // namespace

Cpt::Cpt(Vertex variable, std::vector<Vertex> parents, std::vector<std::size_t> parent_cardinalities,
         std::size_t cardinality, std::vector<double> table)
    : variable_(variable),
      parents_(std::move(parents)),
      parent_cards_(std::move(parent_cardinalities)),
      cardinality_(cardinality),
      table_(std::move(table)) {
    if (cardinality_ < 2) throw ModelError("variable cardinality must be at least 2");
    if (parents_.size() != parent_cards_.size()) throw ModelError("parent cardinalities do not match parent list");
    for (std::size_t c : parent_cards_)
        if (c < 2) throw ModelError("parent cardinality must be at least 2");
    if (table_.size() != product(parent_cards_) * cardinality_)
        throw ModelError("CPT size does not match parent and variable cardinalities");
    for (std::size_t r = 0; r < config_count(); ++r) {
        double sum = 0.0;
        for (double p : row(r)) {
            if (!(p >= 0.0)) throw ModelError("CPT entry is negative or not a number");
            sum += p;
        }
        if (std::abs(sum - 1.0) > kRowTolerance)
            throw ModelError("CPT row " + std::to_string(r) + " sums to " + std::to_string(sum));
    }
}

DiscreteBayesNet::DiscreteBayesNet(Dag dag, std::vector<std::vector<std::string>> states,
                                   std::vector<std::shared_ptr<const Cpt>> cpts)
    : dag_(std::move(dag)), states_(std::move(states)), cpts_(std::move(cpts)) {
    const std::size_t n = dag_.size();
    if (states_.size() != n || cpts_.size() != n) throw ModelError("net needs one state list and one CPT per vertex");
    for (Vertex v = 0; v < n; ++v) {
        if (states_[v].size() < 2 || states_[v].size() > 255)
            throw ModelError("variable '" + dag_.name(v) + "' must have between 2 and 255 states");
        const Cpt* cpt = cpts_[v].get();
        if (cpt == nullptr) throw ModelError("missing CPT for '" + dag_.name(v) + "'");
        if (cpt->variable() != v) throw ModelError("CPT for '" + dag_.name(v) + "' is attached to another variable");
        if (cpt->parents() != dag_.parents(v))
            throw ModelError("CPT parents of '" + dag_.name(v) + "' differ from its DAG parents");
        if (cpt->cardinality() != states_[v].size())
            throw ModelError("CPT cardinality of '" + dag_.name(v) + "' differs from its state count");
        for (std::size_t i = 0; i < cpt->parents().size(); ++i)
            if (cpt->parent_cardinalities()[i] != states_[cpt->parents()[i]].size())
                throw ModelError("CPT of '" + dag_.name(v) + "' disagrees with a parent's cardinality");
    }
    order_ = topological_order(dag_);
}

std::vector<std::size_t> DiscreteBayesNet::cardinalities() const {
    std::vector<std::size_t> out;
    out.reserve(states_.size());
    for (const auto& s : states_) out.push_back(s.size());
    return out;
}

InterventionSpec::InterventionSpec(std::vector<TargetIntervention> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(),
              [](const TargetIntervention& a, const TargetIntervention& b) { return a.target < b.target; });
    for (std::size_t i = 1; i < entries_.size(); ++i)
        if (entries_[i - 1].target == entries_[i].target) throw ModelError("intervention lists a target twice");
}

VertexSet InterventionSpec::targets() const {
    VertexSet out;
    for (const auto& e : entries_) out.push_back(e.target);
    return out;
}

bool InterventionSpec::manipulates(Vertex v) const { return find(v) != nullptr; }

const TargetIntervention* InterventionSpec::find(Vertex v) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                               [](const TargetIntervention& e, Vertex t) { return e.target < t; });
    return it != entries_.end() && it->target == v ? &*it : nullptr;
}

void InterventionSpec::validate(const Dag& dag, const DiscreteBayesNet* net) const {
    for (const auto& e : entries_) {
        if (e.target >= dag.size()) throw ModelError("intervention target index out of range");
        const auto& pa = dag.parents(e.target);
        // Retained parents must be a subsequence of the original parent list.
        auto it = pa.begin();
        for (Vertex r : e.retained_parents) {
            it = std::find(it, pa.end(), r);
            if (it == pa.end())
                throw ModelError("intervention on '" + dag.name(e.target) + "' keeps a vertex that is not a parent");
            ++it;
        }
        if (net != nullptr) {
            if (!e.cpt) throw ModelError("intervention on '" + dag.name(e.target) + "' has no replacement CPT");
            if (e.cpt->variable() != e.target || e.cpt->parents() != e.retained_parents ||
                e.cpt->cardinality() != net->cardinality(e.target))
                throw ModelError("replacement CPT for '" + dag.name(e.target) + "' has the wrong shape");
            for (std::size_t i = 0; i < e.retained_parents.size(); ++i)
                if (e.cpt->parent_cardinalities()[i] != net->cardinality(e.retained_parents[i]))
                    throw ModelError("replacement CPT for '" + dag.name(e.target) + "' has the wrong shape");
        }
    }
}

JointTable::JointTable(std::vector<std::size_t> cardinalities, std::vector<double> probabilities)
    : cards_(std::move(cardinalities)), probs_(std::move(probabilities)) {
    if (probs_.size() != product(cards_)) throw ModelError("joint table size does not match cardinalities");
    double sum = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0)) throw ModelError("joint table entry is negative");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ModelError("joint table does not sum to one");
}

std::vector<double> JointTable::marginal(const std::vector<Vertex>& vars) const {
    const std::size_t n = cards_.size();
    std::vector<std::size_t> stride(n, 1);
    for (std::size_t v = n; v-- > 1;) stride[v - 1] = stride[v] * cards_[v];
    std::vector<std::size_t> out_cards;
    for (Vertex v : vars) {
        if (v >= n) throw ModelError("marginal over unknown variable");
        out_cards.push_back(cards_[v]);
    }
    std::vector<double> out(product(out_cards), 0.0);
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        if (probs_[i] == 0.0) continue;
        std::size_t k = 0;
        for (std::size_t j = 0; j < vars.size(); ++j) k = k * out_cards[j] + (i / stride[vars[j]]) % out_cards[j];
        out[k] += probs_[i];
    }
    return out;
}

SampleTable::SampleTable(std::vector<std::string> variables, std::vector<std::size_t> cardinalities,
                         std::vector<std::vector<Category>> columns, std::vector<int> labels)
    : variables_(std::move(variables)),
      cards_(std::move(cardinalities)),
      columns_(std::move(columns)),
      labels_(std::move(labels)) {
    if (variables_.size() != cards_.size() || variables_.size() != columns_.size())
        throw ModelError("sample table needs one cardinality and one column per variable");
    const std::size_t n = rows();
    for (std::size_t v = 0; v < columns_.size(); ++v) {
        if (cards_[v] < 1 || cards_[v] > 255) throw ModelError("sample table cardinality out of range");
        if (columns_[v].size() != n) throw ModelError("sample table columns have different lengths");
        for (Category c : columns_[v])
            if (c >= cards_[v]) throw ModelError("category out of range in column '" + variables_[v] + "'");
    }
    if (!labels_.empty() && labels_.size() != n) throw ModelError("label column length differs from row count");
}

double joint_probability(const DiscreteBayesNet& net, std::span<const std::size_t> assignment) {
    if (assignment.size() != net.size()) throw ModelError("assignment must give one category per variable");
    for (Vertex v = 0; v < net.size(); ++v)
        if (assignment[v] >= net.cardinality(v))
            throw ModelError("category out of range for '" + net.names()[v] + "'");
    double p = 1.0;
    for (Vertex v = 0; v < net.size(); ++v) {
        const Cpt& cpt = net.cpt(v);
        p *= cpt.probability(cpt.config_of(assignment), assignment[v]);
    }
    return p;
}

JointTable enumerate_distribution(const DiscreteBayesNet& net, std::size_t cap) {
    const auto cards = net.cardinalities();
    const std::size_t total = checked_state_space(cards, cap);
    std::vector<double> probs(total);
    std::vector<std::size_t> assignment(cards.size(), 0);
    for (std::size_t i = 0; i < total; ++i) {
        double p = 1.0;
        for (Vertex v = 0; v < net.size() && p != 0.0; ++v) {
            const Cpt& cpt = net.cpt(v);
            p *= cpt.probability(cpt.config_of(assignment), assignment[v]);
        }
        probs[i] = p;
        for (std::size_t v = cards.size(); v-- > 0;) {
            if (++assignment[v] < cards[v]) break;
            assignment[v] = 0;
        }
    }
    return JointTable(cards, std::move(probs));
}

bool ci_exact(const JointTable& joint, const VertexSet& xs, const VertexSet& ys, const VertexSet& s, double eps) {
    const std::size_t n = joint.variable_count();
    check_set("ci_exact x", xs, n);
    check_set("ci_exact y", ys, n);
    check_set("ci_exact conditioning set", s, n);
    if (xs.empty() || ys.empty()) throw ModelError("ci_exact needs non-empty variable sets");
    std::vector<Vertex> vars;
    vars.insert(vars.end(), xs.begin(), xs.end());
    vars.insert(vars.end(), ys.begin(), ys.end());
    vars.insert(vars.end(), s.begin(), s.end());
    {
        std::vector<Vertex> sorted = vars;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw ModelError("ci_exact arguments overlap");
    }
    auto span_size = [&](const VertexSet& vs) {
        std::size_t k = 1;
        for (Vertex v : vs) k *= joint.cardinalities()[v];
        return k;
    };
    const std::size_t nx = span_size(xs), ny = span_size(ys), ns = span_size(s);
    const std::vector<double> m = joint.marginal(vars);  // index: (x * ny + y) * ns + z

    std::vector<double> px(nx), py(ny);
    for (std::size_t z = 0; z < ns; ++z) {
        double pz = 0.0;
        std::fill(px.begin(), px.end(), 0.0);
        std::fill(py.begin(), py.end(), 0.0);
        for (std::size_t x = 0; x < nx; ++x)
            for (std::size_t y = 0; y < ny; ++y) {
                const double p = m[(x * ny + y) * ns + z];
                px[x] += p;
                py[y] += p;
                pz += p;
            }
        if (pz <= 0.0) continue;
        for (std::size_t x = 0; x < nx; ++x)
            for (std::size_t y = 0; y < ny; ++y) {
                const double joint_cond = m[(x * ny + y) * ns + z] / pz;
                if (std::abs(joint_cond - (px[x] / pz) * (py[y] / pz)) > eps) return false;
            }
    }
    return true;
}

InterventionSpec generate_intervention_spec(const DiscreteBayesNet& net, const VertexSet& targets, double cut_prob,
                                            double dirichlet_alpha, Rng& rng) {
    if (!(cut_prob >= 0.0 && cut_prob <= 1.0)) throw ModelError("cut probability must lie in [0, 1]");
    if (!(dirichlet_alpha > 0.0)) throw ModelError("Dirichlet concentration must be positive");
    std::vector<TargetIntervention> entries;
    for (Vertex t : targets) {
        if (t >= net.size()) throw ModelError("unknown intervention target index " + std::to_string(t));
        TargetIntervention entry{t, {}, nullptr};
        std::vector<std::size_t> retained_cards;
        for (Vertex p : net.dag().parents(t)) {
            if (!bernoulli(cut_prob, rng)) {
                entry.retained_parents.push_back(p);
                retained_cards.push_back(net.cardinality(p));
            }
        }
        const std::size_t card = net.cardinality(t);
        const std::size_t configs = product(retained_cards);
        std::vector<double> table;
        table.reserve(configs * card);
        for (std::size_t r = 0; r < configs; ++r) {
            const auto row = dirichlet(card, dirichlet_alpha, rng);
            table.insert(table.end(), row.begin(), row.end());
        }
        entry.cpt = std::make_shared<const Cpt>(t, entry.retained_parents, std::move(retained_cards), card, std::move(table));
        entries.push_back(std::move(entry));
    }
    return InterventionSpec(std::move(entries));
}

Dag apply_intervention(const Dag& dag, const InterventionSpec& spec) {
    spec.validate(dag);
    std::vector<Arrow> kept;
    for (const Arrow& e : dag.edges()) {
        const TargetIntervention* t = spec.find(e.to);
        if (t == nullptr || std::find(t->retained_parents.begin(), t->retained_parents.end(), e.from) !=
                                t->retained_parents.end())
            kept.push_back(e);
    }
    return Dag::from_arrows(dag.names(), kept);
}

DiscreteBayesNet apply_intervention(const DiscreteBayesNet& net, const InterventionSpec& spec) {
    spec.validate(net.dag(), &net);
    Dag dag = apply_intervention(net.dag(), spec);
    std::vector<std::shared_ptr<const Cpt>> cpts;
    cpts.reserve(net.size());
    for (Vertex v = 0; v < net.size(); ++v) {
        const TargetIntervention* t = spec.find(v);
        cpts.push_back(t ? t->cpt : net.shared_cpt(v));
    }
    return DiscreteBayesNet(std::move(dag), net.all_states(), std::move(cpts));
}

SampleTable sample(const DiscreteBayesNet& net, std::size_t n, Rng& rng, int label) {
    const std::size_t p = net.size();
    std::vector<std::vector<SampleTable::Category>> columns(p, std::vector<SampleTable::Category>(n));
    std::vector<std::size_t> assignment(p, 0);
    for (std::size_t r = 0; r < n; ++r) {
        for (Vertex v : net.order()) {
            const Cpt& cpt = net.cpt(v);
            const auto row = cpt.row(cpt.config_of(assignment));
            const double u = uniform01(rng);
            double cumulative = 0.0;
            std::size_t state = row.size();
            for (std::size_t k = 0; k < row.size(); ++k) {
                cumulative += row[k];
                if (u < cumulative) {
                    state = k;
                    break;
                }
            }
            if (state == row.size()) {
                // Rounding left u above the cumulative total; take the last state with mass.
                state = row.size() - 1;
                while (state > 0 && row[state] == 0.0) --state;
            }
            assignment[v] = state;
            columns[v][r] = static_cast<SampleTable::Category>(state);
        }
    }
    std::vector<int> labels;
    if (label >= 0) labels.assign(n, label);
    return SampleTable(net.names(), net.cardinalities(), std::move(columns), std::move(labels));
}

JointTable mixture(std::span<const DiscreteBayesNet> nets, std::span<const double> weights, std::size_t cap) {
    if (nets.empty()) throw ModelError("mixture needs at least one net");
    if (nets.size() != weights.size()) throw ModelError("mixture needs one weight per net");
    double total = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw ModelError("mixture weights must be positive");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ModelError("mixture weights must sum to one");
    const auto cards = nets.front().cardinalities();
    checked_state_space(cards, cap);
    std::vector<double> probs;
    for (std::size_t j = 0; j < nets.size(); ++j) {
        if (nets[j].cardinalities() != cards || nets[j].names() != nets.front().names())
            throw ModelError("mixture components must share variables and cardinalities");
        const JointTable t = enumerate_distribution(nets[j], cap);
        if (probs.empty()) probs.assign(t.size(), 0.0);
        for (std::size_t i = 0; i < t.size(); ++i) probs[i] += weights[j] * t.probabilities()[i];
    }
    return JointTable(cards, std::move(probs));
}

Dag random_dag(std::size_t vertex_count, double edge_prob, Rng& rng) {
    const auto order = sample_without_replacement(vertex_count, vertex_count, rng);
    std::vector<Arrow> edges;
    for (std::size_t i = 0; i < vertex_count; ++i)
        for (std::size_t j = i + 1; j < vertex_count; ++j)
            if (bernoulli(edge_prob, rng)) edges.push_back({order[i], order[j]});
    return Dag::from_arrows(vertex_count, edges);
}

DiscreteBayesNet random_net(const Dag& dag, std::size_t min_card, std::size_t max_card, Rng& rng) {
    if (min_card < 2 || max_card < min_card) throw ModelError("invalid cardinality range");
    const std::size_t n = dag.size();
    std::vector<std::vector<std::string>> states(n);
    for (auto& s : states) {
        const std::size_t card = min_card + uniform_index(max_card - min_card + 1, rng);
        for (std::size_t k = 0; k < card; ++k) s.push_back("s" + std::to_string(k));
    }
    std::vector<std::shared_ptr<const Cpt>> cpts;
    for (Vertex v = 0; v < n; ++v) {
        std::vector<std::size_t> pcards;
        for (Vertex p : dag.parents(v)) pcards.push_back(states[p].size());
        const std::size_t card = states[v].size();
        std::vector<double> table;
        for (std::size_t r = 0; r < product(pcards); ++r) {
            const auto row = dirichlet(card, 1.0, rng);
            table.insert(table.end(), row.begin(), row.end());
        }
        cpts.push_back(std::make_shared<const Cpt>(v, dag.parents(v), std::move(pcards), card, std::move(table)));
    }
    return DiscreteBayesNet(dag, std::move(states), std::move(cpts));
}

}  // namespace causalmix
