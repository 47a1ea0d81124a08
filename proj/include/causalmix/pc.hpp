#pragma once

#include "causalmix/bayesnet.hpp"
#include "causalmix/citest.hpp"
#include "causalmix/graph.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace causalmix {

enum class CiFlavor { oracle, statistical };

/// Source of conditional-independence decisions for a learner: a statistical test bound to a
/// data table, or an exact oracle. Decisions must be deterministic for fixed inputs.
class CiSource {
public:
    using Decision = std::function<bool(Vertex, Vertex, const VertexSet&)>;

    CiSource(std::size_t vertex_count, Decision decide, CiFlavor flavor)
        : vertex_count_(vertex_count), decide_(std::move(decide)), flavor_(flavor) {}

    bool independent(Vertex x, Vertex y, const VertexSet& s) const { return decide_(x, y, s); }
    std::size_t vertex_count() const { return vertex_count_; }
    CiFlavor flavor() const { return flavor_; }

private:
    std::size_t vertex_count_;
    Decision decide_;
    CiFlavor flavor_;
};

/// d-separation in `g`. The DAG is copied into the source.
CiSource d_separation_oracle(Dag g);

/// ci_exact on a fully enumerated distribution. The table is copied into the source.
CiSource exact_oracle(JointTable joint, double eps = 1e-9);

/// Chi-square test on `data`; `data` must outlive the source.
CiSource chi_square_source(const SampleTable& data, CiTestOptions options = {});

/// Separating sets recorded for removed edges.
class SepSets {
public:
    void record(Vertex u, Vertex v, VertexSet s) { sets_[UndirectedEdge::of(u, v)] = std::move(s); }
    const VertexSet* find(Vertex u, Vertex v) const {
        auto it = sets_.find(UndirectedEdge::of(u, v));
        return it == sets_.end() ? nullptr : &it->second;
    }
    std::size_t size() const { return sets_.size(); }
    const std::map<UndirectedEdge, VertexSet>& entries() const { return sets_; }

private:
    std::map<UndirectedEdge, VertexSet> sets_;
};

struct PcOptions {
    /// Largest conditioning-set size tried.
    std::size_t max_cond = 5;
};

struct SkeletonResult {
    Skeleton edges;
    SepSets sepsets;
    std::size_t tests = 0;
};

/// Stable PC adjacency search. Adjacency sets are frozen at the start of every level, and
/// conditioning sets are enumerated lexicographically, so the result does not depend on the
/// order in which pairs are visited. Repeated (x, y, s) queries are answered from a cache.
SkeletonResult learn_skeleton(std::size_t vertex_count, const CiSource& ci, std::size_t max_cond);

struct OrientedPattern {
    PatternGraph pattern;
    /// Candidate v-structures dropped because their arrows conflicted.
    std::vector<VStructure> conflicting;
};

/// A candidate (a, c, b) for every unshielded triple with c outside sepset(a, b); conflicting
/// candidates are removed with `resolve_conflicts`. Throws GraphError when a non-adjacent pair
/// has no recorded separating set.
OrientedPattern orient_v_structures(std::vector<std::string> vertices, const Skeleton& skeleton,
                                    const SepSets& sepsets);

OrientedPattern pc_learn(const CiSource& ci, std::vector<std::string> vertices, const PcOptions& options = {});

/// Chi-square PC over all columns of `data`.
OrientedPattern pc_learn(const SampleTable& data, const CiTestOptions& test = {}, const PcOptions& options = {});

}  // namespace causalmix
