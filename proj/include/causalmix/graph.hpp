#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace causalmix {

/// Dense vertex index into a graph's declared vertex list.
using Vertex = std::size_t;

/// Sorted, duplicate-free list of vertices.
using VertexSet = std::vector<Vertex>;

struct Arrow {
    Vertex from;
    Vertex to;
    auto operator<=>(const Arrow&) const = default;
};

/// Unordered pair stored with a < b.
struct UndirectedEdge {
    Vertex a;
    Vertex b;

    static UndirectedEdge of(Vertex u, Vertex v) { return u < v ? UndirectedEdge{u, v} : UndirectedEdge{v, u}; }
    auto operator<=>(const UndirectedEdge&) const = default;
};

/// Collider a -> collider <- b, stored with a < b.
struct VStructure {
    Vertex a;
    Vertex collider;
    Vertex b;

    static VStructure of(Vertex u, Vertex collider, Vertex v) {
        return u < v ? VStructure{u, collider, v} : VStructure{v, collider, u};
    }
    Arrow left() const { return {a, collider}; }
    Arrow right() const { return {b, collider}; }
    auto operator<=>(const VStructure&) const = default;
};

using Skeleton = std::set<UndirectedEdge>;

/// Directed acyclic graph over a fixed, ordered vertex list.
///
/// Parents and children are kept in edge-declaration order; the order matters for
/// CPT layouts built on top of the graph. Immutable after construction.
class Dag {
public:
    Dag() = default;

    /// Throws GraphError on cycles, self-loops, duplicate edges or unknown endpoints.
    static Dag build(std::vector<std::string> vertices,
                     const std::vector<std::pair<std::string, std::string>>& edges);
    static Dag from_arrows(std::vector<std::string> vertices, const std::vector<Arrow>& edges);
    /// Vertices named X1..Xn.
    static Dag from_arrows(std::size_t vertex_count, const std::vector<Arrow>& edges);

    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(Vertex v) const { return names_.at(v); }
    Vertex index_of(const std::string& name) const;
    std::optional<Vertex> find(const std::string& name) const;

    const std::vector<Vertex>& parents(Vertex v) const { return parents_.at(v); }
    const std::vector<Vertex>& children(Vertex v) const { return children_.at(v); }
    const std::vector<Arrow>& edges() const { return edges_; }
    std::size_t edge_count() const { return edges_.size(); }

    bool has_edge(Vertex from, Vertex to) const { return adjacency_[from * size() + to] != 0; }
    bool adjacent(Vertex u, Vertex v) const { return has_edge(u, v) || has_edge(v, u); }

    bool operator==(const Dag& other) const { return names_ == other.names_ && edge_set() == other.edge_set(); }

    std::set<Arrow> edge_set() const { return {edges_.begin(), edges_.end()}; }
    Skeleton skeleton() const;

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, Vertex> index_;
    std::vector<std::vector<Vertex>> parents_;
    std::vector<std::vector<Vertex>> children_;
    std::vector<Arrow> edges_;
    std::vector<char> adjacency_;
};

/// Kahn's algorithm; ties go to the earliest declared vertex.
std::vector<Vertex> topological_order(const Dag& g);

VertexSet descendants(const Dag& g, Vertex x);
VertexSet non_descendants(const Dag& g, Vertex x);
/// `xs` together with all of their ancestors.
VertexSet ancestral_set(const Dag& g, const VertexSet& xs);

/// d-separation by reachability over (vertex, direction) states.
bool d_separated(const Dag& g, Vertex x, Vertex y, const VertexSet& s);

/// d-separation via separation in the moralized ancestral graph of {x, y} u s.
/// Independent of the reachability route; kept for cross-checking.
bool d_separated_moral(const Dag& g, Vertex x, Vertex y, const VertexSet& s);

/// Skeleton plus v-structures: the Markov-equivalence-class summary a PC-style learner outputs.
///
/// Invariants (checked at construction, GraphError otherwise): every v-structure's two
/// arrows lie on skeleton edges and its endpoints are non-adjacent. `added_edges` is a subset
/// of the skeleton flagged as undirected-only additions (see `augment`).
class PatternGraph {
public:
    PatternGraph() = default;
    PatternGraph(std::vector<std::string> vertices, Skeleton skeleton, std::set<VStructure> v_structures,
                 Skeleton added_edges = {});

    const std::vector<std::string>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    const Skeleton& skeleton() const { return skeleton_; }
    const std::set<VStructure>& v_structures() const { return v_structures_; }
    const Skeleton& added_edges() const { return added_edges_; }

    bool adjacent(Vertex u, Vertex v) const { return skeleton_.contains(UndirectedEdge::of(u, v)); }

    /// Distinct arrows implied by the v-structures.
    std::set<Arrow> arrows() const;

    bool operator==(const PatternGraph&) const = default;

private:
    std::vector<std::string> vertices_;
    Skeleton skeleton_;
    std::set<VStructure> v_structures_;
    Skeleton added_edges_;
};

PatternGraph pattern_of(const Dag& g);

/// V-structures after dropping every member of a conflicting pair.
struct ResolvedVStructures {
    std::set<VStructure> kept;
    /// Removed because one of their arrows is reversed by another v-structure.
    std::vector<VStructure> conflicting;
};

/// Finds arrows u->w and w->u implied by different v-structures and removes every
/// v-structure contributing either arrow.
ResolvedVStructures resolve_conflicts(const std::set<VStructure>& v_structures);

struct MergedPattern {
    PatternGraph pattern;
    /// Union v-structures whose endpoints became adjacent in the union skeleton.
    std::vector<VStructure> shielded;
    std::vector<VStructure> conflicting;
};

/// Union of skeletons and v-structures, then shielded and conflicting v-structures removed.
/// Throws GraphError when vertex lists differ or `patterns` is empty.
MergedPattern merge_patterns(std::span<const PatternGraph> patterns);

}  // namespace causalmix
