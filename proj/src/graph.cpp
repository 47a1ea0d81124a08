#include "causalmix/graph.hpp"

#include "causalmix/error.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>

namespace causalmix {

namespace {

void check_vertex(const Dag& g, Vertex v) {
    if (v >= g.size()) throw GraphError("unknown vertex index " + std::to_string(v));
}

void check_separation_query(const Dag& g, Vertex x, Vertex y, const VertexSet& s) {
    check_vertex(g, x);
    check_vertex(g, y);
    if (x == y) throw GraphError("d-separation query needs two distinct vertices");
    for (Vertex v : s) {
        check_vertex(g, v);
        if (v == x || v == y) throw GraphError("conditioning set contains a queried vertex");
    }
}

std::vector<char> membership(std::size_t n, const VertexSet& s) {
    std::vector<char> in(n, 0);
    for (Vertex v : s) in[v] = 1;
    return in;
}

}  // namespace

Dag Dag::from_arrows(std::vector<std::string> vertices, const std::vector<Arrow>& edges) {
    Dag g;
    const std::size_t n = vertices.size();
    g.names_ = std::move(vertices);
    for (Vertex v = 0; v < n; ++v) {
        if (!g.index_.emplace(g.names_[v], v).second) throw GraphError("duplicate vertex '" + g.names_[v] + "'");
    }
    g.parents_.assign(n, {});
    g.children_.assign(n, {});
    g.adjacency_.assign(n * n, 0);
    for (const Arrow& e : edges) {
        if (e.from >= n || e.to >= n) throw GraphError("edge endpoint is not a declared vertex");
        if (e.from == e.to) throw GraphError("self-loop on '" + g.names_[e.from] + "'");
        if (g.adjacency_[e.from * n + e.to])
            throw GraphError("duplicate edge " + g.names_[e.from] + " -> " + g.names_[e.to]);
        g.adjacency_[e.from * n + e.to] = 1;
        g.parents_[e.to].push_back(e.from);
        g.children_[e.from].push_back(e.to);
        g.edges_.push_back(e);
    }
    if (topological_order(g).size() != n) throw GraphError("edge set contains a directed cycle");
    return g;
}

Dag Dag::from_arrows(std::size_t vertex_count, const std::vector<Arrow>& edges) {
    std::vector<std::string> names;
    names.reserve(vertex_count);
    for (std::size_t i = 0; i < vertex_count; ++i) names.push_back("X" + std::to_string(i + 1));
    return from_arrows(std::move(names), edges);
}

Dag Dag::build(std::vector<std::string> vertices, const std::vector<std::pair<std::string, std::string>>& edges) {
    std::unordered_map<std::string, Vertex> index;
    for (Vertex v = 0; v < vertices.size(); ++v) index.emplace(vertices[v], v);
    std::vector<Arrow> arrows;
    arrows.reserve(edges.size());
    for (const auto& [from, to] : edges) {
        auto f = index.find(from);
        auto t = index.find(to);
        if (f == index.end()) throw GraphError("unknown edge endpoint '" + from + "'");
        if (t == index.end()) throw GraphError("unknown edge endpoint '" + to + "'");
        arrows.push_back({f->second, t->second});
    }
    return from_arrows(std::move(vertices), arrows);
}

Vertex Dag::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw GraphError("unknown vertex '" + name + "'");
    return it->second;
}

std::optional<Vertex> Dag::find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Skeleton Dag::skeleton() const {
    Skeleton out;
    for (const Arrow& e : edges_) out.insert(UndirectedEdge::of(e.from, e.to));
    return out;
}

std::vector<Vertex> topological_order(const Dag& g) {
    const std::size_t n = g.size();
    std::vector<std::size_t> indegree(n);
    for (Vertex v = 0; v < n; ++v) indegree[v] = g.parents(v).size();
    std::priority_queue<Vertex, std::vector<Vertex>, std::greater<>> ready;
    for (Vertex v = 0; v < n; ++v)
        if (indegree[v] == 0) ready.push(v);
    std::vector<Vertex> order;
    order.reserve(n);
    while (!ready.empty()) {
        Vertex v = ready.top();
        ready.pop();
        order.push_back(v);
        for (Vertex c : g.children(v))
            if (--indegree[c] == 0) ready.push(c);
    }
    return order;
}

VertexSet descendants(const Dag& g, Vertex x) {
    check_vertex(g, x);
    std::vector<char> seen(g.size(), 0);
    std::vector<Vertex> stack{x};
    while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        for (Vertex c : g.children(v)) {
            if (!seen[c]) {
                seen[c] = 1;
                stack.push_back(c);
            }
        }
    }
    VertexSet out;
    for (Vertex v = 0; v < g.size(); ++v)
        if (seen[v] && v != x) out.push_back(v);
    return out;
}

VertexSet non_descendants(const Dag& g, Vertex x) {
    const VertexSet desc = descendants(g, x);
    std::vector<char> in = membership(g.size(), desc);
    VertexSet out;
    for (Vertex v = 0; v < g.size(); ++v)
        if (!in[v] && v != x) out.push_back(v);
    return out;
}

VertexSet ancestral_set(const Dag& g, const VertexSet& xs) {
    std::vector<char> seen(g.size(), 0);
    std::vector<Vertex> stack;
    for (Vertex v : xs) {
        check_vertex(g, v);
        if (!seen[v]) {
            seen[v] = 1;
            stack.push_back(v);
        }
    }
    while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        for (Vertex p : g.parents(v)) {
            if (!seen[p]) {
                seen[p] = 1;
                stack.push_back(p);
            }
        }
    }
    VertexSet out;
    for (Vertex v = 0; v < g.size(); ++v)
        if (seen[v]) out.push_back(v);
    return out;
}

bool d_separated(const Dag& g, Vertex x, Vertex y, const VertexSet& s) {
    check_separation_query(g, x, y, s);
    const std::size_t n = g.size();
    const std::vector<char> conditioned = membership(n, s);
    // A collider passes a trail only if it is in s or has a descendant in s.
    const std::vector<char> opens_collider = membership(n, ancestral_set(g, s));

    enum Direction : std::size_t { kUp = 0, kDown = 1 };  // up: entered from a child
    std::vector<char> visited(2 * n, 0);
    std::deque<std::pair<Vertex, Direction>> queue{{x, kUp}};
    while (!queue.empty()) {
        auto [v, dir] = queue.front();
        queue.pop_front();
        if (visited[2 * v + dir]) continue;
        visited[2 * v + dir] = 1;
        if (v == y) return false;
        if (dir == kUp) {
            if (conditioned[v]) continue;
            for (Vertex p : g.parents(v)) queue.emplace_back(p, kUp);
            for (Vertex c : g.children(v)) queue.emplace_back(c, kDown);
        } else {
            if (!conditioned[v])
                for (Vertex c : g.children(v)) queue.emplace_back(c, kDown);
            if (opens_collider[v])
                for (Vertex p : g.parents(v)) queue.emplace_back(p, kUp);
        }
    }
    return true;
}

bool d_separated_moral(const Dag& g, Vertex x, Vertex y, const VertexSet& s) {
    check_separation_query(g, x, y, s);
    const std::size_t n = g.size();
    VertexSet query = s;
    query.push_back(x);
    query.push_back(y);
    const std::vector<char> keep = membership(n, ancestral_set(g, query));
    const std::vector<char> removed = membership(n, s);

    std::vector<std::vector<Vertex>> moral(n);
    auto link = [&](Vertex u, Vertex v) {
        moral[u].push_back(v);
        moral[v].push_back(u);
    };
    for (Vertex v = 0; v < n; ++v) {
        if (!keep[v]) continue;
        const auto& pa = g.parents(v);
        for (std::size_t i = 0; i < pa.size(); ++i) {
            link(pa[i], v);
            for (std::size_t j = i + 1; j < pa.size(); ++j) link(pa[i], pa[j]);
        }
    }
    std::vector<char> seen(n, 0);
    std::vector<Vertex> stack{x};
    seen[x] = 1;
    while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        if (v == y) return false;
        for (Vertex w : moral[v]) {
            if (!seen[w] && !removed[w]) {
                seen[w] = 1;
                stack.push_back(w);
            }
        }
    }
    return true;
}

PatternGraph::PatternGraph(std::vector<std::string> vertices, Skeleton skeleton, std::set<VStructure> v_structures,
                           Skeleton added_edges)
    : vertices_(std::move(vertices)),
      skeleton_(std::move(skeleton)),
      v_structures_(std::move(v_structures)),
      added_edges_(std::move(added_edges)) {
    const std::size_t n = vertices_.size();
    for (const auto& e : skeleton_)
        if (e.a >= e.b || e.b >= n) throw GraphError("skeleton edge is not a canonical pair of declared vertices");
    for (const auto& v : v_structures_) {
        if (v.a >= v.b || v.b >= n || v.collider >= n || v.collider == v.a || v.collider == v.b)
            throw GraphError("malformed v-structure triple");
        if (!adjacent(v.a, v.collider) || !adjacent(v.b, v.collider))
            throw GraphError("v-structure arrow " + vertices_[v.a] + " -> " + vertices_[v.collider] + " <- " +
                             vertices_[v.b] + " is not on the skeleton");
        if (adjacent(v.a, v.b))
            throw GraphError("v-structure endpoints " + vertices_[v.a] + ", " + vertices_[v.b] + " are adjacent");
    }
    for (const auto& e : added_edges_)
        if (!skeleton_.contains(e)) throw GraphError("added edge is not part of the skeleton");
}

std::set<Arrow> PatternGraph::arrows() const {
    std::set<Arrow> out;
    for (const auto& v : v_structures_) {
        out.insert(v.left());
        out.insert(v.right());
    }
    return out;
}

PatternGraph pattern_of(const Dag& g) {
    std::set<VStructure> vs;
    for (Vertex c = 0; c < g.size(); ++c) {
        const auto& pa = g.parents(c);
        for (std::size_t i = 0; i < pa.size(); ++i)
            for (std::size_t j = i + 1; j < pa.size(); ++j)
                if (!g.adjacent(pa[i], pa[j])) vs.insert(VStructure::of(pa[i], c, pa[j]));
    }
    return PatternGraph(g.names(), g.skeleton(), std::move(vs));
}

ResolvedVStructures resolve_conflicts(const std::set<VStructure>& v_structures) {
    std::set<Arrow> arrows;
    for (const auto& v : v_structures) {
        arrows.insert(v.left());
        arrows.insert(v.right());
    }
    auto reversed = [&](Arrow a) { return arrows.contains(Arrow{a.to, a.from}); };
    ResolvedVStructures out;
    for (const auto& v : v_structures) {
        if (reversed(v.left()) || reversed(v.right()))
            out.conflicting.push_back(v);
        else
            out.kept.insert(v);
    }
    return out;
}

MergedPattern merge_patterns(std::span<const PatternGraph> patterns) {
    if (patterns.empty()) throw GraphError("merge_patterns needs at least one pattern");
    const auto& vertices = patterns.front().vertices();
    Skeleton skeleton;
    Skeleton added;
    std::set<VStructure> candidates;
    for (const auto& p : patterns) {
        if (p.vertices() != vertices) throw GraphError("merge_patterns: vertex lists differ");
        skeleton.insert(p.skeleton().begin(), p.skeleton().end());
        added.insert(p.added_edges().begin(), p.added_edges().end());
        candidates.insert(p.v_structures().begin(), p.v_structures().end());
    }
    MergedPattern out;
    std::set<VStructure> unshielded;
    for (const auto& v : candidates) {
        if (skeleton.contains(UndirectedEdge::of(v.a, v.b)))
            out.shielded.push_back(v);
        else
            unshielded.insert(v);
    }
    ResolvedVStructures resolved = resolve_conflicts(unshielded);
    out.conflicting = std::move(resolved.conflicting);
    out.pattern = PatternGraph(vertices, std::move(skeleton), std::move(resolved.kept), std::move(added));
    return out;
}

}  // namespace causalmix
