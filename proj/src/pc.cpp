#include "causalmix/pc.hpp"

#include "causalmix/error.hpp"

#include <algorithm>
#include <memory>

namespace causalmix {

CiSource d_separation_oracle(Dag g) {
    const std::size_t n = g.size();
    auto graph = std::make_shared<const Dag>(std::move(g));
    return CiSource(
        n, [graph](Vertex x, Vertex y, const VertexSet& s) { return d_separated(*graph, x, y, s); }, CiFlavor::oracle);
}

CiSource exact_oracle(JointTable joint, double eps) {
    const std::size_t n = joint.variable_count();
    auto table = std::make_shared<const JointTable>(std::move(joint));
    return CiSource(
        n, [table, eps](Vertex x, Vertex y, const VertexSet& s) { return ci_exact(*table, x, y, s, eps); },
        CiFlavor::oracle);
}

CiSource chi_square_source(const SampleTable& data, CiTestOptions options) {
    return CiSource(
        data.variable_count(),
        [&data, options](Vertex x, Vertex y, const VertexSet& s) {
            return chi_square_ci(data, x, y, s, options).independent;
        },
        CiFlavor::statistical);
}

namespace {

/// Advances `idx` to the next size-k combination of [0, n) in lexicographic order.
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
    const std::size_t k = idx.size();
    for (std::size_t i = k; i-- > 0;) {
        if (idx[i] < n - k + i) {
            ++idx[i];
            for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

class CachedCi {
public:
    explicit CachedCi(const CiSource& ci) : ci_(ci) {}

    bool independent(Vertex x, Vertex y, const VertexSet& s) {
        auto key = std::make_pair(UndirectedEdge::of(x, y), s);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        ++tests_;
        const bool result = ci_.independent(key.first.a, key.first.b, s);
        cache_.emplace(std::move(key), result);
        return result;
    }
    std::size_t tests() const { return tests_; }

private:
    const CiSource& ci_;
    std::map<std::pair<UndirectedEdge, VertexSet>, bool> cache_;
    std::size_t tests_ = 0;
};

}  // namespace

SkeletonResult learn_skeleton(std::size_t vertex_count, const CiSource& ci, std::size_t max_cond) {
    if (ci.vertex_count() != vertex_count) throw GraphError("CI source covers a different number of vertices");
    const std::size_t n = vertex_count;
    std::vector<char> adj(n * n, 1);
    for (Vertex v = 0; v < n; ++v) adj[v * n + v] = 0;

    CachedCi cached(ci);
    SkeletonResult result;
    for (std::size_t level = 0; level <= max_cond; ++level) {
        std::vector<std::vector<Vertex>> frozen(n);
        for (Vertex x = 0; x < n; ++x)
            for (Vertex y = 0; y < n; ++y)
                if (adj[x * n + y]) frozen[x].push_back(y);

        bool testable = false;
        for (Vertex x = 0; x < n; ++x) {
            for (Vertex y : frozen[x]) {
                if (!adj[x * n + y]) continue;
                std::vector<Vertex> candidates;
                for (Vertex v : frozen[x])
                    if (v != y) candidates.push_back(v);
                if (candidates.size() < level) continue;
                testable = true;

                std::vector<std::size_t> idx(level);
                for (std::size_t i = 0; i < level; ++i) idx[i] = i;
                VertexSet s(level);
                do {
                    for (std::size_t i = 0; i < level; ++i) s[i] = candidates[idx[i]];
                    if (cached.independent(x, y, s)) {
                        adj[x * n + y] = adj[y * n + x] = 0;
                        result.sepsets.record(x, y, s);
                        break;
                    }
                } while (next_combination(idx, candidates.size()));
            }
        }
        if (!testable) break;
    }

    for (Vertex x = 0; x < n; ++x)
        for (Vertex y = x + 1; y < n; ++y)
            if (adj[x * n + y]) result.edges.insert({x, y});
    result.tests = cached.tests();
    return result;
}

OrientedPattern orient_v_structures(std::vector<std::string> vertices, const Skeleton& skeleton,
                                    const SepSets& sepsets) {
    const std::size_t n = vertices.size();
    std::vector<std::vector<Vertex>> neighbours(n);
    for (const auto& e : skeleton) {
        if (e.b >= n) throw GraphError("skeleton edge refers to an unknown vertex");
        neighbours[e.a].push_back(e.b);
        neighbours[e.b].push_back(e.a);
    }
    for (auto& nb : neighbours) std::sort(nb.begin(), nb.end());

    std::set<VStructure> candidates;
    for (Vertex c = 0; c < n; ++c) {
        const auto& nb = neighbours[c];
        for (std::size_t i = 0; i < nb.size(); ++i) {
            for (std::size_t j = i + 1; j < nb.size(); ++j) {
                const Vertex a = nb[i], b = nb[j];
                if (skeleton.contains(UndirectedEdge{a, b})) continue;
                const VertexSet* sep = sepsets.find(a, b);
                if (sep == nullptr)
                    throw GraphError("no separating set recorded for non-adjacent pair " + vertices[a] + ", " +
                                     vertices[b]);
                if (!std::binary_search(sep->begin(), sep->end(), c)) candidates.insert(VStructure{a, c, b});
            }
        }
    }
    ResolvedVStructures resolved = resolve_conflicts(candidates);
    return {PatternGraph(std::move(vertices), skeleton, std::move(resolved.kept)), std::move(resolved.conflicting)};
}

OrientedPattern pc_learn(const CiSource& ci, std::vector<std::string> vertices, const PcOptions& options) {
    if (vertices.size() != ci.vertex_count()) throw GraphError("vertex list does not match the CI source");
    const SkeletonResult skeleton = learn_skeleton(vertices.size(), ci, options.max_cond);
    return orient_v_structures(std::move(vertices), skeleton.edges, skeleton.sepsets);
}

OrientedPattern pc_learn(const SampleTable& data, const CiTestOptions& test, const PcOptions& options) {
    return pc_learn(chi_square_source(data, test), data.variables(), options);
}

}  // namespace causalmix
