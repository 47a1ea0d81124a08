#pragma once

#include "causalmix/bayesnet.hpp"
#include "causalmix/graph.hpp"
#include "causalmix/random.hpp"

#include <cstdint>
#include <ostream>
#include <vector>

namespace causalmix::testing {

/// All subsets of `pool`, each sorted.
inline std::vector<VertexSet> all_subsets(const VertexSet& pool) {
    std::vector<VertexSet> out;
    const std::size_t n = pool.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        VertexSet s;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1U) s.push_back(pool[i]);
        out.push_back(std::move(s));
    }
    return out;
}

inline VertexSet others(std::size_t n, Vertex x, Vertex y) {
    VertexSet out;
    for (Vertex v = 0; v < n; ++v)
        if (v != x && v != y) out.push_back(v);
    return out;
}

/// x1 -> x2 -> x3 -> x4 -> x5 plus x1 -> x5.
inline Dag five_cycle_dag() {
    return Dag::build({"x1", "x2", "x3", "x4", "x5"},
                      {{"x1", "x2"}, {"x2", "x3"}, {"x3", "x4"}, {"x4", "x5"}, {"x1", "x5"}});
}

/// Random interventions on `net`: `count` specs, each manipulating 1..max_targets vertices.
inline std::vector<InterventionSpec> random_specs(const DiscreteBayesNet& net, std::size_t count,
                                                  std::size_t max_targets, double cut_prob, Rng& rng) {
    std::vector<InterventionSpec> specs;
    for (std::size_t j = 0; j < count; ++j) {
        const std::size_t k = 1 + uniform_index(std::min(max_targets, net.size()), rng);
        VertexSet targets = sample_without_replacement(net.size(), k, rng);
        std::sort(targets.begin(), targets.end());
        specs.push_back(generate_intervention_spec(net, targets, cut_prob, 1.0, rng));
    }
    return specs;
}

/// Vertices manipulated by none of `specs`.
inline VertexSet untouched(const std::vector<InterventionSpec>& specs, std::size_t n) {
    VertexSet out;
    for (Vertex v = 0; v < n; ++v) {
        bool hit = false;
        for (const auto& s : specs) hit = hit || s.manipulates(v);
        if (!hit) out.push_back(v);
    }
    return out;
}

}  // namespace causalmix::testing

namespace causalmix {

/// Readable gtest output for pattern comparisons.
inline void PrintTo(const PatternGraph& p, std::ostream* os) {
    *os << "skeleton {";
    for (const auto& e : p.skeleton()) *os << " " << p.vertices()[e.a] << "-" << p.vertices()[e.b];
    *os << " } v {";
    for (const auto& v : p.v_structures())
        *os << " " << p.vertices()[v.a] << ">" << p.vertices()[v.collider] << "<" << p.vertices()[v.b];
    *os << " } added {";
    for (const auto& e : p.added_edges()) *os << " " << p.vertices()[e.a] << "-" << p.vertices()[e.b];
    *os << " }";
}

}  // namespace causalmix
