#include "causalmix/error.hpp"
#include "causalmix/pool.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace causalmix;
using causalmix::testing::all_subsets;
using causalmix::testing::others;

namespace {

constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

struct MixtureCase {
    Dag g;
    std::vector<InterventionSpec> specs;
    VertexSet untouched;
    JointTable mix{{}, {1.0}};
};

MixtureCase mixture_case(std::uint64_t seed) {
    Rng rng = child_rng(50, seed);
    MixtureCase c;
    c.g = random_dag(4 + uniform_index(3, rng), 0.45, rng);
    const DiscreteBayesNet net = random_net(c.g, 2, 2, rng);
    c.specs = causalmix::testing::random_specs(net, 2 + uniform_index(2, rng), 2, 0.5, rng);
    c.untouched = causalmix::testing::untouched(c.specs, c.g.size());
    std::vector<DiscreteBayesNet> nets;
    for (const auto& s : c.specs) nets.push_back(apply_intervention(net, s));
    const std::vector<double> weights(nets.size(), 1.0 / static_cast<double>(nets.size()));
    c.mix = mixture(nets, weights);
    return c;
}

bool inside(const VertexSet& o, Vertex v) { return std::binary_search(o.begin(), o.end(), v); }

PatternGraph restrict_to(const PatternGraph& p, const VertexSet& o) {
    Skeleton skeleton;
    for (const auto& e : p.skeleton())
        if (inside(o, e.a) && inside(o, e.b)) skeleton.insert(e);
    std::set<VStructure> vs;
    for (const auto& v : p.v_structures())
        if (inside(o, v.a) && inside(o, v.b) && inside(o, v.collider)) vs.insert(v);
    return PatternGraph(p.vertices(), skeleton, vs);
}

std::vector<SampleTable> interventional_data(std::uint64_t seed, std::size_t vertices, std::size_t m,
                                             std::size_t n) {
    Rng rng = child_rng(51, seed);
    const DiscreteBayesNet net = random_net(random_dag(vertices, 0.35, rng), 2, 3, rng);
    const auto specs = causalmix::testing::random_specs(net, m, 2, 0.5, rng);
    std::vector<SampleTable> data;
    for (std::size_t j = 0; j < m; ++j)
        data.push_back(sample(apply_intervention(net, specs[j]), n, rng, static_cast<int>(j)));
    return data;
}

/// A hand-built frequency report over vertices named 1..37.
EdgeFrequencyReport numbered_report(const std::vector<std::tuple<int, int, std::size_t>>& extra,
                                    const std::vector<std::tuple<int, int, std::size_t>>& meta) {
    EdgeFrequencyReport r;
    r.k_runs = 100;
    r.subset_size = 30;
    for (const auto& [a, b, f] : extra) {
        const auto e = UndirectedEdge::of(a - 1, b - 1);
        r.extra_edges.insert(e);
        r.union_edges.insert(e);
        r.freq[e] = f;
    }
    for (const auto& [a, b, f] : meta) {
        const auto e = UndirectedEdge::of(a - 1, b - 1);
        r.meta_edges.insert(e);
        if (f > 0) r.union_edges.insert(e);
        r.freq[e] = f;
    }
    return r;
}

std::vector<std::string> numbered_names(std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= n; ++i) names.push_back(std::to_string(i));
    return names;
}

}  // namespace

TEST(PoolDatasets, ConcatenatesRowsAndLabels) {
    const SampleTable a({"x", "y"}, {2, 2}, {{0, 1}, {1, 1}}, {0, 0});
    const SampleTable b({"x", "y"}, {2, 2}, {{1}, {0}}, {1});
    const std::vector<SampleTable> both{a, b};
    const SampleTable p = pool_datasets(both);
    EXPECT_EQ(p.rows(), 3u);
    EXPECT_EQ(p.labels(), (std::vector<int>{0, 0, 1}));
    EXPECT_EQ(p.at(2, 0), 1);
    EXPECT_EQ(pool_datasets(std::vector<SampleTable>{a}), a);
}

TEST(PoolDatasets, HundredPlusHundred) {
    const auto data = interventional_data(0, 4, 2, 100);
    const SampleTable p = pool_datasets(data);
    EXPECT_EQ(p.rows(), 200u);
    EXPECT_EQ(std::count(p.labels().begin(), p.labels().end(), 1), 100);
}

TEST(PoolDatasets, LabelsDroppedUnlessEveryInputHasThem) {
    const SampleTable a({"x"}, {2}, {{0, 1}}, {0, 0});
    const SampleTable b({"x"}, {2}, {{1}});
    EXPECT_FALSE(pool_datasets(std::vector<SampleTable>{a, b}).has_labels());
}

TEST(PoolDatasets, RejectsMismatch) {
    const SampleTable a({"x", "y"}, {2, 2}, {{0}, {1}});
    const SampleTable b({"x", "z"}, {2, 2}, {{0}, {1}});
    const SampleTable c({"x", "y"}, {2, 3}, {{0}, {1}});
    EXPECT_THROW(pool_datasets(std::vector<SampleTable>{a, b}), ModelError);
    EXPECT_THROW(pool_datasets(std::vector<SampleTable>{a, c}), ModelError);
    EXPECT_THROW(pool_datasets(std::vector<SampleTable>{}), ModelError);
}

TEST(PoolDatasets, EmpiricalDistributionApproachesMixture) {
    Rng rng = child_rng(52, 0);
    const Dag g = Dag::build({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
    const DiscreteBayesNet net = random_net(g, 2, 2, rng);
    const std::vector<InterventionSpec> specs{generate_intervention_spec(net, {1}, 1.0, 1.0, rng),
                                              generate_intervention_spec(net, {2}, 1.0, 1.0, rng)};
    std::vector<DiscreteBayesNet> nets;
    std::vector<SampleTable> data;
    for (std::size_t j = 0; j < specs.size(); ++j) {
        nets.push_back(apply_intervention(net, specs[j]));
        data.push_back(sample(nets.back(), 100000, rng, static_cast<int>(j)));
    }
    const std::vector<double> weights{0.5, 0.5};
    const JointTable mix = mixture(nets, weights);
    const SampleTable pooled = pool_datasets(data);
    std::vector<double> counts(8, 0.0);
    for (std::size_t r = 0; r < pooled.rows(); ++r)
        counts[4 * pooled.at(r, 0) + 2 * pooled.at(r, 1) + pooled.at(r, 2)] += 1;
    const double n = static_cast<double>(pooled.rows());
    for (std::size_t cell = 0; cell < 8; ++cell) {
        const double p = mix.probabilities()[cell];
        EXPECT_NEAR(counts[cell] / n, p, 4 * std::sqrt(p * (1 - p) / n) + 1e-9) << "cell " << cell;
    }
}

TEST(PoolMeta, DuplicatedDatasetEqualsDoubledSample) {
    const auto data = interventional_data(1, 5, 1, 400);
    const std::vector<SampleTable> twice{data[0], data[0]};
    EXPECT_EQ(pool_learn_meta(twice).pattern, pc_learn(pool_datasets(twice)).pattern);
}

TEST(PoolMeta, FiveCycleMixtureSeparatesSecondAndFourth) {
    Rng rng = child_rng(53, 0);
    const Dag g = causalmix::testing::five_cycle_dag();
    const DiscreteBayesNet net = random_net(g, 2, 2, rng);
    const std::vector<InterventionSpec> specs{generate_intervention_spec(net, {0}, 1.0, 1.0, rng),
                                              generate_intervention_spec(net, {4}, 1.0, 1.0, rng)};
    std::vector<DiscreteBayesNet> nets;
    for (const auto& s : specs) nets.push_back(apply_intervention(net, s));
    const std::vector<double> weights{0.5, 0.5};
    const JointTable mix = mixture(nets, weights);
    EXPECT_TRUE(ci_exact(mix, 1, 3, {2}));
    const PatternGraph meta = pc_learn(exact_oracle(mix), g.names(), {kUnbounded}).pattern;
    EXPECT_FALSE(meta.adjacent(1, 3));
    EXPECT_TRUE(meta.adjacent(1, 2));
    EXPECT_TRUE(meta.adjacent(2, 3));
}

TEST(PoolMeta, ExactMixtureRecoversPatternOnUntouchedVertices) {
    std::size_t checked = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const MixtureCase c = mixture_case(seed);
        if (c.untouched.size() < 2) continue;
        ++checked;
        const PatternGraph meta = pc_learn(exact_oracle(c.mix), c.g.names(), {kUnbounded}).pattern;
        EXPECT_EQ(restrict_to(meta, c.untouched), restrict_to(pattern_of(c.g), c.untouched)) << "seed " << seed;
    }
    EXPECT_GE(checked, 25u);
}

TEST(PoolMeta, AdjacencyOnUntouchedPairsMatchesMixtureDependence) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const MixtureCase c = mixture_case(seed);
        for (Vertex x : c.untouched)
            for (Vertex y : c.untouched) {
                if (y <= x) continue;
                bool separable = false;
                for (const auto& s : all_subsets(others(c.g.size(), x, y)))
                    separable = separable || ci_exact(c.mix, x, y, s);
                EXPECT_EQ(c.g.adjacent(x, y), !separable) << "seed " << seed << " " << x << "-" << y;
            }
    }
}

TEST(PoolMeta, CollidersOnUntouchedTriplesMatchSeparatingSets) {
    std::size_t triples = 0;
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        const MixtureCase c = mixture_case(seed);
        for (Vertex a : c.untouched)
            for (Vertex b : c.untouched) {
                if (b <= a || c.g.adjacent(a, b)) continue;
                for (Vertex mid : c.untouched) {
                    if (!c.g.adjacent(a, mid) || !c.g.adjacent(b, mid)) continue;
                    ++triples;
                    const bool collider = c.g.has_edge(a, mid) && c.g.has_edge(b, mid);
                    bool all_exclude = true;
                    for (const auto& s : all_subsets(others(c.g.size(), a, b)))
                        if (ci_exact(c.mix, a, b, s)) all_exclude = all_exclude && !std::binary_search(s.begin(), s.end(), mid);
                    EXPECT_EQ(collider, all_exclude) << "seed " << seed;
                }
            }
    }
    EXPECT_GT(triples, 10u) << triples;
}

TEST(Resample, FullSubsetGivesAllOrNothing) {
    const auto data = interventional_data(2, 5, 4, 150);
    const Skeleton meta = pool_learn_meta(data).pattern.skeleton();
    const EdgeFrequencyReport r = resample_frequencies(data, meta, {10, 4, 7, 1});
    for (const auto& [e, f] : r.freq) EXPECT_TRUE(f == 0 || f == 10);
    for (const auto& e : meta) EXPECT_EQ(r.frequency(e), 10u);
    EXPECT_TRUE(r.extra_edges.empty());
}

TEST(Resample, ReportIsConsistent) {
    const auto data = interventional_data(3, 6, 8, 60);
    const Skeleton meta = pool_learn_meta(data).pattern.skeleton();
    const EdgeFrequencyReport r = resample_frequencies(data, meta, {25, 0, 11, 1});
    EXPECT_EQ(r.subset_size, default_subset_size(8));
    EXPECT_EQ(r.subset_size, 5u);
    ASSERT_EQ(r.drawn_subsets.size(), 25u);
    for (const auto& d : r.drawn_subsets) {
        EXPECT_EQ(d.size(), 5u);
        std::set<std::size_t> distinct(d.begin(), d.end());
        EXPECT_EQ(distinct.size(), d.size());
        EXPECT_LT(*distinct.rbegin(), 8u);
    }
    EXPECT_EQ(r.meta_edges, meta);
    for (const auto& e : r.union_edges) {
        EXPECT_GE(r.frequency(e), 1u);
        EXPECT_LE(r.frequency(e), 25u);
    }
    for (const auto& e : r.extra_edges) {
        EXPECT_FALSE(meta.contains(e));
        EXPECT_TRUE(r.union_edges.contains(e));
    }
    for (const auto& e : r.union_edges) EXPECT_TRUE(meta.contains(e) || r.extra_edges.contains(e));
    for (const auto& [e, f] : r.freq) EXPECT_TRUE(meta.contains(e) || r.union_edges.contains(e));
}

TEST(Resample, ParallelRunsMatchSequential) {
    const auto data = interventional_data(4, 6, 6, 80);
    const Skeleton meta = pool_learn_meta(data).pattern.skeleton();
    const EdgeFrequencyReport a = resample_frequencies(data, meta, {12, 3, 5, 1});
    const EdgeFrequencyReport b = resample_frequencies(data, meta, {12, 3, 5, 3});
    EXPECT_EQ(a.drawn_subsets, b.drawn_subsets);
    EXPECT_EQ(a.freq, b.freq);
    EXPECT_EQ(a.extra_edges, b.extra_edges);
}

TEST(Resample, RejectsBadParameters) {
    const auto data = interventional_data(5, 4, 3, 50);
    EXPECT_THROW(resample_frequencies(data, {}, {10, 4, 0, 1}), ModelError);
    EXPECT_THROW(resample_frequencies(data, {}, {0, 2, 0, 1}), ModelError);
}

TEST(Resample, DefaultSubsetSize) {
    EXPECT_EQ(default_subset_size(50), 30u);
    EXPECT_EQ(default_subset_size(1), 1u);
    EXPECT_EQ(default_subset_size(2), 2u);
    EXPECT_EQ(default_subset_size(7), 5u);
}

TEST(Augment, ThresholdsAtTheExtremes) {
    const auto data = interventional_data(6, 7, 8, 60);
    const PatternGraph meta = pool_learn_meta(data).pattern;
    const EdgeFrequencyReport r = resample_frequencies(data, meta.skeleton(), {20, 4, 9, 1});
    EXPECT_EQ(augment(meta, r, 20), meta);
    EXPECT_EQ(augment(meta, r, 1000), meta);
    const PatternGraph all = augment(meta, r, 0);
    Skeleton expected = meta.skeleton();
    expected.insert(r.extra_edges.begin(), r.extra_edges.end());
    EXPECT_EQ(all.skeleton(), expected);
    EXPECT_EQ(all.added_edges(), r.extra_edges);
}

TEST(Augment, SkeletonShrinksAsThresholdGrows) {
    for (std::uint64_t seed = 7; seed < 10; ++seed) {
        const auto data = interventional_data(seed, 7, 8, 60);
        const PatternGraph meta = pool_learn_meta(data).pattern;
        const EdgeFrequencyReport r = resample_frequencies(data, meta.skeleton(), {20, 4, seed, 1});
        Skeleton previous = augment(meta, r, 0).skeleton();
        for (double theta = 1; theta <= 21; theta += 1) {
            const Skeleton current = augment(meta, r, theta).skeleton();
            EXPECT_TRUE(std::includes(previous.begin(), previous.end(), current.begin(), current.end()));
            previous = current;
        }
    }
}

TEST(Augment, FrequencyTableAtFifty) {
    const EdgeFrequencyReport r = numbered_report(
        {{25, 30, 79}, {17, 23, 77}, {2, 4, 68}, {30, 31, 35}, {21, 32, 10}, {15, 16, 2}, {34, 37, 2}, {9, 34, 2},
         {1, 27, 1}, {11, 16, 1}},
        {{4, 27, 23}, {9, 17, 24}, {24, 25, 31}, {17, 34, 44}, {16, 17, 61}, {2, 3, 89}, {18, 19, 90}, {21, 22, 90},
         {25, 31, 90}, {14, 15, 96}});
    const PatternGraph meta(numbered_names(37), r.meta_edges, {});
    const PatternGraph out = augment(meta, r, 50);
    EXPECT_EQ(out.added_edges(), (Skeleton{UndirectedEdge::of(24, 29), UndirectedEdge::of(16, 22), UndirectedEdge::of(1, 3)}));
    EXPECT_EQ(out.skeleton().size(), meta.skeleton().size() + 3);
}

TEST(Augment, AddedEdgeShieldingAColliderRemovesIt) {
    // a -> c <- b in the meta pattern; re-sampling finds a - b often.
    const PatternGraph meta({"a", "b", "c"}, Skeleton{{0, 2}, {1, 2}}, {VStructure::of(0, 2, 1)});
    EdgeFrequencyReport r;
    r.k_runs = 10;
    r.meta_edges = meta.skeleton();
    r.union_edges = {{0, 1}, {0, 2}, {1, 2}};
    r.extra_edges = {{0, 1}};
    r.freq = {{{0, 1}, 8}, {{0, 2}, 10}, {{1, 2}, 10}};
    const PatternGraph out = augment(meta, r, 5);
    EXPECT_TRUE(out.adjacent(0, 1));
    EXPECT_TRUE(out.v_structures().empty());
    EXPECT_EQ(augment(meta, r, 8), meta);
}
