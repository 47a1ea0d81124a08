#include "causalmix/pool.hpp"

#include "causalmix/error.hpp"
#include "causalmix/parallel.hpp"

#include <cmath>

namespace causalmix {

SampleTable pool_datasets(std::span<const SampleTable> datasets) {
    if (datasets.empty()) throw ModelError("pool_datasets needs at least one data set");
    const auto& first = datasets.front();
    bool labelled = true;
    std::size_t total = 0;
    for (const auto& d : datasets) {
        if (d.variables() != first.variables() || d.cardinalities() != first.cardinalities())
            throw ModelError("pool_datasets: data sets have different variables");
        labelled = labelled && d.has_labels();
        total += d.rows();
    }
    std::vector<std::vector<SampleTable::Category>> columns(first.variable_count());
    for (Vertex v = 0; v < columns.size(); ++v) {
        columns[v].reserve(total);
        for (const auto& d : datasets) columns[v].insert(columns[v].end(), d.column(v).begin(), d.column(v).end());
    }
    std::vector<int> labels;
    if (labelled) {
        labels.reserve(total);
        for (const auto& d : datasets) labels.insert(labels.end(), d.labels().begin(), d.labels().end());
    }
    return SampleTable(first.variables(), first.cardinalities(), std::move(columns), std::move(labels));
}

OrientedPattern pool_learn_meta(std::span<const SampleTable> datasets, const CiTestOptions& test,
                                const PcOptions& options) {
    return pc_learn(pool_datasets(datasets), test, options);
}

std::size_t default_subset_size(std::size_t dataset_count) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(0.6 * static_cast<double>(dataset_count))));
}

EdgeFrequencyReport resample_frequencies(std::span<const SampleTable> datasets, const Skeleton& meta_edges,
                                         const ResampleOptions& resample, const CiTestOptions& test,
                                         const PcOptions& options) {
    const std::size_t m = datasets.size();
    if (m == 0) throw ModelError("resample_frequencies needs at least one data set");
    const std::size_t subset = resample.subset_size == 0 ? default_subset_size(m) : resample.subset_size;
    if (subset < 1 || subset > m)
        throw ModelError("subset size " + std::to_string(subset) + " is outside [1, " + std::to_string(m) + "]");
    if (resample.k_runs == 0) throw ModelError("re-sampling needs at least one run");

    EdgeFrequencyReport report;
    report.k_runs = resample.k_runs;
    report.subset_size = subset;
    report.meta_edges = meta_edges;
    report.drawn_subsets.resize(resample.k_runs);
    std::vector<Skeleton> learned(resample.k_runs);

    parallel_for(resample.k_runs, resample.jobs, [&](std::size_t i) {
        Rng rng = child_rng(resample.seed, i);
        auto drawn = sample_without_replacement(m, subset, rng);
        std::vector<SampleTable> chosen;
        chosen.reserve(subset);
        for (std::size_t j : drawn) chosen.push_back(datasets[j]);
        const SampleTable pooled = pool_datasets(chosen);
        learned[i] = learn_skeleton(pooled.variable_count(), chi_square_source(pooled, test), options.max_cond).edges;
        report.drawn_subsets[i] = std::move(drawn);
    });

    for (const auto& e : meta_edges) report.freq[e] = 0;
    for (const auto& edges : learned) {
        for (const auto& e : edges) {
            report.union_edges.insert(e);
            ++report.freq[e];
        }
    }
    for (const auto& e : report.union_edges)
        if (!meta_edges.contains(e)) report.extra_edges.insert(e);
    return report;
}

PatternGraph augment(const PatternGraph& meta, const EdgeFrequencyReport& report, double theta) {
    if (!(theta >= 0.0)) throw ModelError("threshold must be non-negative");
    Skeleton skeleton = meta.skeleton();
    Skeleton added = meta.added_edges();
    for (const auto& e : report.extra_edges) {
        if (static_cast<double>(report.frequency(e)) > theta && !skeleton.contains(e)) {
            skeleton.insert(e);
            added.insert(e);
        }
    }
    // An added edge may shield an existing v-structure; such v-structures no longer qualify.
    std::set<VStructure> v_structures;
    for (const auto& v : meta.v_structures())
        if (!skeleton.contains(UndirectedEdge::of(v.a, v.b))) v_structures.insert(v);
    return PatternGraph(meta.vertices(), std::move(skeleton), std::move(v_structures), std::move(added));
}

}  // namespace causalmix
