#pragma once

#include "causalmix/bayesnet.hpp"
#include "causalmix/citest.hpp"
#include "causalmix/graph.hpp"
#include "causalmix/pc.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace causalmix {

/// Row-wise concatenation. Intervention labels are kept when every input carries them.
SampleTable pool_datasets(std::span<const SampleTable> datasets);

/// Meta learning: chi-square PC over the pooled table. The intervention label is never tested.
OrientedPattern pool_learn_meta(std::span<const SampleTable> datasets, const CiTestOptions& test = {},
                                const PcOptions& options = {});

struct ResampleOptions {
    std::size_t k_runs = 100;
    /// Number of interventions pooled per run; 0 selects ceil(0.6 m).
    std::size_t subset_size = 0;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
};

/// Edge frequencies over K re-sampled poolings of the interventions.
struct EdgeFrequencyReport {
    std::size_t k_runs = 0;
    std::size_t subset_size = 0;
    /// Zero-based data-set indices drawn for each run, in draw order.
    std::vector<std::vector<std::size_t>> drawn_subsets;
    Skeleton meta_edges;
    Skeleton union_edges;
    Skeleton extra_edges;
    /// Defined on meta_edges u union_edges; meta edges never re-learned carry 0.
    std::map<UndirectedEdge, std::size_t> freq;

    std::size_t frequency(const UndirectedEdge& e) const {
        auto it = freq.find(e);
        return it == freq.end() ? 0 : it->second;
    }
};

std::size_t default_subset_size(std::size_t dataset_count);

/// Run i draws its subset from child_rng(seed, i), pools those data sets and learns a
/// skeleton. Throws ModelError when the subset size is outside [1, m] or k_runs is 0.
EdgeFrequencyReport resample_frequencies(std::span<const SampleTable> datasets, const Skeleton& meta_edges,
                                         const ResampleOptions& resample, const CiTestOptions& test = {},
                                         const PcOptions& options = {});

/// Adds every extra edge with frequency above `theta` to the meta skeleton. Added edges are
/// flagged in `added_edges`. V-structures are kept unless an added edge joins their endpoints.
PatternGraph augment(const PatternGraph& meta, const EdgeFrequencyReport& report, double theta);

}  // namespace causalmix
