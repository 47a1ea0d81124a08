#pragma once

#include "causalmix/bayesnet.hpp"
#include "causalmix/citest.hpp"
#include "causalmix/graph.hpp"
#include "causalmix/pc.hpp"

#include <span>
#include <vector>

namespace causalmix {

/// Result of learning one pattern per intervention data set and taking their union.
struct MergeResult {
    PatternGraph merged;
    std::vector<PatternGraph> per_dataset;
    /// Union v-structures dropped because their endpoints are adjacent in the merged skeleton.
    std::vector<VStructure> shielded;
    /// Union v-structures dropped because another v-structure reverses one of their arrows.
    std::vector<VStructure> conflicting;
};

/// Runs chi-square PC on each data set (in parallel when `jobs` > 1) and merges the patterns.
/// Throws ModelError when `datasets` is empty or the variable lists differ.
MergeResult merge_learn(std::span<const SampleTable> datasets, const CiTestOptions& test = {},
                        const PcOptions& options = {}, std::size_t jobs = 1);

/// Same pipeline with each data set replaced by the d-separation oracle of its post-intervention DAG.
MergeResult merge_learn_oracle(const Dag& base, std::span<const InterventionSpec> specs, const PcOptions& options = {});

/// True when every vertex is left unmanipulated by at least one intervention.
bool is_conservative(std::span<const InterventionSpec> specs, std::size_t vertex_count);

}  // namespace causalmix
