#include "causalmix/merge.hpp"

#include "causalmix/error.hpp"
#include "causalmix/parallel.hpp"

namespace causalmix {

namespace {

MergeResult merge_all(std::vector<PatternGraph> patterns) {
    MergedPattern merged = merge_patterns(patterns);
    return {std::move(merged.pattern), std::move(patterns), std::move(merged.shielded), std::move(merged.conflicting)};
}

}  // namespace

MergeResult merge_learn(std::span<const SampleTable> datasets, const CiTestOptions& test, const PcOptions& options,
                        std::size_t jobs) {
    if (datasets.empty()) throw ModelError("merge_learn needs at least one data set");
    for (const auto& d : datasets)
        if (d.variables() != datasets.front().variables() || d.cardinalities() != datasets.front().cardinalities())
            throw ModelError("merge_learn: data sets have different variables");
    std::vector<PatternGraph> patterns(datasets.size());
    parallel_for(datasets.size(), jobs, [&](std::size_t j) { patterns[j] = pc_learn(datasets[j], test, options).pattern; });
    return merge_all(std::move(patterns));
}

MergeResult merge_learn_oracle(const Dag& base, std::span<const InterventionSpec> specs, const PcOptions& options) {
    if (specs.empty()) throw ModelError("merge_learn_oracle needs at least one intervention");
    std::vector<PatternGraph> patterns;
    patterns.reserve(specs.size());
    for (const auto& spec : specs)
        patterns.push_back(pc_learn(d_separation_oracle(apply_intervention(base, spec)), base.names(), options).pattern);
    return merge_all(std::move(patterns));
}

bool is_conservative(std::span<const InterventionSpec> specs, std::size_t vertex_count) {
    for (Vertex v = 0; v < vertex_count; ++v) {
        bool untouched_somewhere = false;
        for (const auto& spec : specs) {
            if (!spec.manipulates(v)) {
                untouched_somewhere = true;
                break;
            }
        }
        if (!untouched_somewhere) return false;
    }
    return true;
}

}  // namespace causalmix
