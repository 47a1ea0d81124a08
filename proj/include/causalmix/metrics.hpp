#pragma once

#include "causalmix/graph.hpp"

#include <cstddef>

namespace causalmix {

/// Edge and arrow counts of a learned pattern against a true DAG.
///
/// Ratio naming follows the source study literally: tpr = tp / (tp + fp) and
/// tdr = tp / (tp + fn), with the d_ variants on v-structure arrows. A ratio whose
/// denominator is zero is reported as 1.
struct Metrics {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tp1 = 0;
    std::size_t fp1 = 0;
    std::size_t fn1 = 0;
    double tpr = 1.0;
    double tdr = 1.0;
    double d_tpr = 1.0;
    double d_tdr = 1.0;

    std::size_t fn_count() const { return fn; }
    std::size_t fp_count() const { return fp; }

    bool operator==(const Metrics&) const = default;
};

/// Skeleton edges are compared without direction. Learned arrows (from v-structures) count as
/// tp1 when the truth has that directed edge and fp1 otherwise; fn1 counts arrows of the true
/// pattern's v-structures that were not learned. Throws GraphError on vertex mismatch.
Metrics score(const PatternGraph& learned, const Dag& truth);

}  // namespace causalmix
