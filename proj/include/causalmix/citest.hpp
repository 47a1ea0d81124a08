#pragma once

#include "causalmix/bayesnet.hpp"
#include "causalmix/graph.hpp"

#include <cstddef>
#include <vector>

namespace causalmix {

enum class CiStatistic { pearson, g_squared };

struct CiTestOptions {
    double alpha = 0.01;
    CiStatistic statistic = CiStatistic::pearson;
    /// Tests with fewer than this many records per degree of freedom are not trusted and
    /// report independence.
    double min_records_per_dof = 10.0;
};

struct CiResult {
    bool independent = true;
    double statistic = 0.0;
    std::size_t dof = 0;
    double p_value = 1.0;
    std::size_t effective_n = 0;
    /// Set when the sparse-data rule forced the decision.
    bool underpowered = false;
    /// Set when x or y shows fewer than two categories overall.
    bool degenerate = false;
};

/// Counts for one realized configuration of the conditioning set.
struct StratumCounts {
    std::vector<std::size_t> conditioning_states;
    std::size_t x_cardinality = 0;
    std::size_t y_cardinality = 0;
    /// Row-major: counts[i * y_cardinality + j] is #records with x = i and y = j.
    std::vector<std::size_t> counts;

    std::size_t at(std::size_t i, std::size_t j) const { return counts[i * y_cardinality + j]; }
    std::size_t total() const;
};

/// Strata are listed in increasing mixed-radix order of the conditioning configuration.
std::vector<StratumCounts> contingency_counts(const SampleTable& data, Vertex x, Vertex y, const VertexSet& s);

/// Stratified chi-square test of x _||_ y | s.
///
/// Rows or columns with an empty marginal inside a stratum are dropped from that stratum,
/// both from the statistic and from the degrees of freedom. Results are symmetric in x and y.
CiResult chi_square_ci(const SampleTable& data, Vertex x, Vertex y, const VertexSet& s,
                       const CiTestOptions& options = {});

/// Upper tail of the chi-square distribution with `dof` >= 1 degrees of freedom.
double chi_square_sf(double statistic, std::size_t dof);

}  // namespace causalmix
