#include "causalmix/citest.hpp"

#include "causalmix/error.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <map>

namespace causalmix {

namespace {

constexpr std::size_t kDenseCellLimit = std::size_t{1} << 22;

void check_query(const SampleTable& data, Vertex x, Vertex y, const VertexSet& s) {
    const std::size_t n = data.variable_count();
    if (x >= n || y >= n) throw ModelError("CI query refers to an unknown variable");
    if (x == y) throw ModelError("CI query needs two distinct variables");
    for (Vertex v : s) {
        if (v >= n) throw ModelError("conditioning set refers to an unknown variable");
        if (v == x || v == y) throw ModelError("conditioning set contains a queried variable");
    }
}

/// Per-record stratum ids, compacted when the full configuration space is too large.
struct Strata {
    std::vector<std::size_t> id;
    std::size_t count = 1;
};

Strata stratify(const SampleTable& data, const VertexSet& s, std::size_t cells_per_stratum) {
    Strata out;
    const std::size_t n = data.rows();
    out.id.assign(n, 0);
    bool dense = true;
    for (Vertex v : s) {
        const std::size_t card = data.cardinalities()[v];
        if (out.count > kDenseCellLimit / (card * cells_per_stratum)) dense = false;
        out.count *= card;
        const auto col = data.column(v);
        for (std::size_t r = 0; r < n; ++r) out.id[r] = out.id[r] * card + col[r];
        if (!dense) break;
    }
    if (dense) return out;

    // Rebuild with compact ids in first-seen order.
    std::vector<std::vector<std::size_t>> keys(n, std::vector<std::size_t>(s.size()));
    for (std::size_t k = 0; k < s.size(); ++k) {
        const auto col = data.column(s[k]);
        for (std::size_t r = 0; r < n; ++r) keys[r][k] = col[r];
    }
    std::map<std::vector<std::size_t>, std::size_t> compact;
    for (std::size_t r = 0; r < n; ++r) {
        auto [it, inserted] = compact.emplace(keys[r], compact.size());
        out.id[r] = it->second;
    }
    out.count = std::max<std::size_t>(compact.size(), 1);
    return out;
}

}  // namespace

std::size_t StratumCounts::total() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

std::vector<StratumCounts> contingency_counts(const SampleTable& data, Vertex x, Vertex y, const VertexSet& s) {
    check_query(data, x, y, s);
    const std::size_t rx = data.cardinalities()[x], ry = data.cardinalities()[y];
    std::map<std::vector<std::size_t>, StratumCounts> strata;
    const auto cx = data.column(x), cy = data.column(y);
    for (std::size_t r = 0; r < data.rows(); ++r) {
        std::vector<std::size_t> key;
        key.reserve(s.size());
        for (Vertex v : s) key.push_back(data.at(r, v));
        auto [it, inserted] = strata.try_emplace(key);
        if (inserted) it->second = StratumCounts{key, rx, ry, std::vector<std::size_t>(rx * ry, 0)};
        ++it->second.counts[cx[r] * ry + cy[r]];
    }
    std::vector<StratumCounts> out;
    out.reserve(strata.size());
    for (auto& [key, counts] : strata) out.push_back(std::move(counts));
    return out;
}

CiResult chi_square_ci(const SampleTable& data, Vertex x, Vertex y, const VertexSet& s, const CiTestOptions& options) {
    check_query(data, x, y, s);
    if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw ModelError("significance level must lie in (0, 1)");
    if (x > y) std::swap(x, y);

    const std::size_t n = data.rows();
    const std::size_t rx = data.cardinalities()[x], ry = data.cardinalities()[y];
    const auto cx = data.column(x), cy = data.column(y);

    CiResult result;
    result.effective_n = n;

    {
        std::vector<char> seen_x(rx, 0), seen_y(ry, 0);
        for (std::size_t r = 0; r < n; ++r) {
            seen_x[cx[r]] = 1;
            seen_y[cy[r]] = 1;
        }
        const auto observed_x = std::count(seen_x.begin(), seen_x.end(), 1);
        const auto observed_y = std::count(seen_y.begin(), seen_y.end(), 1);
        if (observed_x < 2 || observed_y < 2) {
            result.degenerate = true;
            return result;
        }
    }

    const std::size_t cells = rx * ry;
    const Strata strata = stratify(data, s, cells);
    std::vector<std::size_t> counts(strata.count * cells, 0);
    for (std::size_t r = 0; r < n; ++r) ++counts[strata.id[r] * cells + cx[r] * ry + cy[r]];

    std::vector<std::size_t> row_sum(rx), col_sum(ry);
    double statistic = 0.0;
    std::size_t dof = 0;
    for (std::size_t z = 0; z < strata.count; ++z) {
        const std::size_t* table = counts.data() + z * cells;
        std::fill(row_sum.begin(), row_sum.end(), 0);
        std::fill(col_sum.begin(), col_sum.end(), 0);
        std::size_t total = 0;
        for (std::size_t i = 0; i < rx; ++i)
            for (std::size_t j = 0; j < ry; ++j) {
                row_sum[i] += table[i * ry + j];
                col_sum[j] += table[i * ry + j];
                total += table[i * ry + j];
            }
        if (total == 0) continue;
        const auto rows_used = std::count_if(row_sum.begin(), row_sum.end(), [](std::size_t c) { return c > 0; });
        const auto cols_used = std::count_if(col_sum.begin(), col_sum.end(), [](std::size_t c) { return c > 0; });
        if (rows_used < 2 || cols_used < 2) continue;
        dof += static_cast<std::size_t>((rows_used - 1) * (cols_used - 1));
        const double t = static_cast<double>(total);
        for (std::size_t i = 0; i < rx; ++i) {
            if (row_sum[i] == 0) continue;
            for (std::size_t j = 0; j < ry; ++j) {
                if (col_sum[j] == 0) continue;
                const double expected = static_cast<double>(row_sum[i]) * static_cast<double>(col_sum[j]) / t;
                const double observed = static_cast<double>(table[i * ry + j]);
                if (options.statistic == CiStatistic::pearson) {
                    const double d = observed - expected;
                    statistic += d * d / expected;
                } else if (observed > 0.0) {
                    statistic += 2.0 * observed * std::log(observed / expected);
                }
            }
        }
    }

    result.statistic = std::max(statistic, 0.0);
    result.dof = dof;
    if (dof == 0) return result;
    result.p_value = chi_square_sf(result.statistic, dof);
    if (static_cast<double>(n) < options.min_records_per_dof * static_cast<double>(dof)) {
        result.underpowered = true;
        result.independent = true;
        return result;
    }
    result.independent = result.p_value > options.alpha;
    return result;
}

double chi_square_sf(double statistic, std::size_t dof) {
    if (dof == 0) throw ModelError("chi-square survival function needs at least one degree of freedom");
    if (!(statistic >= 0.0)) throw ModelError("chi-square statistic must be non-negative");
    if (statistic == 0.0) return 1.0;
    return boost::math::gamma_q(static_cast<double>(dof) / 2.0, statistic / 2.0);
}

}  // namespace causalmix
