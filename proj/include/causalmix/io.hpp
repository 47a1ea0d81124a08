#pragma once

#include "causalmix/bayesnet.hpp"
#include "causalmix/graph.hpp"
#include "causalmix/metrics.hpp"
#include "causalmix/pool.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace causalmix {

/// Parses the discrete BIF subset: `network`, `variable` blocks with
/// `type discrete [k] { states };`, and `probability ( child | parents )` blocks holding a
/// `table` list, per-configuration rows `(s1, s2) p1, p2;`, or a `default` row. `property`
/// entries are skipped. Rows must sum to one within 1e-6 and are renormalized.
/// Throws ParseError (with a position when available) or GraphError on cycles.
DiscreteBayesNet parse_bif(std::string_view text);
DiscreteBayesNet load_bif(const std::filesystem::path& path);

/// Header row of variable names, then one row of state names per record. An
/// `__intervention` integer column is appended when the table carries labels.
std::string write_samples(const SampleTable& table, const std::vector<std::vector<std::string>>& states);
inline std::string write_samples(const SampleTable& table, const DiscreteBayesNet& net) {
    return write_samples(table, net.all_states());
}

/// Columns may appear in any order but must be exactly `variables` plus an optional
/// `__intervention` column. Throws ParseError naming the row and column of bad cells.
SampleTable read_samples(std::string_view text, const std::vector<std::string>& variables,
                         const std::vector<std::vector<std::string>>& states);
inline SampleTable read_samples(std::string_view text, const DiscreteBayesNet& net) {
    return read_samples(text, net.names(), net.all_states());
}

/// Variable names (header order, label column excluded) and the sorted distinct values of each
/// column across all `texts`, for reading data without a network file.
struct InferredSchema {
    std::vector<std::string> variables;
    std::vector<std::vector<std::string>> states;
};
InferredSchema infer_schema(const std::vector<std::string>& texts);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

inline constexpr int kReportSchemaVersion = 1;

/// Everything a learner run can emit. Absent parts serialize as null.
struct Report {
    std::vector<std::string> vertices;
    std::optional<PatternGraph> pattern;
    std::optional<EdgeFrequencyReport> frequencies;
    std::optional<Metrics> metrics;
    nlohmann::json config_echo = nlohmann::json::object();
    std::optional<std::uint64_t> seed;
};

nlohmann::json pattern_to_json(const PatternGraph& pattern);
nlohmann::json metrics_to_json(const Metrics& metrics);
nlohmann::json frequencies_to_json(const EdgeFrequencyReport& report, const std::vector<std::string>& vertices);

/// Keys are emitted in sorted order so reports diff cleanly.
std::string write_report(const Report& report);
/// Throws ParseError on malformed JSON or a schema mismatch.
Report read_report(std::string_view text);

}  // namespace causalmix
