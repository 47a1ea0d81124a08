#pragma once

#include "causalmix/bayesnet.hpp"
#include "causalmix/citest.hpp"
#include "causalmix/metrics.hpp"
#include "causalmix/pool.hpp"
#include "causalmix/random.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace causalmix {

enum class StudyMode { experiment1, experiment2, experiment3, observational };

std::string to_string(StudyMode mode);
StudyMode parse_study_mode(std::string_view text);

/// How many targets each intervention gets: a uniform draw from [low, high] or a constant.
struct TargetRule {
    enum class Kind { uniform, constant } kind = Kind::uniform;
    std::size_t low = 1;
    std::size_t high = 5;

    static TargetRule uniform(std::size_t low, std::size_t high) { return {Kind::uniform, low, high}; }
    static TargetRule constant(std::size_t count) { return {Kind::constant, count, count}; }

    std::size_t draw(Rng& rng) const;
    std::string label() const;
    bool operator==(const TargetRule&) const = default;
};

struct StudyCase {
    std::size_t n = 0;  // records per intervention
    std::size_t m = 0;  // number of interventions
    bool operator==(const StudyCase&) const = default;
};

struct StudyConfig {
    std::filesystem::path network;
    StudyMode mode = StudyMode::experiment1;
    std::vector<StudyCase> cases;
    /// One study condition per (case, rule) pair.
    std::vector<TargetRule> target_rules;
    double cut_prob = 0.5;
    double dirichlet_alpha = 1.0;
    double alpha = 0.01;
    CiStatistic statistic = CiStatistic::pearson;
    std::size_t max_cond = 5;
    std::size_t repetitions = 100;
    std::size_t resample_k = 100;
    /// 0 selects ceil(0.6 m).
    std::size_t subset_size = 0;
    std::vector<double> thetas{0, 5, 10, 15, 20, 25, 30, 35, 50, 100};
    std::size_t rank_top = 10;
    /// Draw per-intervention record counts from a multinomial over the interventions instead
    /// of giving each exactly n.
    bool multinomial_sizes = false;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;

    /// Reference settings for `mode`: cases, target rules and re-sampling parameters.
    static StudyConfig defaults(StudyMode mode);
    /// Throws ModelError naming the offending field.
    void validate() const;
    nlohmann::json to_json() const;
};

/// Reads `key = value` lines (`#` starts a comment). Keys mirror StudyConfig fields:
/// network, mode, cases (`2500x2, 100x50`), targets (`uniform 1 5` or `constant 2,5,10`),
/// cut_prob, dirichlet_alpha, alpha, statistic, max_cond, repetitions, resample_k, subset,
/// thetas, rank_top, multinomial_sizes, seed, jobs. Unset keys take the defaults of the chosen
/// mode. A relative network path is resolved against `base_dir`. Throws ParseError with the
/// line number.
StudyConfig parse_study_config(std::string_view text, const std::filesystem::path& base_dir = {});
StudyConfig load_study_config(const std::filesystem::path& path);

struct Trial {
    std::vector<InterventionSpec> specs;
    std::vector<SampleTable> datasets;
};

/// m interventions on `base`, each with targets drawn without replacement per `rule`, and n
/// records from each post-intervention net labelled with the intervention index. With
/// `multinomial_sizes` the n m records are split by uniform multinomial draws instead.
/// Throws ModelError when the rule asks for more targets than there are vertices.
Trial generate_trial(const DiscreteBayesNet& base, std::size_t n, std::size_t m, const TargetRule& rule,
                     double cut_prob, double dirichlet_alpha, Rng& rng, bool multinomial_sizes = false);

struct RankedEdge {
    UndirectedEdge edge;
    std::size_t frequency = 0;
    bool true_edge = false;
};

struct RankTable {
    /// Extra edges by descending frequency.
    std::vector<RankedEdge> descending;
    /// Meta edges by ascending frequency.
    std::vector<RankedEdge> ascending;
};

/// At most `top` rows per side; ties are broken by the canonical edge order.
RankTable frequency_rank_table(const EdgeFrequencyReport& report, const Dag& truth, std::size_t top);

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

/// Mean and standard error (sample SD with n-1, over sqrt(n)); SE is 0 for fewer than two values.
MeanSe mean_se(const std::vector<double>& values);

struct RepetitionResult {
    std::uint64_t seed = 0;
    /// Keyed by method: "merge", "pool", or "pc" in observational mode.
    std::map<std::string, Metrics> methods;
    /// Pool pattern augmented at each theta (experiment 3 only), in config order.
    std::vector<Metrics> theta_metrics;
    std::optional<RankTable> ranks;
    std::size_t extra_edges = 0;
};

struct ThetaRow {
    double theta = 0.0;
    MeanSe fn;
    MeanSe fp;
    double sum = 0.0;
};

struct RankSummary {
    std::size_t rank = 0;
    /// Repetitions whose table has this rank, and how many of those have a true edge there.
    std::size_t descending_present = 0;
    std::size_t descending_true = 0;
    std::size_t ascending_present = 0;
    std::size_t ascending_true = 0;
};

struct MethodSummary {
    MeanSe tpr, tdr, d_tpr, d_tdr;
    MeanSe tp, fp, fn, tp1, fp1, fn1;
};

struct ConditionReport {
    StudyCase study_case;
    TargetRule rule;
    std::uint64_t seed = 0;
    std::vector<RepetitionResult> repetitions;
    std::map<std::string, MethodSummary> methods;
    std::vector<ThetaRow> thetas;
    std::vector<RankSummary> ranks;
    /// Frequency report of the first repetition, the raw material of a Table-1 style listing.
    std::optional<EdgeFrequencyReport> first_frequencies;
};

struct StudyReport {
    StudyConfig config;
    std::vector<std::string> vertices;
    std::vector<ConditionReport> conditions;
};

/// Runs every (case, rule) condition for the configured repetitions. Repetition r of condition
/// c uses child_rng(child_seed(seed, c), r), so results do not depend on `jobs`.
StudyReport run_study(const StudyConfig& config, const DiscreteBayesNet& net);
/// Loads the configured network, then runs the study. I/O errors name the file.
StudyReport run_study(const StudyConfig& config);

nlohmann::json study_report_to_json(const StudyReport& report);

/// Writes report.json, metrics.csv, repetitions.csv and the mode's table files
/// (figure1.csv, figure2.csv, table1.csv, table2.csv, table3.csv, observational.csv) into `dir`,
/// creating it if needed. Returns the paths written, in order.
std::vector<std::filesystem::path> write_study_outputs(const StudyReport& report, const std::filesystem::path& dir);

}  // namespace causalmix
