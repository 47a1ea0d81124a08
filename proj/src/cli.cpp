#include "causalmix/cli.hpp"

#include "causalmix/error.hpp"
#include "causalmix/experiment.hpp"
#include "causalmix/io.hpp"
#include "causalmix/merge.hpp"
#include "causalmix/metrics.hpp"
#include "causalmix/pc.hpp"
#include "causalmix/pool.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <optional>
#include <ostream>

namespace causalmix {

namespace {

/// A usage problem detected after CLI11 accepted the arguments.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Dataset {
    std::vector<SampleTable> tables;
    std::vector<std::string> vertices;
};

/// Reads data files against the network's states when one is given, otherwise against the
/// states observed across all files.
Dataset load_datasets(const std::vector<std::string>& paths, const std::string& net_path) {
    std::vector<std::string> texts;
    for (const auto& p : paths) texts.push_back(read_text_file(p));
    std::vector<std::string> variables;
    std::vector<std::vector<std::string>> states;
    if (!net_path.empty()) {
        const DiscreteBayesNet net = load_bif(net_path);
        variables = net.names();
        states = net.all_states();
    } else {
        InferredSchema schema = infer_schema(texts);
        variables = std::move(schema.variables);
        states = std::move(schema.states);
    }
    Dataset d;
    d.vertices = variables;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        try {
            d.tables.push_back(read_samples(texts[i], variables, states));
        } catch (const ParseError& e) {
            throw ParseError(paths[i] + ": " + e.what());
        }
    }
    return d;
}

CiTestOptions test_options(double alpha, const std::string& statistic) {
    CiTestOptions t;
    t.alpha = alpha;
    t.statistic = statistic == "g2" ? CiStatistic::g_squared : CiStatistic::pearson;
    return t;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-")
        out << text;
    else
        write_text_file(path, text);
}

std::vector<std::string> names_of(const nlohmann::json& j, const char* what) {
    if (!j.is_array()) throw ParseError(std::string(what) + " must be an array of variable names");
    return j.get<std::vector<std::string>>();
}

void add_test_flags(CLI::App* cmd, double& alpha, std::string& statistic, std::size_t& max_cond) {
    cmd->add_option("--alpha", alpha, "Significance level of the chi-square tests")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--statistic", statistic, "Test statistic: pearson or g2")
        ->capture_default_str()
        ->check(CLI::IsMember({"pearson", "g2"}));
    cmd->add_option("--max-cond", max_cond, "Largest conditioning-set size")->capture_default_str();
}

}  // namespace

InterventionSpec parse_intervention_json(const nlohmann::json& j, const DiscreteBayesNet& net, Rng& rng) {
    try {
        if (!j.is_object()) throw ParseError("intervention file must hold a JSON object");
        const bool explicit_form = j.contains("interventions");
        const bool random_form = j.contains("random_targets");
        if (explicit_form == random_form)
            throw ParseError("intervention file needs exactly one of 'interventions' or 'random_targets'");
        auto vertex = [&](const std::string& name) {
            auto v = net.dag().find(name);
            if (!v) throw ParseError("intervention names unknown variable '" + name + "'");
            return *v;
        };
        if (random_form) {
            VertexSet targets;
            for (const auto& name : names_of(j["random_targets"], "random_targets")) targets.push_back(vertex(name));
            std::sort(targets.begin(), targets.end());
            return generate_intervention_spec(net, targets, j.value("cut_prob", 0.5), j.value("dirichlet_alpha", 1.0),
                                              rng);
        }
        std::vector<TargetIntervention> entries;
        for (const auto& item : j["interventions"]) {
            const Vertex target = vertex(item.at("target").get<std::string>());
            std::vector<Vertex> retained;
            std::vector<std::size_t> cards;
            for (const auto& name : names_of(item.value("retained_parents", nlohmann::json::array()), "retained_parents")) {
                retained.push_back(vertex(name));
                cards.push_back(net.cardinality(retained.back()));
            }
            std::vector<double> table;
            for (const auto& row : item.at("cpt")) {
                const auto values = row.get<std::vector<double>>();
                table.insert(table.end(), values.begin(), values.end());
            }
            std::shared_ptr<const Cpt> cpt;
            try {
                cpt = std::make_shared<const Cpt>(target, retained, cards, net.cardinality(target), std::move(table));
            } catch (const Error& e) {
                throw ParseError("mechanism for '" + net.names()[target] + "': " + e.what());
            }
            entries.push_back({target, std::move(retained), std::move(cpt)});
        }
        InterventionSpec spec(std::move(entries));
        spec.validate(net.dag(), &net);
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("intervention file does not match the schema: ") + e.what());
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Causal structure learning from mixtures of intervention data", "causalmix"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    // sample
    std::string net_path, out_path, intervene_path;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    int label = -1;
    auto* sample_cmd = app.add_subcommand("sample", "Draw records from a network, optionally under an intervention");
    sample_cmd->add_option("--net", net_path, "Network in BIF format")->required();
    sample_cmd->add_option("--n", n, "Number of records")->required()->check(CLI::PositiveNumber);
    sample_cmd->add_option("--intervene", intervene_path, "Intervention file (JSON)");
    sample_cmd->add_option("--seed", seed, "Random seed")->required();
    sample_cmd->add_option("--label", label, "Write this intervention label in an __intervention column")
        ->check(CLI::NonNegativeNumber);
    sample_cmd->add_option("--out", out_path, "Output CSV (stdout when omitted)");

    // learn-pc, learn-merge, learn-pool
    std::vector<std::string> data_paths;
    double alpha = 0.01;
    std::string statistic = "pearson";
    std::size_t max_cond = PcOptions{}.max_cond;
    auto* pc_cmd = app.add_subcommand("learn-pc", "Learn a pattern from one data set with the PC algorithm");
    pc_cmd->add_option("--data", data_paths, "Data CSV")->required()->expected(1);
    pc_cmd->add_option("--net", net_path, "Network supplying variable states (inferred from the data otherwise)");
    add_test_flags(pc_cmd, alpha, statistic, max_cond);
    pc_cmd->add_option("--out", out_path, "Output report JSON (stdout when omitted)");

    auto* merge_cmd = app.add_subcommand("learn-merge", "Learn one pattern per data set and merge them");
    merge_cmd->add_option("--data", data_paths, "Data CSVs, one per intervention")->required();
    merge_cmd->add_option("--net", net_path, "Network supplying variable states");
    add_test_flags(merge_cmd, alpha, statistic, max_cond);
    merge_cmd->add_option("--out", out_path, "Output report JSON (stdout when omitted)");

    std::size_t resample_k = 100, subset = 0;
    double theta = 20.0;
    auto* pool_cmd = app.add_subcommand("learn-pool", "Pool all data sets, learn, and re-sample the interventions");
    pool_cmd->add_option("--data", data_paths, "Data CSVs, one per intervention")->required();
    pool_cmd->add_option("--net", net_path, "Network supplying variable states");
    add_test_flags(pool_cmd, alpha, statistic, max_cond);
    pool_cmd->add_option("--resample-k", resample_k, "Number of re-sampling runs")->capture_default_str();
    pool_cmd->add_option("--subset", subset, "Data sets pooled per run (default ceil(0.6 m))");
    pool_cmd->add_option("--theta", theta, "Add extra edges whose frequency exceeds this")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    pool_cmd->add_option("--seed", seed, "Random seed for the re-sampling")->required();
    pool_cmd->add_option("--out", out_path, "Output report JSON (stdout when omitted)");

    // score
    std::string learned_path, truth_path;
    auto* score_cmd = app.add_subcommand("score", "Compare a learned pattern with the true network");
    score_cmd->add_option("--learned", learned_path, "Report JSON holding a pattern")->required();
    score_cmd->add_option("--truth", truth_path, "True network in BIF format")->required();
    score_cmd->add_option("--out", out_path, "Output report JSON (stdout when omitted)");

    // study
    std::string config_path, out_dir;
    std::size_t jobs = 0;
    auto* study_cmd = app.add_subcommand("study", "Run a simulation study described by a config file");
    study_cmd->add_option("--config", config_path, "Study config (key = value lines)")->required();
    study_cmd->add_option("--out", out_dir, "Output directory")->required();
    study_cmd->add_option("--jobs", jobs, "Repetitions run in parallel (overrides the config)")
        ->check(CLI::PositiveNumber);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sample_cmd->parsed()) {
            const DiscreteBayesNet net = load_bif(net_path);
            Rng rng = child_rng(seed, 0);
            const DiscreteBayesNet* source = &net;
            std::optional<DiscreteBayesNet> intervened;
            if (!intervene_path.empty()) {
                nlohmann::json j;
                try {
                    j = nlohmann::json::parse(read_text_file(intervene_path));
                } catch (const nlohmann::json::parse_error& e) {
                    throw ParseError(intervene_path + ": malformed JSON: " + e.what());
                }
                Rng spec_rng = child_rng(seed, 1);
                intervened = apply_intervention(net, parse_intervention_json(j, net, spec_rng));
                source = &*intervened;
            }
            emit(out_path, write_samples(sample(*source, n, rng, label), net), out);
        } else if (pc_cmd->parsed()) {
            const Dataset d = load_datasets(data_paths, net_path);
            Report r;
            r.vertices = d.vertices;
            r.pattern = pc_learn(d.tables.front(), test_options(alpha, statistic), PcOptions{max_cond}).pattern;
            r.config_echo = {{"command", "learn-pc"}, {"data", data_paths}, {"alpha", alpha},
                             {"statistic", statistic}, {"max_cond", max_cond}};
            emit(out_path, write_report(r), out);
        } else if (merge_cmd->parsed()) {
            const Dataset d = load_datasets(data_paths, net_path);
            Report r;
            r.vertices = d.vertices;
            r.pattern = merge_learn(d.tables, test_options(alpha, statistic), PcOptions{max_cond}).merged;
            r.config_echo = {{"command", "learn-merge"}, {"data", data_paths}, {"alpha", alpha},
                             {"statistic", statistic}, {"max_cond", max_cond}};
            emit(out_path, write_report(r), out);
        } else if (pool_cmd->parsed()) {
            const Dataset d = load_datasets(data_paths, net_path);
            if (subset > d.tables.size())
                throw UsageError("--subset " + std::to_string(subset) + " exceeds the " +
                                 std::to_string(d.tables.size()) + " data sets given");
            if (resample_k == 0) throw UsageError("--resample-k must be positive");
            const CiTestOptions test = test_options(alpha, statistic);
            const PcOptions pc{max_cond};
            const OrientedPattern meta = pool_learn_meta(d.tables, test, pc);
            ResampleOptions ro;
            ro.k_runs = resample_k;
            ro.subset_size = subset;
            ro.seed = seed;
            Report r;
            r.vertices = d.vertices;
            r.frequencies = resample_frequencies(d.tables, meta.pattern.skeleton(), ro, test, pc);
            r.pattern = augment(meta.pattern, *r.frequencies, theta);
            r.seed = seed;
            r.config_echo = {{"command", "learn-pool"}, {"data", data_paths}, {"alpha", alpha},
                             {"statistic", statistic}, {"max_cond", max_cond}, {"resample_k", resample_k},
                             {"subset", r.frequencies->subset_size}, {"theta", theta}};
            emit(out_path, write_report(r), out);
        } else if (score_cmd->parsed()) {
            Report learned = read_report(read_text_file(learned_path));
            if (!learned.pattern) throw ParseError(learned_path + ": report holds no pattern");
            const DiscreteBayesNet truth = load_bif(truth_path);
            if (learned.vertices != truth.names())
                throw ParseError(learned_path + ": vertices do not match the variables of " + truth_path);
            learned.metrics = score(*learned.pattern, truth.dag());
            learned.frequencies.reset();
            learned.config_echo = {{"command", "score"}, {"learned", learned_path}, {"truth", truth_path}};
            emit(out_path, write_report(learned), out);
        } else if (study_cmd->parsed()) {
            StudyConfig config = load_study_config(config_path);
            if (jobs > 0) config.jobs = jobs;
            const StudyReport report = run_study(config);
            for (const auto& p : write_study_outputs(report, out_dir)) out << p.generic_string() << "\n";
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitOk;
}

}  // namespace causalmix
