#include "causalmix/experiment.hpp"

#include "causalmix/error.hpp"
#include "causalmix/io.hpp"
#include "causalmix/merge.hpp"
#include "causalmix/parallel.hpp"
#include "causalmix/pc.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace causalmix {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::uint64_t parse_unsigned(const std::string& text, std::size_t line, const std::string& key) {
    std::uint64_t value = 0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc() || ptr != end)
        throw ParseError("'" + key + "' expects a non-negative integer, got '" + text + "'", line, 1);
    return value;
}

double parse_double(const std::string& text, std::size_t line, const std::string& key) {
    double value = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc() || ptr != end)
        throw ParseError("'" + key + "' expects a number, got '" + text + "'", line, 1);
    return value;
}

std::string fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

MethodSummary summarize(const std::vector<const Metrics*>& ms) {
    auto collect = [&](auto field) {
        std::vector<double> v;
        v.reserve(ms.size());
        for (const Metrics* m : ms) v.push_back(static_cast<double>(field(*m)));
        return mean_se(v);
    };
    MethodSummary s;
    s.tpr = collect([](const Metrics& m) { return m.tpr; });
    s.tdr = collect([](const Metrics& m) { return m.tdr; });
    s.d_tpr = collect([](const Metrics& m) { return m.d_tpr; });
    s.d_tdr = collect([](const Metrics& m) { return m.d_tdr; });
    s.tp = collect([](const Metrics& m) { return m.tp; });
    s.fp = collect([](const Metrics& m) { return m.fp; });
    s.fn = collect([](const Metrics& m) { return m.fn; });
    s.tp1 = collect([](const Metrics& m) { return m.tp1; });
    s.fp1 = collect([](const Metrics& m) { return m.fp1; });
    s.fn1 = collect([](const Metrics& m) { return m.fn1; });
    return s;
}

nlohmann::json mean_se_json(const MeanSe& v) { return {{"mean", v.mean}, {"se", v.se}}; }

nlohmann::json method_json(const MethodSummary& s) {
    return {{"tpr", mean_se_json(s.tpr)}, {"tdr", mean_se_json(s.tdr)}, {"d_tpr", mean_se_json(s.d_tpr)},
            {"d_tdr", mean_se_json(s.d_tdr)}, {"tp", mean_se_json(s.tp)},   {"fp", mean_se_json(s.fp)},
            {"fn", mean_se_json(s.fn)},       {"tp1", mean_se_json(s.tp1)}, {"fp1", mean_se_json(s.fp1)},
            {"fn1", mean_se_json(s.fn1)}};
}

nlohmann::json rank_rows_json(const std::vector<RankedEdge>& rows, const std::vector<std::string>& v) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows)
        out.push_back({{"edge", {v.at(r.edge.a), v.at(r.edge.b)}}, {"frequency", r.frequency}, {"true_edge", r.true_edge}});
    return out;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    return out + "\"";
}

}  // namespace

std::string to_string(StudyMode mode) {
    switch (mode) {
        case StudyMode::experiment1: return "experiment1";
        case StudyMode::experiment2: return "experiment2";
        case StudyMode::experiment3: return "experiment3";
        case StudyMode::observational: return "observational";
    }
    return "unknown";
}

StudyMode parse_study_mode(std::string_view text) {
    for (StudyMode m : {StudyMode::experiment1, StudyMode::experiment2, StudyMode::experiment3, StudyMode::observational})
        if (to_string(m) == text) return m;
    throw ParseError("unknown study mode '" + std::string(text) +
                     "' (expected experiment1, experiment2, experiment3 or observational)");
}

std::size_t TargetRule::draw(Rng& rng) const {
    if (kind == Kind::constant) return low;
    return low + uniform_index(high - low + 1, rng);
}

std::string TargetRule::label() const {
    if (kind == Kind::constant) return "constant " + std::to_string(low);
    return "uniform " + std::to_string(low) + "-" + std::to_string(high);
}

StudyConfig StudyConfig::defaults(StudyMode mode) {
    StudyConfig c;
    c.mode = mode;
    switch (mode) {
        case StudyMode::experiment1:
            c.cases = {{2500, 2}, {500, 10}, {200, 25}, {100, 50}};
            c.target_rules = {TargetRule::uniform(1, 5)};
            break;
        case StudyMode::experiment2:
            c.cases = {{100, 50}};
            c.target_rules = {TargetRule::constant(2), TargetRule::constant(5), TargetRule::constant(10),
                              TargetRule::constant(20)};
            break;
        case StudyMode::experiment3:
            c.cases = {{100, 50}};
            c.target_rules = {TargetRule::uniform(1, 5)};
            c.subset_size = 30;
            break;
        case StudyMode::observational:
            c.cases = {{5000, 1}};
            c.target_rules = {TargetRule::constant(0)};
            break;
    }
    return c;
}

void StudyConfig::validate() const {
    auto fail = [](const std::string& what) { throw ModelError("study config: " + what); };
    if (cases.empty()) fail("no cases");
    for (const auto& c : cases)
        if (c.n == 0 || c.m == 0) fail("case sizes must be positive");
    if (target_rules.empty()) fail("no target rule");
    for (const auto& r : target_rules)
        if (r.kind == TargetRule::Kind::uniform && (r.low > r.high || r.low == 0))
            fail("uniform target range must satisfy 1 <= low <= high");
    if (!(cut_prob >= 0.0 && cut_prob <= 1.0)) fail("cut_prob must lie in [0, 1]");
    if (!(dirichlet_alpha > 0.0)) fail("dirichlet_alpha must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha must lie in (0, 1)");
    if (repetitions == 0) fail("repetitions must be positive");
    if (mode == StudyMode::experiment3) {
        if (resample_k == 0) fail("resample_k must be positive");
        if (thetas.empty()) fail("thetas must not be empty");
        for (const auto& c : cases)
            if (subset_size > c.m) fail("subset is larger than m = " + std::to_string(c.m));
        for (double t : thetas)
            if (!(t >= 0.0) || t > static_cast<double>(resample_k)) fail("every theta must lie in [0, resample_k]");
    }
    if (jobs == 0) fail("jobs must be positive");
}

nlohmann::json StudyConfig::to_json() const {
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& c : cases) cs.push_back({{"n", c.n}, {"m", c.m}});
    nlohmann::json rules = nlohmann::json::array();
    for (const auto& r : target_rules) rules.push_back(r.label());
    // jobs is left out so that reports do not depend on the degree of parallelism.
    return {{"network", network.generic_string()},
            {"mode", to_string(mode)},
            {"cases", cs},
            {"targets", rules},
            {"cut_prob", cut_prob},
            {"dirichlet_alpha", dirichlet_alpha},
            {"alpha", alpha},
            {"statistic", statistic == CiStatistic::pearson ? "pearson" : "g2"},
            {"max_cond", max_cond},
            {"repetitions", repetitions},
            {"resample_k", resample_k},
            {"subset", subset_size},
            {"thetas", thetas},
            {"rank_top", rank_top},
            {"multinomial_sizes", multinomial_sizes},
            {"seed", seed}};
}

StudyConfig parse_study_config(std::string_view text, const std::filesystem::path& base_dir) {
    std::vector<std::pair<std::string, std::pair<std::string, std::size_t>>> entries;
    std::optional<StudyMode> mode;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no, 1);
        std::string key = trim(std::string_view(body).substr(0, eq));
        std::string value = trim(std::string_view(body).substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        for (const auto& e : entries)
            if (e.first == key) throw ParseError("duplicate key '" + key + "'", line_no, 1);
        if (key == "mode") {
            try {
                mode = parse_study_mode(value);
            } catch (const ParseError& e) {
                throw ParseError(e.what(), line_no, eq + 2);
            }
        }
        entries.emplace_back(std::move(key), std::make_pair(std::move(value), line_no));
    }
    if (!mode) throw ParseError("study config has no 'mode'");
    StudyConfig c = StudyConfig::defaults(*mode);
    bool seeded = false, networked = false;
    for (const auto& [key, vl] : entries) {
        const auto& [value, ln] = vl;
        if (key == "mode") {
            continue;
        } else if (key == "network") {
            std::filesystem::path p(value);
            c.network = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
            networked = true;
        } else if (key == "cases") {
            c.cases.clear();
            for (const auto& item : split(value, ',')) {
                const auto x = item.find('x');
                if (x == std::string::npos) throw ParseError("case '" + item + "' is not of the form NxM", ln, 1);
                c.cases.push_back({parse_unsigned(trim(item.substr(0, x)), ln, key),
                                   parse_unsigned(trim(item.substr(x + 1)), ln, key)});
            }
        } else if (key == "targets") {
            c.target_rules.clear();
            std::istringstream words(value);
            std::string kind, rest;
            words >> kind;
            std::getline(words, rest);
            if (kind == "uniform") {
                std::istringstream nums(rest);
                std::string lo, hi;
                nums >> lo >> hi;
                c.target_rules.push_back(TargetRule::uniform(parse_unsigned(lo, ln, key), parse_unsigned(hi, ln, key)));
            } else if (kind == "constant") {
                for (const auto& item : split(rest, ','))
                    c.target_rules.push_back(TargetRule::constant(parse_unsigned(item, ln, key)));
            } else {
                throw ParseError("targets must be 'uniform LOW HIGH' or 'constant C[,C...]'", ln, 1);
            }
        } else if (key == "cut_prob") {
            c.cut_prob = parse_double(value, ln, key);
        } else if (key == "dirichlet_alpha") {
            c.dirichlet_alpha = parse_double(value, ln, key);
        } else if (key == "alpha") {
            c.alpha = parse_double(value, ln, key);
        } else if (key == "statistic") {
            if (value == "pearson")
                c.statistic = CiStatistic::pearson;
            else if (value == "g2")
                c.statistic = CiStatistic::g_squared;
            else
                throw ParseError("statistic must be 'pearson' or 'g2'", ln, 1);
        } else if (key == "max_cond") {
            c.max_cond = parse_unsigned(value, ln, key);
        } else if (key == "repetitions") {
            c.repetitions = parse_unsigned(value, ln, key);
        } else if (key == "resample_k") {
            c.resample_k = parse_unsigned(value, ln, key);
        } else if (key == "subset") {
            c.subset_size = parse_unsigned(value, ln, key);
        } else if (key == "thetas") {
            c.thetas.clear();
            for (const auto& item : split(value, ',')) c.thetas.push_back(parse_double(item, ln, key));
        } else if (key == "rank_top") {
            c.rank_top = parse_unsigned(value, ln, key);
        } else if (key == "multinomial_sizes") {
            if (value != "true" && value != "false") throw ParseError("multinomial_sizes must be true or false", ln, 1);
            c.multinomial_sizes = value == "true";
        } else if (key == "seed") {
            c.seed = parse_unsigned(value, ln, key);
            seeded = true;
        } else if (key == "jobs") {
            c.jobs = parse_unsigned(value, ln, key);
        } else {
            throw ParseError("unknown key '" + key + "'", ln, 1);
        }
    }
    if (!networked) throw ParseError("study config has no 'network'");
    if (!seeded) throw ParseError("study config has no 'seed'");
    try {
        c.validate();
    } catch (const ModelError& e) {
        throw ParseError(e.what());
    }
    return c;
}

StudyConfig load_study_config(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    try {
        return parse_study_config(text, path.parent_path());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

Trial generate_trial(const DiscreteBayesNet& base, std::size_t n, std::size_t m, const TargetRule& rule,
                     double cut_prob, double dirichlet_alpha, Rng& rng, bool multinomial_sizes) {
    const std::size_t vertices = base.dag().size();
    if (rule.high > vertices)
        throw ModelError("target rule asks for up to " + std::to_string(rule.high) + " targets but the network has " +
                         std::to_string(vertices) + " vertices");
    std::vector<std::size_t> sizes(m, n);
    if (multinomial_sizes) {
        std::fill(sizes.begin(), sizes.end(), 0);
        for (std::size_t r = 0; r < n * m; ++r) ++sizes[uniform_index(m, rng)];
    }
    Trial trial;
    trial.specs.reserve(m);
    trial.datasets.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t count = rule.draw(rng);
        VertexSet targets = sample_without_replacement(vertices, count, rng);
        std::sort(targets.begin(), targets.end());
        trial.specs.push_back(generate_intervention_spec(base, targets, cut_prob, dirichlet_alpha, rng));
        const DiscreteBayesNet intervened = apply_intervention(base, trial.specs.back());
        trial.datasets.push_back(sample(intervened, sizes[j], rng, static_cast<int>(j)));
    }
    return trial;
}

RankTable frequency_rank_table(const EdgeFrequencyReport& report, const Dag& truth, std::size_t top) {
    auto row = [&](const UndirectedEdge& e) {
        return RankedEdge{e, report.frequency(e), truth.adjacent(e.a, e.b)};
    };
    RankTable table;
    for (const auto& e : report.extra_edges) table.descending.push_back(row(e));
    for (const auto& e : report.meta_edges) table.ascending.push_back(row(e));
    std::stable_sort(table.descending.begin(), table.descending.end(),
                     [](const RankedEdge& x, const RankedEdge& y) { return x.frequency > y.frequency; });
    std::stable_sort(table.ascending.begin(), table.ascending.end(),
                     [](const RankedEdge& x, const RankedEdge& y) { return x.frequency < y.frequency; });
    if (table.descending.size() > top) table.descending.resize(top);
    if (table.ascending.size() > top) table.ascending.resize(top);
    return table;
}

MeanSe mean_se(const std::vector<double>& values) {
    MeanSe out;
    if (values.empty()) return out;
    const double n = static_cast<double>(values.size());
    for (double v : values) out.mean += v;
    out.mean /= n;
    if (values.size() < 2) return out;
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    return out;
}

StudyReport run_study(const StudyConfig& config, const DiscreteBayesNet& net) {
    config.validate();
    StudyReport report;
    report.config = config;
    report.vertices = net.names();

    const CiTestOptions test{.alpha = config.alpha, .statistic = config.statistic};
    const PcOptions pc{.max_cond = config.max_cond};
    const bool observational = config.mode == StudyMode::observational;
    const bool resampling = config.mode == StudyMode::experiment3;

    struct Unit {
        std::size_t condition;
        std::size_t repetition;
    };
    std::vector<Unit> units;
    for (const auto& c : config.cases) {
        for (const auto& r : config.target_rules) {
            ConditionReport cr;
            cr.study_case = c;
            cr.rule = r;
            cr.seed = child_seed(config.seed, report.conditions.size());
            cr.repetitions.resize(config.repetitions);
            for (std::size_t rep = 0; rep < config.repetitions; ++rep) units.push_back({report.conditions.size(), rep});
            report.conditions.push_back(std::move(cr));
        }
    }
    std::vector<std::optional<EdgeFrequencyReport>> first_frequencies(report.conditions.size());

    parallel_for(units.size(), config.jobs, [&](std::size_t u) {
        ConditionReport& cond = report.conditions[units[u].condition];
        const std::size_t rep = units[u].repetition;
        RepetitionResult& out = cond.repetitions[rep];
        out.seed = child_seed(cond.seed, rep);
        Rng rng(out.seed);
        const Trial trial = generate_trial(net, cond.study_case.n, cond.study_case.m, cond.rule, config.cut_prob,
                                           config.dirichlet_alpha, rng, config.multinomial_sizes);
        if (observational) {
            out.methods["pc"] = score(pool_learn_meta(trial.datasets, test, pc).pattern, net.dag());
            return;
        }
        out.methods["merge"] = score(merge_learn(trial.datasets, test, pc).merged, net.dag());
        const OrientedPattern meta = pool_learn_meta(trial.datasets, test, pc);
        out.methods["pool"] = score(meta.pattern, net.dag());
        if (!resampling) return;

        ResampleOptions ro;
        ro.k_runs = config.resample_k;
        ro.subset_size = config.subset_size;
        ro.seed = child_seed(out.seed, 1);
        EdgeFrequencyReport freq = resample_frequencies(trial.datasets, meta.pattern.skeleton(), ro, test, pc);
        for (double theta : config.thetas) out.theta_metrics.push_back(score(augment(meta.pattern, freq, theta), net.dag()));
        out.ranks = frequency_rank_table(freq, net.dag(), config.rank_top);
        out.extra_edges = freq.extra_edges.size();
        if (rep == 0) first_frequencies[units[u].condition] = std::move(freq);
    });

    for (std::size_t ci = 0; ci < report.conditions.size(); ++ci) {
        ConditionReport& cond = report.conditions[ci];
        cond.first_frequencies = std::move(first_frequencies[ci]);
        std::map<std::string, std::vector<const Metrics*>> by_method;
        for (const auto& r : cond.repetitions)
            for (const auto& [name, m] : r.methods) by_method[name].push_back(&m);
        for (const auto& [name, ms] : by_method) cond.methods[name] = summarize(ms);
        if (!resampling) continue;

        for (std::size_t t = 0; t < config.thetas.size(); ++t) {
            std::vector<double> fn, fp;
            for (const auto& r : cond.repetitions) {
                fn.push_back(static_cast<double>(r.theta_metrics[t].fn));
                fp.push_back(static_cast<double>(r.theta_metrics[t].fp));
            }
            ThetaRow row{config.thetas[t], mean_se(fn), mean_se(fp), 0.0};
            row.sum = row.fn.mean + row.fp.mean;
            cond.thetas.push_back(row);
        }
        for (std::size_t k = 0; k < config.rank_top; ++k) {
            RankSummary s;
            s.rank = k + 1;
            for (const auto& r : cond.repetitions) {
                if (k < r.ranks->descending.size()) {
                    ++s.descending_present;
                    s.descending_true += r.ranks->descending[k].true_edge;
                }
                if (k < r.ranks->ascending.size()) {
                    ++s.ascending_present;
                    s.ascending_true += r.ranks->ascending[k].true_edge;
                }
            }
            cond.ranks.push_back(s);
        }
    }
    return report;
}

StudyReport run_study(const StudyConfig& config) {
    const DiscreteBayesNet net = load_bif(config.network);
    return run_study(config, net);
}

nlohmann::json study_report_to_json(const StudyReport& report) {
    const auto& v = report.vertices;
    nlohmann::json conditions = nlohmann::json::array();
    for (const auto& c : report.conditions) {
        nlohmann::json reps = nlohmann::json::array();
        for (const auto& r : c.repetitions) {
            nlohmann::json methods = nlohmann::json::object();
            for (const auto& [name, m] : r.methods) methods[name] = metrics_to_json(m);
            nlohmann::json thetas = nlohmann::json::array();
            for (const auto& m : r.theta_metrics) thetas.push_back(metrics_to_json(m));
            nlohmann::json ranks;
            if (r.ranks)
                ranks = {{"descending", rank_rows_json(r.ranks->descending, v)},
                         {"ascending", rank_rows_json(r.ranks->ascending, v)}};
            reps.push_back({{"seed", r.seed}, {"methods", methods}, {"theta_metrics", thetas}, {"ranks", ranks},
                            {"extra_edges", r.extra_edges}});
        }
        nlohmann::json methods = nlohmann::json::object();
        for (const auto& [name, s] : c.methods) methods[name] = method_json(s);
        nlohmann::json thetas = nlohmann::json::array();
        for (const auto& t : c.thetas)
            thetas.push_back({{"theta", t.theta}, {"fn", mean_se_json(t.fn)}, {"fp", mean_se_json(t.fp)}, {"sum", t.sum}});
        nlohmann::json ranks = nlohmann::json::array();
        for (const auto& s : c.ranks)
            ranks.push_back({{"rank", s.rank},
                             {"descending_present", s.descending_present},
                             {"descending_true", s.descending_true},
                             {"ascending_present", s.ascending_present},
                             {"ascending_true", s.ascending_true}});
        conditions.push_back({{"n", c.study_case.n},
                              {"m", c.study_case.m},
                              {"targets", c.rule.label()},
                              {"seed", c.seed},
                              {"methods", methods},
                              {"thetas", thetas},
                              {"ranks", ranks},
                              {"first_frequencies", c.first_frequencies ? frequencies_to_json(*c.first_frequencies, v)
                                                                        : nlohmann::json()},
                              {"repetitions", reps}});
    }
    return {{"schema_version", kReportSchemaVersion},
            {"vertices", v},
            {"config_echo", report.config.to_json()},
            {"seed", report.config.seed},
            {"conditions", conditions}};
}

std::vector<std::filesystem::path> write_study_outputs(const StudyReport& report, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
    std::vector<std::filesystem::path> written;
    auto emit = [&](const std::string& name, const std::string& text) {
        const auto path = dir / name;
        write_text_file(path, text);
        written.push_back(path);
    };
    const auto& config = report.config;
    emit("report.json", study_report_to_json(report).dump(2) + "\n");

    static const char* kRates[] = {"tpr", "tdr", "d_tpr", "d_tdr", "tp", "fp", "fn", "tp1", "fp1", "fn1"};
    auto fields = [](const MethodSummary& s) {
        return std::vector<const MeanSe*>{&s.tpr, &s.tdr, &s.d_tpr, &s.d_tdr, &s.tp,
                                          &s.fp,  &s.fn,  &s.tp1,   &s.fp1,   &s.fn1};
    };

    std::string metrics = "n,m,targets,method,metric,mean,se\n";
    for (const auto& c : report.conditions)
        for (const auto& [name, s] : c.methods) {
            const auto f = fields(s);
            for (std::size_t i = 0; i < f.size(); ++i)
                metrics += std::to_string(c.study_case.n) + "," + std::to_string(c.study_case.m) + "," +
                           csv_quote(c.rule.label()) + "," + name + "," + kRates[i] + "," + fixed(f[i]->mean) + "," +
                           fixed(f[i]->se) + "\n";
        }
    emit("metrics.csv", metrics);

    std::string reps = "n,m,targets,repetition,seed,method,tp,fp,fn,tp1,fp1,fn1,tpr,tdr,d_tpr,d_tdr\n";
    for (const auto& c : report.conditions)
        for (std::size_t r = 0; r < c.repetitions.size(); ++r)
            for (const auto& [name, m] : c.repetitions[r].methods)
                reps += std::to_string(c.study_case.n) + "," + std::to_string(c.study_case.m) + "," +
                        csv_quote(c.rule.label()) + "," + std::to_string(r) + "," +
                        std::to_string(c.repetitions[r].seed) + "," + name + "," + std::to_string(m.tp) + "," +
                        std::to_string(m.fp) + "," + std::to_string(m.fn) + "," + std::to_string(m.tp1) + "," +
                        std::to_string(m.fp1) + "," + std::to_string(m.fn1) + "," + fixed(m.tpr) + "," +
                        fixed(m.tdr) + "," + fixed(m.d_tpr) + "," + fixed(m.d_tdr) + "\n";
    emit("repetitions.csv", reps);

    // Wide, plot-ready tables: one row per condition and method, mean and SE of each rate.
    auto wide = [&](bool by_rule) {
        std::string out = by_rule ? "targets,method" : "n,m,method";
        for (const char* r : {"tpr", "tdr", "d_tpr", "d_tdr"}) out += std::string(",") + r + "_mean," + r + "_se";
        out += "\n";
        for (const auto& c : report.conditions)
            for (const auto& [name, s] : c.methods) {
                out += by_rule ? csv_quote(c.rule.label()) + "," + name
                               : std::to_string(c.study_case.n) + "," + std::to_string(c.study_case.m) + "," + name;
                for (const MeanSe* v : {&s.tpr, &s.tdr, &s.d_tpr, &s.d_tdr})
                    out += "," + fixed(v->mean) + "," + fixed(v->se);
                out += "\n";
            }
        return out;
    };

    switch (config.mode) {
        case StudyMode::experiment1:
            emit("figure1.csv", wide(false));
            break;
        case StudyMode::experiment2:
            emit("figure2.csv", wide(true));
            break;
        case StudyMode::observational: {
            std::string out = "n,fn_mean,fn_se,fp_mean,fp_se\n";
            for (const auto& c : report.conditions) {
                const auto& s = c.methods.at("pc");
                out += std::to_string(c.study_case.n) + "," + fixed(s.fn.mean) + "," + fixed(s.fn.se) + "," +
                       fixed(s.fp.mean) + "," + fixed(s.fp.se) + "\n";
            }
            emit("observational.csv", out);
            break;
        }
        case StudyMode::experiment3: {
            const auto& v = report.vertices;
            std::string t1 = "n,m,targets,side,rank,edge,frequency,true_edge\n";
            std::string t2 = "n,m,targets,rank,descending_present,descending_true,descending_true_pct,"
                             "ascending_present,ascending_true,ascending_true_pct\n";
            std::string t3 = "n,m,targets,theta,fn_mean,fn_se,fp_mean,fp_se,sum\n";
            for (const auto& c : report.conditions) {
                const std::string prefix = std::to_string(c.study_case.n) + "," + std::to_string(c.study_case.m) +
                                           "," + csv_quote(c.rule.label()) + ",";
                if (!c.repetitions.empty() && c.repetitions.front().ranks) {
                    const auto& rt = *c.repetitions.front().ranks;
                    auto side = [&](const char* name, const std::vector<RankedEdge>& rows) {
                        for (std::size_t k = 0; k < rows.size(); ++k)
                            t1 += prefix + name + "," + std::to_string(k + 1) + "," + v[rows[k].edge.a] + "-" +
                                  v[rows[k].edge.b] + "," + std::to_string(rows[k].frequency) + "," +
                                  (rows[k].true_edge ? "True" : "False") + "\n";
                    };
                    side("descending", rt.descending);
                    side("ascending", rt.ascending);
                }
                auto pct = [](std::size_t hit, std::size_t present) {
                    return present == 0 ? std::string("") : fixed(100.0 * hit / present, 2);
                };
                for (const auto& s : c.ranks)
                    t2 += prefix + std::to_string(s.rank) + "," + std::to_string(s.descending_present) + "," +
                          std::to_string(s.descending_true) + "," + pct(s.descending_true, s.descending_present) +
                          "," + std::to_string(s.ascending_present) + "," + std::to_string(s.ascending_true) + "," +
                          pct(s.ascending_true, s.ascending_present) + "\n";
                for (const auto& t : c.thetas)
                    t3 += prefix + fixed(t.theta, 2) + "," + fixed(t.fn.mean) + "," + fixed(t.fn.se) + "," +
                          fixed(t.fp.mean) + "," + fixed(t.fp.se) + "," + fixed(t.sum) + "\n";
            }
            emit("table1.csv", t1);
            emit("table2.csv", t2);
            emit("table3.csv", t3);
            break;
        }
    }
    return written;
}

}  // namespace causalmix
