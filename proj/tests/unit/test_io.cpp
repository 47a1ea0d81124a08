#include "causalmix/error.hpp"
#include "causalmix/io.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace causalmix;
namespace fs = std::filesystem;

namespace {

const fs::path kCorpus = fs::path(CAUSALMIX_TEST_DATA_DIR) / "bif";

std::vector<fs::path> files_in(const fs::path& dir) {
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".bif") out.push_back(entry.path());
    std::sort(out.begin(), out.end());
    return out;
}

std::string expected_message(const fs::path& file) {
    const std::string text = read_text_file(file);
    const std::string marker = "// expect: ";
    const auto end = text.find('\n');
    return text.starts_with(marker) ? text.substr(marker.size(), end - marker.size()) : std::string{};
}

}  // namespace

TEST(Bif, MinimalNetwork) {
    const DiscreteBayesNet net = load_bif(kCorpus / "good" / "minimal.bif");
    ASSERT_EQ(net.size(), 2u);
    EXPECT_EQ(net.names(), (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(net.states(0), (std::vector<std::string>{"yes", "no"}));
    EXPECT_TRUE(net.dag().has_edge(0, 1));
    EXPECT_DOUBLE_EQ(net.cpt(0).probability(0, 0), 0.3);
    EXPECT_DOUBLE_EQ(net.cpt(1).probability(0, 0), 0.9);
    EXPECT_DOUBLE_EQ(net.cpt(1).probability(1, 1), 0.8);
}

TEST(Bif, TableListsChildStatesSlowest) {
    const DiscreteBayesNet net = load_bif(kCorpus / "good" / "properties_and_comments.bif");
    const Cpt& grass = net.cpt(1);
    const std::vector<std::vector<double>> expected{{0.1, 0.3, 0.6}, {0.7, 0.2, 0.1}};
    for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t s = 0; s < 3; ++s) EXPECT_NEAR(grass.probability(c, s), expected[c][s], 1e-15);
}

TEST(Bif, DefaultRowFillsUncoveredConfigurations) {
    const DiscreteBayesNet net = load_bif(kCorpus / "good" / "default_row.bif");
    const Cpt& z = net.cpt(2);
    EXPECT_EQ(z.config_count(), 6u);
    EXPECT_DOUBLE_EQ(z.probability(0, 0), 0.9);
    for (std::size_t c = 1; c < 6; ++c) EXPECT_DOUBLE_EQ(z.probability(c, 0), 0.5);
}

TEST(Bif, NearlyNormalizedRowsAreRenormalized) {
    const DiscreteBayesNet net = load_bif(kCorpus / "good" / "near_normalized.bif");
    double sum = 0;
    for (double p : net.cpt(0).row(0)) sum += p;
    EXPECT_NEAR(sum, 1.0, 1e-15);
}

TEST(Bif, WellFormedCorpusParses) {
    const auto files = files_in(kCorpus / "good");
    EXPECT_GE(files.size(), 4u);
    for (const auto& f : files) EXPECT_NO_THROW(load_bif(f)) << f;
}

TEST(Bif, MalformedCorpusIsRejectedWithMessages) {
    const auto files = files_in(kCorpus / "bad");
    EXPECT_GE(files.size(), 10u);
    for (const auto& f : files) {
        const std::string expected = expected_message(f);
        ASSERT_FALSE(expected.empty()) << f << " has no expectation line";
        try {
            load_bif(f);
            ADD_FAILURE() << f << " parsed";
        } catch (const GraphError& e) {
            EXPECT_NE(std::string(e.what()).find(expected), std::string::npos) << e.what();
        } catch (const ParseError& e) {
            const std::string what = e.what();
            EXPECT_NE(what.find(expected), std::string::npos) << what;
            EXPECT_NE(what.find(f.filename().string()), std::string::npos) << what;
            EXPECT_NE(what.find("line "), std::string::npos) << what;
        }
    }
}

TEST(Bif, RowSummingToPointNineReportsTheSum) {
    try {
        load_bif(kCorpus / "bad" / "row_sums_to_09.bif");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("0.9"), std::string::npos) << e.what();
    }
}

TEST(Bif, PositionsPointAtTheOffendingToken) {
    try {
        parse_bif("network n {\n}\nvariable x {\n  type discrete [ 2 ] { a, b }\n}\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 5u);
        EXPECT_EQ(e.column(), 1u);
    }
}

TEST(Bif, Alarm) {
    const DiscreteBayesNet alarm = load_bif(fs::path(CAUSALMIX_DATA_DIR) / "alarm.bif");
    EXPECT_EQ(alarm.size(), 37u);
    EXPECT_EQ(alarm.dag().edge_count(), 46u);
}

TEST(Bif, MissingFileNamesThePath) {
    try {
        load_bif("/nonexistent/net.bif");
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("/nonexistent/net.bif"), std::string::npos);
    }
}

TEST(Csv, EmptyTableIsHeaderOnly) {
    const SampleTable t({"a", "b"}, {2, 2}, {{}, {}});
    const std::vector<std::vector<std::string>> states{{"x", "y"}, {"x", "y"}};
    const std::string text = write_samples(t, states);
    EXPECT_EQ(text, "a,b\n");
    EXPECT_EQ(read_samples(text, t.variables(), states), t);
}

TEST(Csv, RandomTablesRoundTrip) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng = child_rng(70, seed);
        const DiscreteBayesNet net = random_net(random_dag(1 + uniform_index(6, rng), 0.4, rng), 2, 4, rng);
        const int label = bernoulli(0.5, rng) ? static_cast<int>(uniform_index(50, rng)) : -1;
        const SampleTable t = sample(net, 100, rng, label);
        EXPECT_EQ(read_samples(write_samples(t, net), net), t) << "seed " << seed;
    }
}

TEST(Csv, ColumnsInAnyOrderAndQuotedNames) {
    const std::vector<std::string> vars{"a", "b c"};
    const std::vector<std::vector<std::string>> states{{"0", "1"}, {"x,y", "z"}};
    const SampleTable t = read_samples("\"b c\",a,__intervention\n\"x,y\",1,3\nz,0,3\n", vars, states);
    EXPECT_EQ(t.rows(), 2u);
    EXPECT_EQ(t.at(0, 0), 1);
    EXPECT_EQ(t.at(0, 1), 0);
    EXPECT_EQ(t.labels(), (std::vector<int>{3, 3}));
    EXPECT_EQ(read_samples(write_samples(t, states), vars, states), t);
}

TEST(Csv, UnknownStateNamesRowAndColumn) {
    const std::vector<std::string> vars{"a", "b"};
    const std::vector<std::vector<std::string>> states{{"lo", "hi"}, {"lo", "hi"}};
    try {
        read_samples("a,b\nlo,hi\nhi,mid\n", vars, states);
        FAIL();
    } catch (const ParseError& e) {
        const std::string what = e.what();
        EXPECT_NE(what.find("row 3"), std::string::npos) << what;
        EXPECT_NE(what.find("column 'b'"), std::string::npos) << what;
        EXPECT_NE(what.find("'mid'"), std::string::npos) << what;
    }
}

TEST(Csv, ColumnMismatchesAreErrors) {
    const std::vector<std::string> vars{"a", "b"};
    const std::vector<std::vector<std::string>> states{{"0", "1"}, {"0", "1"}};
    EXPECT_THROW(read_samples("a,c\n0,1\n", vars, states), ParseError);
    EXPECT_THROW(read_samples("a\n0\n", vars, states), ParseError);
    EXPECT_THROW(read_samples("a,a,b\n0,0,1\n", vars, states), ParseError);
    EXPECT_THROW(read_samples("a,b\n0\n", vars, states), ParseError);
    EXPECT_THROW(read_samples("", vars, states), ParseError);
    EXPECT_THROW(read_samples("a,b,__intervention\n0,1,x\n", vars, states), ParseError);
}

TEST(Csv, SchemaInferenceSortsValues) {
    const InferredSchema s = infer_schema({"x,y\nb,1\na,2\n", "y,x\n3,c\n"});
    EXPECT_EQ(s.variables, (std::vector<std::string>{"x", "y"}));
    EXPECT_EQ(s.states[0], (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_EQ(s.states[1], (std::vector<std::string>{"1", "2", "3"}));
    EXPECT_THROW(infer_schema({"x,y\n1,2\n", "x,z\n1,2\n"}), ParseError);
}

TEST(Report, EmptyPatternHasEmptyArrays) {
    Report r;
    r.vertices = {"a", "b"};
    r.pattern = PatternGraph(r.vertices, {}, {});
    const auto j = nlohmann::json::parse(write_report(r));
    EXPECT_EQ(j["skeleton"], nlohmann::json::array());
    EXPECT_EQ(j["v_structures"], nlohmann::json::array());
    EXPECT_TRUE(j["metrics"].is_null());
    EXPECT_EQ(j["schema_version"], kReportSchemaVersion);
}

TEST(Report, OneVStructureIsOneCanonicalTriple) {
    Report r;
    r.vertices = {"a", "b", "c"};
    r.pattern = PatternGraph(r.vertices, Skeleton{{0, 1}, {1, 2}}, {VStructure::of(2, 1, 0)});
    const auto j = nlohmann::json::parse(write_report(r));
    EXPECT_EQ(j["v_structures"], nlohmann::json::parse(R"([["a","b","c"]])"));
    EXPECT_EQ(j["skeleton"], nlohmann::json::parse(R"([["a","b"],["b","c"]])"));
}

TEST(Report, FullReportRoundTrips) {
    Rng rng = child_rng(71, 0);
    const Dag g = random_dag(6, 0.5, rng);
    Report r;
    r.vertices = g.names();
    Skeleton added;
    added.insert(*g.skeleton().begin());
    const PatternGraph base = pattern_of(g);
    r.pattern = PatternGraph(g.names(), base.skeleton(), base.v_structures(), added);
    EdgeFrequencyReport f;
    f.k_runs = 4;
    f.subset_size = 2;
    f.drawn_subsets = {{0, 1}, {2, 0}, {1, 2}, {0, 2}};
    f.meta_edges = {{0, 1}, {2, 3}};
    f.union_edges = {{0, 1}, {1, 4}};
    f.extra_edges = {{1, 4}};
    f.freq = {{{0, 1}, 4}, {{2, 3}, 0}, {{1, 4}, 2}};
    r.frequencies = f;
    r.metrics = score(*r.pattern, g);
    r.config_echo = {{"alpha", 0.01}, {"data", {"a.csv", "b.csv"}}};
    r.seed = 1234567890123ULL;
    const std::string text = write_report(r);
    const Report back = read_report(text);
    EXPECT_EQ(back.vertices, r.vertices);
    EXPECT_EQ(back.pattern, r.pattern);
    ASSERT_TRUE(back.frequencies.has_value());
    EXPECT_EQ(back.frequencies->k_runs, 4u);
    EXPECT_EQ(back.frequencies->drawn_subsets, f.drawn_subsets);
    EXPECT_EQ(back.frequencies->freq, f.freq);
    EXPECT_EQ(back.frequencies->extra_edges, f.extra_edges);
    EXPECT_EQ(back.frequencies->union_edges, f.union_edges);
    EXPECT_EQ(back.metrics, r.metrics);
    EXPECT_EQ(back.config_echo, r.config_echo);
    EXPECT_EQ(back.seed, r.seed);
    EXPECT_EQ(write_report(back), text);
}

TEST(Report, KeysAreSorted) {
    Report r;
    r.vertices = {"a"};
    const auto j = nlohmann::json::parse(write_report(r));
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
    const std::string text = write_report(r);
    EXPECT_LT(text.find("\"config_echo\""), text.find("\"vertices\""));
}

TEST(Report, MalformedInputIsRejected) {
    EXPECT_THROW(read_report("{"), ParseError);
    EXPECT_THROW(read_report("{}"), ParseError);
    EXPECT_THROW(read_report(R"({"schema_version": 99})"), ParseError);
    EXPECT_THROW(read_report(R"({"schema_version": 1, "vertices": ["a"], "skeleton": [["a", "zz"]],
                                 "v_structures": []})"),
                 ParseError);
}
