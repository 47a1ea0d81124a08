#include "causalmix/cli.hpp"
#include "causalmix/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

using namespace causalmix;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

const std::string kAsia = (fs::path(CAUSALMIX_DATA_DIR) / "asia.bif").string();

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("causalmix_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

}  // namespace

TEST(CliHelp, EverySubcommandDocumentsItsFlags) {
    const std::vector<std::pair<std::string, std::vector<std::string>>> commands{
        {"sample", {"--net", "--n", "--intervene", "--seed", "--label", "--out"}},
        {"learn-pc", {"--data", "--net", "--alpha", "--statistic", "--max-cond", "--out"}},
        {"learn-merge", {"--data", "--net", "--alpha", "--statistic", "--max-cond", "--out"}},
        {"learn-pool", {"--data", "--alpha", "--resample-k", "--subset", "--theta", "--seed", "--out"}},
        {"score", {"--learned", "--truth", "--out"}},
        {"study", {"--config", "--out", "--jobs"}}};
    for (const auto& [name, flags] : commands) {
        const Outcome r = run({name, "--help"});
        EXPECT_EQ(r.code, kExitOk) << name;
        for (const auto& f : flags) EXPECT_NE(r.out.find(f), std::string::npos) << name << " " << f;
    }
    const Outcome top = run({"--help"});
    EXPECT_EQ(top.code, kExitOk);
    for (const auto& [name, flags] : commands) EXPECT_NE(top.out.find(name), std::string::npos);
}

TEST(CliUsage, UsageErrorsExitOne) {
    EXPECT_EQ(run({}).code, kExitUsage);
    EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
    EXPECT_EQ(run({"sample", "--net", kAsia, "--n", "10"}).code, kExitUsage);  // no seed
    EXPECT_EQ(run({"sample", "--net", kAsia, "--n", "10", "--seed", "1", "--colour", "red"}).code, kExitUsage);
    EXPECT_EQ(run({"learn-pc", "--data", "a.csv", "--alpha", "2"}).code, kExitUsage);
    EXPECT_EQ(run({"learn-pool", "--data", "a.csv"}).code, kExitUsage);
    const Outcome r = run({"sample", "--net", kAsia, "--n", "10"});
    EXPECT_NE(r.err.find("--seed"), std::string::npos) << r.err;
}

TEST_F(CliTest, DataErrorsExitTwo) {
    const Outcome missing = run({"sample", "--net", path("nope.bif"), "--n", "10", "--seed", "1"});
    EXPECT_EQ(missing.code, kExitData);
    EXPECT_NE(missing.err.find("nope.bif"), std::string::npos) << missing.err;

    write_text_file(path("bad.bif"), "network n {\n}\nvariable x {\n  type discrete [ 2 ] { a, b }\n}\n");
    const Outcome bad = run({"sample", "--net", path("bad.bif"), "--n", "10", "--seed", "1"});
    EXPECT_EQ(bad.code, kExitData);
    EXPECT_NE(bad.err.find("line 5"), std::string::npos) << bad.err;

    write_text_file(path("d.csv"), "asia,tub\nyes,maybe\n");
    EXPECT_EQ(run({"learn-pc", "--data", path("d.csv"), "--net", kAsia}).code, kExitData);
    write_text_file(path("g.json"), "{ not json");
    EXPECT_EQ(run({"score", "--learned", path("g.json"), "--truth", kAsia}).code, kExitData);
}

TEST_F(CliTest, SampleIsDeterministicGivenSeed) {
    const Outcome a = run({"sample", "--net", kAsia, "--n", "50", "--seed", "7"});
    const Outcome b = run({"sample", "--net", kAsia, "--n", "50", "--seed", "7"});
    const Outcome c = run({"sample", "--net", kAsia, "--n", "50", "--seed", "8"});
    ASSERT_EQ(a.code, kExitOk) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out, c.out);
    const DiscreteBayesNet asia = load_bif(kAsia);
    EXPECT_EQ(read_samples(a.out, asia).rows(), 50u);
}

TEST_F(CliTest, SampleWithInterventionsAndLabel) {
    write_text_file(path("hard.json"), R"({"interventions": [
        {"target": "smoke", "retained_parents": [], "cpt": [[1.0, 0.0]]}]})");
    const Outcome r = run({"sample", "--net", kAsia, "--n", "200", "--seed", "3", "--intervene", path("hard.json"),
                       "--label", "4", "--out", path("d.csv")});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const DiscreteBayesNet asia = load_bif(kAsia);
    const SampleTable t = read_samples(read_text_file(path("d.csv")), asia);
    EXPECT_EQ(t.labels(), std::vector<int>(200, 4));
    const Vertex smoke = asia.dag().index_of("smoke");
    for (std::size_t i = 0; i < t.rows(); ++i) EXPECT_EQ(t.at(i, smoke), 0);

    write_text_file(path("random.json"), R"({"random_targets": ["smoke", "lung"], "cut_prob": 1.0})");
    const Outcome a = run({"sample", "--net", kAsia, "--n", "20", "--seed", "3", "--intervene", path("random.json")});
    const Outcome b = run({"sample", "--net", kAsia, "--n", "20", "--seed", "3", "--intervene", path("random.json")});
    ASSERT_EQ(a.code, kExitOk) << a.err;
    EXPECT_EQ(a.out, b.out);

    write_text_file(path("unknown.json"), R"({"random_targets": ["nosuch"]})");
    EXPECT_EQ(run({"sample", "--net", kAsia, "--n", "5", "--seed", "1", "--intervene", path("unknown.json")}).code,
              kExitData);
}

TEST_F(CliTest, LearnPcOnIndependentPairGivesEmptySkeleton) {
    std::string csv = "x,y\n";
    for (int i = 0; i < 400; ++i) csv += std::string(i % 2 ? "a" : "b") + "," + (i / 2 % 2 ? "c" : "d") + "\n";
    write_text_file(path("ind.csv"), csv);
    const Outcome r = run({"learn-pc", "--data", path("ind.csv")});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["skeleton"], nlohmann::json::array());
    EXPECT_EQ(j["vertices"], nlohmann::json::parse(R"(["x","y"])"));
}

TEST_F(CliTest, LearnAndScoreRoundTrip) {
    ASSERT_EQ(run({"sample", "--net", kAsia, "--n", "3000", "--seed", "11", "--out", path("d.csv")}).code, kExitOk);
    const Outcome learn = run({"learn-pc", "--data", path("d.csv"), "--net", kAsia, "--out", path("g.json")});
    ASSERT_EQ(learn.code, kExitOk) << learn.err;
    const Outcome s = run({"score", "--learned", path("g.json"), "--truth", kAsia});
    ASSERT_EQ(s.code, kExitOk) << s.err;
    const auto m = nlohmann::json::parse(s.out)["metrics"];
    EXPECT_EQ(m["tp"].get<int>() + m["fn"].get<int>(), 8);
}

TEST_F(CliTest, MergeAndPool) {
    std::vector<std::string> files;
    for (int j = 0; j < 4; ++j) {
        write_text_file(path("t" + std::to_string(j) + ".json"),
                        R"({"random_targets": [")" + std::string(j % 2 ? "either" : "bronc") + R"("]})");
        files.push_back(path("d" + std::to_string(j) + ".csv"));
        ASSERT_EQ(run({"sample", "--net", kAsia, "--n", "300", "--seed", std::to_string(20 + j), "--intervene",
                       path("t" + std::to_string(j) + ".json"), "--label", std::to_string(j), "--out", files.back()})
                      .code,
                  kExitOk);
    }
    std::vector<std::string> merge{"learn-merge", "--data"};
    merge.insert(merge.end(), files.begin(), files.end());
    const Outcome m = run(merge);
    ASSERT_EQ(m.code, kExitOk) << m.err;
    EXPECT_TRUE(nlohmann::json::parse(m.out)["skeleton"].is_array());

    std::vector<std::string> pool{"learn-pool", "--data"};
    pool.insert(pool.end(), files.begin(), files.end());
    for (const std::string& extra : {"--seed", "5", "--resample-k", "100", "--theta", "100"}) pool.push_back(extra);
    const Outcome p = run(pool);
    ASSERT_EQ(p.code, kExitOk) << p.err;
    const auto j = nlohmann::json::parse(p.out);
    EXPECT_EQ(j["added_edges"], nlohmann::json::array());
    EXPECT_EQ(j["skeleton"], j["frequencies"]["meta_edges"]);
    EXPECT_EQ(j["frequencies"]["k_runs"], 100);
    EXPECT_EQ(j["frequencies"]["subset_size"], 3);
    EXPECT_EQ(run(pool).out, p.out);
}

TEST_F(CliTest, StudyWritesTablesDeterministically) {
    write_text_file(path("s.cfg"), "mode = experiment3\nnetwork = " + kAsia +
                                       "\nseed = 3\ncases = 50x6\ntargets = uniform 1 2\nrepetitions = 2\n"
                                       "resample_k = 10\nsubset = 4\nthetas = 0, 5, 10\n");
    const Outcome a = run({"study", "--config", path("s.cfg"), "--out", path("a")});
    ASSERT_EQ(a.code, kExitOk) << a.err;
    EXPECT_NE(a.out.find("table3.csv"), std::string::npos);
    const Outcome b = run({"study", "--config", path("s.cfg"), "--out", path("b"), "--jobs", "2"});
    ASSERT_EQ(b.code, kExitOk) << b.err;
    for (const std::string f : {"report.json", "metrics.csv", "repetitions.csv", "table1.csv", "table2.csv",
                                "table3.csv"})
        EXPECT_EQ(read_text_file(path("a/" + f)), read_text_file(path("b/" + f))) << f;
}
