#include <gtest/gtest.h>

#include <sstream>

#include "sucp/report.hpp"
#include "sucp/suites.hpp"

using namespace sucp;

namespace {

ExperimentConfig parse(const std::string& s) { return ExperimentConfig::from_json(json::parse(s)); }

}  // namespace

TEST(Config, DefaultsValidate) {
    ExperimentConfig c = parse("{}");
    EXPECT_EQ(c.n, 2);
    EXPECT_EQ(c.format, "json");
    EXPECT_NO_THROW(c.validate());
}

TEST(Config, ReadsKnownKeys) {
    ExperimentConfig c = parse(R"({"seed": 7, "workers": 3, "suites": ["wolff"], "output": {"dir": "x", "format": "csv"},
                                   "wolff": {"N": [5, 50]}})");
    EXPECT_EQ(c.seed, 7u);
    EXPECT_EQ(c.workers, 3);
    EXPECT_EQ(c.suites, std::vector<std::string>{"wolff"});
    EXPECT_EQ(c.out_dir, "x");
    EXPECT_EQ(c.format, "csv");
    EXPECT_EQ(c.wolff.N, (std::vector<double>{5, 50}));
}

TEST(Config, RejectsUnknownKeys) {
    EXPECT_THROW(parse(R"({"sede": 1})"), ConfigError);
    EXPECT_THROW(parse(R"({"output": {"dir": "x", "fmt": "csv"}})"), ConfigError);
    EXPECT_THROW(parse(R"({"kernels": {"cross_path_sample": 10}})"), ConfigError);
}

TEST(Config, RejectsBadTypesAndValues) {
    EXPECT_THROW(parse(R"({"workers": 2.5})"), ConfigError);
    EXPECT_THROW(parse(R"({"workers": true})"), ConfigError);
    EXPECT_THROW(parse(R"({"workers": -1})"), ConfigError);
    EXPECT_THROW(parse(R"({"seed": "1"})"), ConfigError);
    EXPECT_THROW(parse(R"({"n": 3})"), ConfigError);
    EXPECT_THROW(parse(R"({"output": {"format": "xml"}})"), ConfigError);
    EXPECT_THROW(parse(R"({"suites": ["nope"]})"), ConfigError);
    EXPECT_THROW(parse(R"({"kernels": []})"), ConfigError);
    EXPECT_THROW(parse(R"([])"), ConfigError);
}

TEST(Config, MissingFile) { EXPECT_THROW(ExperimentConfig::from_file("/nonexistent/cfg.json"), ConfigError); }

TEST(Report, CsvQuoting) {
    EXPECT_EQ(csv_field("plain"), "plain");
    EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    EXPECT_EQ(csv_field("two\nlines"), "\"two\nlines\"");
    Table t{"t", {"x", "note"}, {}};
    t.add({1.5, std::string("a,b")});
    t.add({(long long)2, true});
    std::ostringstream os;
    t.write_csv(os);
    EXPECT_EQ(os.str(), "x,note\n1.5,\"a,b\"\n2,true\n");
    EXPECT_THROW(t.add({1.0}), ShapeError);
}

TEST(Report, DoubleFormattingRoundTrips) {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5, 0.0})
        EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(json_number(std::nan("")), json("nan"));
}

TEST(Report, JsonShape) {
    Report r;
    r.suite = "demo";
    r.checks.push_back(check_le("a", 1, 2));
    r.checks.push_back(check_ge("b", 1, 2, "", false));
    r.table("rows", {"k"}).add({(long long)1});
    json j = r.to_json();
    for (const char* k : {"schema_version", "suite", "seed", "pass", "checks", "summary", "tables", "error", "timestamp"})
        EXPECT_TRUE(j.contains(k)) << k;
    EXPECT_TRUE(j["pass"].get<bool>());  // the failing check is soft
    EXPECT_EQ(j["tables"][0]["file"], "demo_rows.csv");
    r.checks.push_back(check_true("c", false));
    EXPECT_FALSE(r.pass());
}

TEST(Suites, SeedDerivation) {
    EXPECT_NE(suite_seed(1, "wolff"), suite_seed(1, "kernels"));
    EXPECT_NE(suite_seed(1, "wolff"), suite_seed(2, "wolff"));
    EXPECT_EQ(suite_seed(1, "wolff"), suite_seed(1, "wolff"));
}

TEST(Suites, GuardedRunMapsErrors) {
    ExperimentConfig c;
    int code = 0;
    Report r = run_guarded("no-such-suite", c, code);
    EXPECT_EQ(code, kExitConfig);
    EXPECT_FALSE(r.error.empty());
    EXPECT_FALSE(r.pass());
}
