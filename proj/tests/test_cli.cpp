#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include <gtest/gtest.h>
#include <json.hpp>

#include "predbound/cli.hpp"
#include "predbound/processes.hpp"

using namespace predbound;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("predbound_") + info->test_suite_name() + "_" + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int run(std::vector<std::string> args) {
        out_.str("");
        err_.str("");
        return cli::run(args, out_, err_);
    }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    static std::string slurp(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return {std::istreambuf_iterator<char>(in), {}};
    }

    static json read_json(const fs::path& p) { return json::parse(slurp(p)); }

    // The shared AR(1)-uniform fixture used by several commands.
    std::string make_ar1_uniform(const std::string& name = "x.csv") {
        const auto csv = path(name);
        EXPECT_EQ(run({"generate", "--model", "ar1", "--a", "0.9", "--innov", "uniform", "--c", "0.5", "--n", "100000",
                       "--seed", "42", "--out", csv}),
                  cli::kOk)
            << err_.str();
        return csv;
    }

    fs::path dir_;
    std::ostringstream out_;
    std::ostringstream err_;
};

}  // namespace

// --- generate -------------------------------------------------------------------

TEST_F(CliTest, GenerateIsByteIdenticalAcrossRuns) {
    const auto a = make_ar1_uniform("a.csv");
    const auto b = make_ar1_uniform("b.csv");
    const std::string ca = slurp(a);
    EXPECT_EQ(ca, slurp(b));
    EXPECT_EQ(ca.substr(0, 2), "x\n");
    EXPECT_EQ(std::count(ca.begin(), ca.end(), '\n'), 100001);

    const json meta = read_json(cli::sidecar_path(a));
    EXPECT_EQ(meta.at("n"), 100000);
    EXPECT_EQ(meta.at("seed"), 42);
    EXPECT_EQ(meta.at("rng"), std::string(kRngName));
    EXPECT_EQ(meta.at("model").at("innovation").at("law"), "uniform");
    EXPECT_EQ(meta.at("model").at("ar_coeffs"), json::array({0.9}));
}

TEST_F(CliTest, GenerateRoundTripsToLastUlp) {
    const auto csv = make_ar1_uniform();
    ProcessModel model{ProcessKind::ar, {0.9}, UniformLaw{0.5}, std::nullopt};
    const Series expected = generate(model, 100000, 42);
    const auto loaded = cli::load_series(csv);
    ASSERT_EQ(loaded.series.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) ASSERT_EQ(loaded.series[i], expected[i]) << "row " << i;
    ASSERT_TRUE(loaded.model.has_value());
    EXPECT_EQ(loaded.seed.value(), 42u);
}

TEST_F(CliTest, GenerateMissingParameterNamesField) {
    EXPECT_EQ(run({"generate", "--model", "ar1", "--a", "0.9", "--innov", "uniform", "--n", "100", "--seed", "1",
                   "--out", path("x.csv")}),
              cli::kInvalidConfig);
    EXPECT_NE(err_.str().find("--c"), std::string::npos) << err_.str();
    EXPECT_FALSE(fs::exists(path("x.csv")));
}

TEST_F(CliTest, GenerateUnstableModel) {
    EXPECT_EQ(run({"generate", "--model", "ar1", "--a", "1.1", "--innov", "uniform", "--c", "0.5", "--n", "100",
                   "--seed", "1", "--out", path("x.csv")}),
              cli::kInvalidConfig);
    EXPECT_NE(err_.str().find("model unstable"), std::string::npos) << err_.str();
}

TEST_F(CliTest, GenerateRequiresSeed) {
    EXPECT_EQ(run({"generate", "--model", "iid", "--innov", "gaussian", "--sigma", "1", "--n", "100", "--out",
                   path("x.csv")}),
              cli::kInvalidConfig);
}

TEST_F(CliTest, GenerateIntoUnwritableDirectory) {
    EXPECT_EQ(run({"generate", "--model", "iid", "--innov", "gaussian", "--sigma", "1", "--n", "100", "--seed", "1",
                   "--out", path("missing/dir/x.csv")}),
              cli::kIoFailure);
}

TEST_F(CliTest, OutputDirectoryFromEnvironment) {
    ::setenv(cli::kOutputDirEnv, dir_.c_str(), 1);
    const int rc = run({"generate", "--model", "iid", "--innov", "laplace", "--b", "1", "--n", "50", "--seed", "3"});
    ::unsetenv(cli::kOutputDirEnv);
    EXPECT_EQ(rc, cli::kOk) << err_.str();
    EXPECT_TRUE(fs::exists(dir_ / "series.csv"));
    EXPECT_TRUE(fs::exists(dir_ / "series.csv.meta.json"));
}

// --- bound ------------------------------------------------------------------

TEST_F(CliTest, BoundThreeMethods) {
    const auto csv = make_ar1_uniform();
    ASSERT_EQ(run({"bound", "--in", csv, "--method", "analytic", "--out", path("a.json")}), cli::kOk) << err_.str();
    const json a = read_json(path("a.json"));
    EXPECT_DOUBLE_EQ(a.at("bound").at("deviation_bound").get<double>(), 0.5);
    EXPECT_EQ(a.at("bound").at("setting"), "prediction");
    EXPECT_EQ(a.at("bound").at("conditional_entropy").at("method"), "analytic");

    ASSERT_EQ(run({"bound", "--in", csv, "--method", "knn", "--out", path("k.json")}), cli::kOk) << err_.str();
    const json k = read_json(path("k.json"));
    EXPECT_NEAR(k.at("bound").at("deviation_bound").get<double>() / 0.5, 1.0, 0.05);
    EXPECT_EQ(k.at("bound").at("conditional_entropy").at("k_neighbors"), 4);
    EXPECT_EQ(k.at("bound").at("conditional_entropy").at("window"), 3);

    ASSERT_EQ(run({"bound", "--in", csv, "--method", "spectral", "--out", path("s.json")}), cli::kOk) << err_.str();
    const json s = read_json(path("s.json"));
    EXPECT_NEAR(s.at("bound").at("deviation_bound").get<double>() / 0.5, 1.0, 0.08);
    EXPECT_EQ(s.at("bound").at("setting"), "spectral");
    EXPECT_TRUE(s.at("spectral").at("szego_bits").is_number());
    EXPECT_TRUE(s.at("spectral").at("negentropy").at("bits").is_number());
    EXPECT_TRUE(s.at("spectral").at("negentropy").at("raw_bits").is_number());

    // Schema stability across methods.
    for (const json* r : {&a, &k, &s}) {
        for (const char* key : {"command", "input", "n", "method", "bound", "spectral", "model", "seed"}) {
            EXPECT_TRUE(r->contains(key)) << key;
        }
        for (const char* key : {"support_bound", "deviation_bound", "m_step", "setting", "conditional_entropy"}) {
            EXPECT_TRUE(r->at("bound").contains(key)) << key;
        }
    }
}

TEST_F(CliTest, BoundTwoStepAnalytic) {
    const auto csv = make_ar1_uniform();
    ASSERT_EQ(run({"bound", "--in", csv, "--method", "analytic", "--m", "2", "--out", path("a.json")}), cli::kOk);
    const json a = read_json(path("a.json"));
    EXPECT_NEAR(a.at("bound").at("conditional_entropy").at("bits").get<double>(), 0.6492, 1e-4);
    EXPECT_EQ(a.at("bound").at("m_step"), 2);
}

TEST_F(CliTest, AnalyticNeedsSidecar) {
    const auto csv = make_ar1_uniform();
    fs::remove(cli::sidecar_path(csv));
    EXPECT_EQ(run({"bound", "--in", csv, "--method", "analytic", "--out", path("a.json")}), cli::kInvalidConfig);
    EXPECT_NE(err_.str().find("sidecar"), std::string::npos);
}

TEST_F(CliTest, InsufficientDataExitCode) {
    ASSERT_EQ(run({"generate", "--model", "iid", "--innov", "uniform", "--c", "0.5", "--n", "1000", "--seed", "1",
                   "--out", path("short.csv")}),
              cli::kOk);
    EXPECT_EQ(run({"bound", "--in", path("short.csv"), "--method", "spectral", "--out", path("s.json")}),
              cli::kInsufficientData);
    EXPECT_FALSE(fs::exists(path("s.json")));
}

TEST_F(CliTest, MissingInputFile) {
    EXPECT_EQ(run({"bound", "--in", path("nope.csv"), "--method", "knn", "--out", path("k.json")}), cli::kIoFailure);
}

TEST_F(CliTest, CorruptedCsvReportsRow) {
    std::ofstream(path("bad.csv")) << "x\n0.1\n0.2\nabc\n0.4\n";
    EXPECT_EQ(run({"bound", "--in", path("bad.csv"), "--method", "knn", "--out", path("k.json")}),
              cli::kInvalidConfig);
    EXPECT_NE(err_.str().find("row 3"), std::string::npos) << err_.str();
    std::ofstream(path("hdr.csv")) << "value\n0.1\n";
    EXPECT_EQ(run({"bound", "--in", path("hdr.csv"), "--out", path("k.json")}), cli::kInvalidConfig);
}

// --- certify ----------------------------------------------------------------

TEST_F(CliTest, CertifyOracleAndPersistence) {
    const auto csv = make_ar1_uniform();
    ASSERT_EQ(run({"certify", "--in", csv, "--predictor", "oracle", "--bound-method", "analytic", "--out",
                   path("o.json")}),
              cli::kOk)
        << err_.str();
    const json o = read_json(path("o.json"));
    EXPECT_TRUE(o.at("achieves_bound").get<bool>());
    EXPECT_TRUE(o.at("inequality_holds").get<bool>());
    for (const char* key : {"bound", "predictor", "diagnostics", "tau", "tightness_ratio", "support_unbounded"}) {
        EXPECT_TRUE(o.contains(key)) << key;
    }
    for (const char* key : {"empirical_support", "empirical_max_deviation", "mean", "whiteness", "uniformity_stat",
                            "mi_error_past", "achieves_bound"}) {
        EXPECT_TRUE(o.at("diagnostics").contains(key)) << key;
    }

    ASSERT_EQ(run({"certify", "--in", csv, "--predictor", "persistence", "--bound-method", "analytic", "--out",
                   path("p.json")}),
              cli::kOk);
    const json p = read_json(path("p.json"));
    EXPECT_FALSE(p.at("achieves_bound").get<bool>());
    // Finite-sample ratio is near 0.7; see the predict tests.
    EXPECT_LE(p.at("tightness_ratio").get<double>(), 0.75);
}

TEST_F(CliTest, CertifyOlsWithKnnBound) {
    const auto csv = make_ar1_uniform();
    ASSERT_EQ(run({"certify", "--in", csv, "--predictor", "ols", "--order", "2", "--out", path("c.json")}), cli::kOk)
        << err_.str();
    const json c = read_json(path("c.json"));
    EXPECT_EQ(c.at("predictor").at("kind"), "ols-ar");
    EXPECT_EQ(c.at("predictor").at("order"), 2);
    EXPECT_EQ(c.at("bound_method"), "knn");
}

TEST_F(CliTest, CertifyReplicatesIndependentOfScheduling) {
    ASSERT_EQ(run({"generate", "--model", "ar1", "--a", "0.5", "--innov", "uniform", "--c", "0.5", "--n", "5000",
                   "--seed", "7", "--out", path("x.csv")}),
              cli::kOk);
    const std::vector<std::string> args{"certify", "--in", path("x.csv"), "--predictor", "oracle", "--bound-method",
                                        "analytic", "--replicates", "4"};
    auto a = args;
    a.insert(a.end(), {"--out", path("r1.json")});
    auto b = args;
    b.insert(b.end(), {"--out", path("r2.json")});
    ASSERT_EQ(run(a), cli::kOk) << err_.str();
    ASSERT_EQ(run(b), cli::kOk);
    EXPECT_EQ(slurp(path("r1.json")), slurp(path("r2.json")));
    const json r = read_json(path("r1.json"));
    ASSERT_EQ(r.at("replicates").size(), 4u);
    EXPECT_EQ(r.at("replicates")[3].at("seed"), 10);
    EXPECT_TRUE(r.at("summary").at("all_inequalities_hold").get<bool>());
}

TEST_F(CliTest, UnknownSubcommandOrFlag) {
    EXPECT_EQ(run({"frobnicate"}), cli::kInvalidConfig);
    EXPECT_EQ(run({}), cli::kInvalidConfig);
    EXPECT_EQ(run({"bound", "--in", "x.csv", "--method", "magic"}), cli::kInvalidConfig);
}

TEST_F(CliTest, ExecutableEndToEnd) {
    const std::string tool = PREDBOUND_TOOL_PATH;
    const std::string csv = path("x.csv");
    const std::string gen = tool + " generate --model iid --innov uniform --c 0.5 --n 20000 --seed 5 --out " + csv +
                            " > " + path("log.txt") + " 2>&1";
    ASSERT_EQ(std::system(gen.c_str()), 0);
    const std::string bnd = tool + " bound --in " + csv + " --method knn --window 1 --out " + path("b.json") + " > " +
                            path("log.txt") + " 2>&1";
    ASSERT_EQ(std::system(bnd.c_str()), 0) << slurp(path("log.txt"));
    EXPECT_NEAR(read_json(path("b.json")).at("bound").at("deviation_bound").get<double>(), 0.5, 0.03);

    const std::string bad = tool + " generate --model ar1 --a 1.5 --innov uniform --c 0.5 --n 10 --seed 1 --out " +
                            csv + " > " + path("log.txt") + " 2>&1";
    const int status = std::system(bad.c_str());
    ASSERT_TRUE(WIFEXITED(status));
    EXPECT_EQ(WEXITSTATUS(status), cli::kInvalidConfig);
}
