#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "generators.hpp"
#include "rebalance/csv.hpp"
#include "rebalance/error.hpp"

namespace rebalance {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("rebalance_cli_") + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write_dataset(const Dataset& ds, const std::string& name = "d.csv") {
        const auto p = dir_ / name;
        write_csv(p, ds, "y");
        return p;
    }

    int run(std::vector<std::string> args) {
        out_.str("");
        err_.str("");
        return cli::run(args, out_, err_);
    }

    static std::string slurp(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    fs::path dir_;
    std::ostringstream out_;
    std::ostringstream err_;
};

TEST_F(CliTest, BalanceIsRepeatable) {
    const auto in = write_dataset(testing::blobs({60, 12}, 2, 0.5, 2.0, 1));
    const std::vector<std::string> args{"balance", "--in",      in.string(), "--label", "y",  "--sampler",
                                        "smote",   "--k",       "5",         "--seed",  "7",  "--out-dir",
                                        (dir_ / "a").string()};
    ASSERT_EQ(run(args), cli::kOk) << err_.str();
    auto again = args;
    again.back() = (dir_ / "b").string();
    ASSERT_EQ(run(again), cli::kOk);
    const auto a = slurp(dir_ / "a" / "balanced.csv");
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, slurp(dir_ / "b" / "balanced.csv"));
    EXPECT_NE(out_.str().find("60"), std::string::npos);

    CsvOptions opts;
    opts.label_column = "y";
    const auto balanced = load_csv(dir_ / "a" / "balanced.csv", opts);
    EXPECT_EQ(testing::label_counts(balanced), (std::vector<std::size_t>{60, 60}));
}

TEST_F(CliTest, UnknownSamplerListsValidNames) {
    const auto in = write_dataset(testing::blobs({10, 4}, 2, 0.5, 2.0, 1));
    EXPECT_EQ(run({"balance", "--in", in.string(), "--label", "y", "--sampler", "smoat", "--out-dir", dir_.string()}),
              cli::kConfigError);
    EXPECT_NE(err_.str().find("safe_level_smote"), std::string::npos);
}

TEST_F(CliTest, SingleClassIsDataError) {
    const auto in = write_dataset(testing::blobs({10}, 2, 0.5, 2.0, 1));
    EXPECT_EQ(run({"balance", "--in", in.string(), "--label", "y", "--sampler", "smote", "--out-dir", dir_.string()}),
              cli::kDataError);
    EXPECT_NE(err_.str().find("nothing to balance"), std::string::npos);
}

TEST_F(CliTest, ParseErrorsAndMissingInput) {
    EXPECT_EQ(run({"balance", "--sampler", "smote"}), cli::kConfigError);
    EXPECT_EQ(run({"frobnicate"}), cli::kConfigError);
    EXPECT_EQ(run({"balance", "--in", (dir_ / "missing.csv").string(), "--sampler", "smote"}), cli::kConfigError);
    const auto in = write_dataset(testing::blobs({10, 4}, 2, 0.5, 2.0, 1));
    EXPECT_EQ(run({"balance", "--in", in.string(), "--label", "y", "--sampler", "smote", "--k", "0", "--out-dir",
                   dir_.string()}),
              cli::kConfigError);
    EXPECT_EQ(run({"balance", "--in", in.string(), "--label", "nope", "--sampler", "smote", "--out-dir",
                   dir_.string()}),
              cli::kDataError);
    EXPECT_EQ(run({"--help"}), cli::kOk);
}

TEST_F(CliTest, BenchmarkTableHasNonePlusSamplers) {
    const auto in = write_dataset(testing::blobs({80, 20}, 2, 0.8, 2.0, 4));
    ASSERT_EQ(run({"benchmark", "--in", in.string(), "--label", "y", "--samplers", "smote,random_oversample",
                   "--classifiers", "gaussian_nb", "--out-dir", dir_.string()}),
              cli::kOk)
        << err_.str();
    const auto csv = slurp(dir_ / "results.csv");
    std::istringstream lines(csv);
    std::string line;
    std::vector<std::string> rows;
    while (std::getline(lines, line)) rows.push_back(line);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0],
              "Dataset,Classifier,Sampling Method,AvAvg,AvFb,MAvG,CBA,Sampling Time (s),Classifier Time (s),Total "
              "Time (s)");
    EXPECT_NE(rows[1].find(",None,"), std::string::npos);
    EXPECT_NE(rows[2].find(",SMOTE,"), std::string::npos);

    // markdown carries the same cells as the csv
    const auto md = slurp(dir_ / "results.md");
    for (std::size_t r = 1; r < rows.size(); ++r) {
        std::istringstream cells(rows[r]);
        std::string cell;
        std::getline(cells, cell, ',');
        std::getline(cells, cell, ',');
        std::string md_row = "|";
        while (std::getline(cells, cell, ',')) md_row += " " + cell + " |";
        EXPECT_NE(md.find(md_row), std::string::npos) << md_row;
    }
    EXPECT_TRUE(fs::exists(dir_ / "results.json"));
    EXPECT_TRUE(fs::exists(dir_ / "folds.csv"));
    EXPECT_TRUE(fs::exists(dir_ / "manifest.json"));
}

TEST_F(CliTest, ReplayReproducesMetrics) {
    const auto in = write_dataset(testing::blobs({80, 20}, 2, 0.8, 2.0, 4));
    ASSERT_EQ(run({"benchmark", "--in", in.string(), "--label", "y", "--samplers", "smote", "--seed", "3",
                   "--format", "csv", "--out-dir", (dir_ / "first").string()}),
              cli::kOk);
    ASSERT_EQ(run({"replay", (dir_ / "first" / "manifest.json").string(), "--out-dir", (dir_ / "second").string()}),
              cli::kOk)
        << err_.str();
    EXPECT_EQ(slurp(dir_ / "first" / "manifest.json"), slurp(dir_ / "second" / "manifest.json"));
    // timings differ between runs; metric columns must not
    auto metrics = [](const std::string& csv) {
        std::istringstream lines(csv);
        std::string line, out;
        while (std::getline(lines, line)) {
            std::istringstream cells(line);
            std::string cell;
            for (int c = 0; c < 8 && std::getline(cells, cell, ','); ++c) out += cell + ",";
            out += "\n";
        }
        return out;
    };
    EXPECT_EQ(metrics(slurp(dir_ / "first" / "folds.csv")), metrics(slurp(dir_ / "second" / "folds.csv")));
}

TEST_F(CliTest, ReplayOfBalanceIsByteIdentical) {
    const auto in = write_dataset(testing::blobs({50, 10, 20}, 2, 0.8, 2.0, 4));
    ASSERT_EQ(run({"balance", "--in", in.string(), "--label", "y", "--sampler", "adasyn", "--out-dir",
                   (dir_ / "first").string()}),
              cli::kOk);
    ASSERT_EQ(run({"replay", (dir_ / "first" / "manifest.json").string(), "--out-dir", (dir_ / "second").string()}),
              cli::kOk);
    EXPECT_EQ(slurp(dir_ / "first" / "balanced.csv"), slurp(dir_ / "second" / "balanced.csv"));
}

TEST_F(CliTest, ManifestRoundTrip) {
    cli::RunConfig rc;
    rc.command = "timing";
    rc.input = "x.csv";
    rc.samplers = {"smote", "rbo"};
    rc.sizes = {100, 200};
    rc.sampler.k = 7;
    rc.sampler.density_exponent_de = 2.5;
    rc.sampler.search = SearchStrategy::brute_force;
    const auto back = cli::from_manifest(cli::manifest(rc));
    EXPECT_EQ(cli::manifest(back), cli::manifest(rc));
    EXPECT_EQ(back.sampler.k, 7u);
    EXPECT_EQ(back.sampler.density_exponent_de, 2.5);
    EXPECT_THROW(cli::from_manifest(nlohmann::json::array()), ConfigError);
}

TEST_F(CliTest, TimingWritesSixRows) {
    const auto in = write_dataset(testing::blobs({540, 60}, 2, 0.8, 2.0, 4));
    ASSERT_EQ(run({"timing", "--in", in.string(), "--label", "y", "--samplers", "smote,safe_level_smote", "--sizes",
                   "150,300,600", "--repeats", "1", "--out-dir", dir_.string()}),
              cli::kOk)
        << err_.str();
    std::istringstream lines(slurp(dir_ / "timing.csv"));
    std::string line;
    std::size_t n = 0;
    while (std::getline(lines, line)) ++n;
    EXPECT_EQ(n, 7u);
    EXPECT_TRUE(fs::exists(dir_ / "projection.csv"));
}

TEST_F(CliTest, SamplersListing) {
    EXPECT_EQ(run({"samplers"}), cli::kOk);
    EXPECT_NE(out_.str().find("mwmote"), std::string::npos);
    EXPECT_EQ(run({"samplers", "--json"}), cli::kOk);
    const auto listing = nlohmann::json::parse(out_.str());
    EXPECT_EQ(listing.size(), 14u);
}

TEST(Format, PercentAndSeconds) {
    EXPECT_EQ(cli::format_percent(0.70711), "70.71");
    EXPECT_EQ(cli::format_percent(0.0), "0.00");
    EXPECT_EQ(cli::format_seconds(1.23456), "1.235");
}

}  // namespace
}  // namespace rebalance
