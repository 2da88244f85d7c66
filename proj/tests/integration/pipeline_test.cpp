#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "generators.hpp"
#include "rebalance/csv.hpp"
#include "rebalance/harness.hpp"
#include "rebalance/samplers.hpp"

namespace rebalance {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("rebalance_it_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

TEST(Pipeline, CsvRoundTripThroughEverySampler) {
    const auto dir = scratch("roundtrip");
    const auto ds = testing::blobs({90, 25, 12}, 3, 0.7, 1.5, 3);
    write_csv(dir / "in.csv", ds, "cls");
    CsvOptions opts;
    opts.label_column = std::string("cls");
    const auto loaded = load_csv(dir / "in.csv", opts);
    ASSERT_EQ(loaded.features(), ds.features());
    for (const auto& s : samplers()) {
        const auto out = transform(loaded, SamplerConfig{}, s.id);
        write_csv(dir / "out.csv", out, "cls");
        const auto back = load_csv(dir / "out.csv", opts);
        EXPECT_EQ(back.rows(), 270u) << s.id;
        EXPECT_EQ(testing::label_counts(back), (std::vector<std::size_t>{90, 90, 90})) << s.id;
        // 17 significant digits survive the text round trip
        EXPECT_EQ(back.features(), out.features()) << s.id;
    }
    fs::remove_all(dir);
}

TEST(Pipeline, StringLabelsKeepTheirSpelling) {
    const auto dir = scratch("labels");
    {
        std::ofstream f(dir / "in.csv");
        f << "a,b,kind\n";
        for (int i = 0; i < 30; ++i) f << i * 0.1 << ',' << i % 7 << ",common\n";
        for (int i = 0; i < 6; ++i) f << 5 + i * 0.1 << ',' << i << ",rare\n";
    }
    std::ostringstream out, err;
    ASSERT_EQ(cli::run({"balance", "--in", (dir / "in.csv").string(), "--label", "kind", "--sampler", "smote",
                        "--out-dir", dir.string()},
                       out, err),
              cli::kOk)
        << err.str();
    std::ifstream in(dir / "balanced.csv");
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "a,b,kind");
    std::size_t rare = 0, rows = 0;
    for (std::string line; std::getline(in, line); ++rows) rare += line.ends_with(",rare");
    EXPECT_EQ(rows, 60u);
    EXPECT_EQ(rare, 30u);
    fs::remove_all(dir);
}

TEST(Pipeline, BenchmarkWithNormalizationAndTwoClassifiers) {
    const auto dir = scratch("bench");
    write_csv(dir / "d.csv", testing::blobs({150, 30, 20}, 4, 1.0, 2.0, 8), "y");
    std::ostringstream out, err;
    ASSERT_EQ(cli::run({"benchmark", "--in", (dir / "d.csv").string(), "--label", "y", "--samplers",
                        "smote,borderline_smote,ccr", "--classifiers", "gaussian_nb,nearest_centroid", "--normalize",
                        "--folds", "4", "--out-dir", dir.string()},
                       out, err),
              cli::kOk)
        << err.str();
    std::ifstream jf(dir / "results.json");
    const auto j = nlohmann::json::parse(jf);
    ASSERT_EQ(j["tables"].size(), 2u);
    for (const auto& t : j["tables"]) {
        ASSERT_EQ(t["rows"].size(), 4u);
        EXPECT_EQ(t["rows"][0]["sampler"], "none");
        for (const auto& r : t["rows"]) {
            EXPECT_EQ(r["folds"], 4);
            EXPECT_GE(r["m_avg"].get<double>(), 0.0);
            EXPECT_LE(r["av_acc"].get<double>(), 1.0);
        }
    }
    EXPECT_NE(out.str().find("| Sampling Method |"), std::string::npos);
    fs::remove_all(dir);
}

TEST(Pipeline, ExperimentFoldRecordsAreConsistent) {
    const auto ds = testing::covertype_like(1500, 4);
    ExperimentOptions opts;
    opts.normalize = true;
    const auto recs = run_experiment(ds, "smote", "nearest_centroid", SamplerConfig{}, opts);
    ASSERT_EQ(recs.size(), 5u);
    std::size_t tested = 0;
    for (const auto& r : recs) {
        tested += r.test_rows;
        EXPECT_EQ(r.metrics.per_class.size(), ds.class_count());
        EXPECT_GT(r.train_rows, ds.rows() - r.test_rows);
    }
    EXPECT_EQ(tested, ds.rows());
}

}  // namespace
}  // namespace rebalance
