#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "rebalance/dataset.hpp"
#include "rebalance/harness.hpp"
#include "rebalance/sampler_config.hpp"

namespace rebalance::cli {

/// Exit codes of the rebalance executable.
enum ExitCode : int {
    kOk = 0,
    kInternalError = 1,
    kConfigError = 2,
    kDataError = 3,
};

struct RunConfig {
    std::string command;  ///< balance, benchmark or timing
    std::filesystem::path input;
    std::string label = "label";  ///< header name, or a column index when no header cell matches
    std::vector<std::string> samplers;
    std::vector<std::string> classifiers{"gaussian_nb"};
    std::size_t folds = 5;
    std::size_t threads = 0;  ///< 0: REBALANCE_THREADS or all cores
    bool normalize = false;
    std::filesystem::path out_dir = ".";
    std::string out_file = "balanced.csv";  ///< balance output, inside out_dir
    std::vector<std::string> formats{"csv", "markdown", "json"};
    std::vector<std::size_t> sizes;      ///< timing
    std::size_t repeats = 3;             ///< timing
    std::size_t project_to = 100000;     ///< timing: regression target size
    SamplerConfig sampler;

    /// Throws ConfigError for an invalid combination.
    void validate() const;
};

/// Full resolved configuration plus tool version. out_dir is not recorded.
nlohmann::json manifest(const RunConfig& rc);
/// Inverse of manifest(). Throws ConfigError for a malformed manifest.
RunConfig from_manifest(const nlohmann::json& j);

Dataset load_input(const RunConfig& rc);

struct BenchmarkTable {
    std::string dataset;
    std::string classifier;
    std::vector<ExperimentSummary> rows;  ///< "none" first
};

/// Writes the balanced CSV and manifest; prints class counts and sampling time.
Dataset cmd_balance(const RunConfig& rc, std::ostream& out);
/// Writes results.{csv,md,json}, folds.csv and manifest; prints the markdown tables.
std::vector<BenchmarkTable> cmd_benchmark(const RunConfig& rc, std::ostream& out);
/// Writes timing.csv, projection.csv, timing.md and manifest; prints the timing table.
std::vector<TimingEntry> cmd_timing(const RunConfig& rc, std::ostream& out);

std::string format_percent(double fraction);
std::string format_seconds(double seconds);
std::string render_markdown(const BenchmarkTable& table);
/// Long-format CSV over every table.
std::string render_csv(const std::vector<BenchmarkTable>& tables);

/// Entry point of the executable. Returns an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rebalance::cli
