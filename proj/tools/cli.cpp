#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "rebalance/csv.hpp"
#include "rebalance/error.hpp"
#include "rebalance/parallel.hpp"
#include "rebalance/samplers.hpp"
#include "rebalance/version.hpp"

namespace rebalance::cli {
namespace {

using nlohmann::json;

const std::vector<std::string> kFormats{"csv", "markdown", "json"};

bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    return out + "\"";
}

bool wants(const RunConfig& rc, const std::string& format) {
    return std::find(rc.formats.begin(), rc.formats.end(), format) != rc.formats.end();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path.string());
    f << text;
}

void write_manifest(const RunConfig& rc) {
    write_text(rc.out_dir / "manifest.json", manifest(rc).dump(2) + "\n");
}

std::string display_name(const std::string& sampler_id) { return std::string(find_sampler(sampler_id).display_name); }

const char* search_name(SearchStrategy s) { return s == SearchStrategy::brute_force ? "brute_force" : "metric_tree"; }

json sampler_json(const SamplerConfig& c) {
    json j;
    j["k"] = c.k;
    j["k1"] = c.k1;
    j["k2"] = c.k2;
    j["k3"] = c.k3;
    j["cluster_k"] = c.cluster_k;
    j["mwmote_cluster_k"] = c.mwmote_cluster_k;
    j["sigma"] = c.sigma;
    j["energy"] = c.energy;
    j["c_max_ratio"] = c.c_max_ratio;
    j["radius_neighbor_cap"] = c.radius_neighbor_cap;
    j["imbalance_threshold_irt"] = c.imbalance_threshold_irt;
    j["density_exponent_de"] = c.density_exponent_de ? json(*c.density_exponent_de) : json(nullptr);
    j["mwmote_cmax"] = c.mwmote_cmax;
    j["mwmote_cf_th"] = c.mwmote_cf_th;
    j["nras_threshold"] = c.nras_threshold;
    j["nras_propensity_floor"] = c.nras_propensity_floor ? json(*c.nras_propensity_floor) : json(nullptr);
    j["rbo_gamma"] = c.rbo_gamma;
    j["rbo_iterations"] = c.rbo_iterations;
    j["rbo_step_size"] = c.rbo_step_size;
    j["rbo_stop_probability"] = c.rbo_stop_probability;
    j["safe_level_correction_rate"] = c.safe_level_correction_rate;
    j["beta"] = c.beta;
    j["kmeans_max_iterations"] = c.kmeans_max_iterations;
    j["search"] = search_name(c.search);
    j["seed"] = c.seed;
    return j;
}

SamplerConfig sampler_from_json(const json& j) {
    SamplerConfig c;
    c.k = j.at("k");
    c.k1 = j.at("k1");
    c.k2 = j.at("k2");
    c.k3 = j.at("k3");
    c.cluster_k = j.at("cluster_k");
    c.mwmote_cluster_k = j.at("mwmote_cluster_k");
    c.sigma = j.at("sigma");
    c.energy = j.at("energy");
    c.c_max_ratio = j.at("c_max_ratio");
    c.radius_neighbor_cap = j.at("radius_neighbor_cap");
    c.imbalance_threshold_irt = j.at("imbalance_threshold_irt");
    if (!j.at("density_exponent_de").is_null()) c.density_exponent_de = j.at("density_exponent_de").get<double>();
    c.mwmote_cmax = j.at("mwmote_cmax");
    c.mwmote_cf_th = j.at("mwmote_cf_th");
    c.nras_threshold = j.at("nras_threshold");
    if (!j.at("nras_propensity_floor").is_null()) {
        c.nras_propensity_floor = j.at("nras_propensity_floor").get<double>();
    }
    c.rbo_gamma = j.at("rbo_gamma");
    c.rbo_iterations = j.at("rbo_iterations");
    c.rbo_step_size = j.at("rbo_step_size");
    c.rbo_stop_probability = j.at("rbo_stop_probability");
    c.safe_level_correction_rate = j.at("safe_level_correction_rate");
    c.beta = j.at("beta");
    c.kmeans_max_iterations = j.at("kmeans_max_iterations");
    const std::string search = j.at("search");
    if (search == "brute_force") {
        c.search = SearchStrategy::brute_force;
    } else if (search == "metric_tree") {
        c.search = SearchStrategy::metric_tree;
    } else {
        throw ConfigError("unknown search strategy '" + search + "'");
    }
    c.seed = j.at("seed");
    return c;
}

// Samplers as run by benchmark: "none" first, then the requested ones without repeats.
std::vector<std::string> benchmark_samplers(const RunConfig& rc) {
    std::vector<std::string> out{"none"};
    for (const auto& s : rc.samplers) {
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
    return out;
}

void prepare_out_dir(const RunConfig& rc) {
    std::error_code ec;
    std::filesystem::create_directories(rc.out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + rc.out_dir.string() + ": " + ec.message());
}

const std::vector<std::string> kColumns{"Sampling Method",        "AvAvg", "AvFb", "MAvG", "CBA",
                                        "Sampling Time (s)", "Classifier Time (s)", "Total Time (s)"};

std::vector<std::string> row_cells(const ExperimentSummary& s) {
    return {display_name(s.sampler),        format_percent(s.av_acc),       format_percent(s.av_fb),
            format_percent(s.m_avg),        format_percent(s.cba),          format_seconds(s.sampling_time),
            format_seconds(s.classifier_time), format_seconds(s.total_time)};
}

std::string render_folds_csv(std::span<const ExperimentRecord> records) {
    std::ostringstream out;
    out << "dataset,classifier,sampler,fold,av_acc,av_fb,m_avg,cba,sampling_time_s,classifier_time_s,total_time_s,"
           "train_rows,test_rows\n";
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (const auto& r : records) {
        out << csv_cell(r.dataset) << ',' << r.classifier << ',' << r.sampler << ',' << r.fold << ','
            << num(r.metrics.av_acc) << ',' << num(r.metrics.av_fb) << ',' << num(r.metrics.m_avg) << ','
            << num(r.metrics.cba) << ',' << num(r.sampling_time) << ',' << num(r.classifier_time) << ','
            << num(r.total_time) << ',' << r.train_rows << ',' << r.test_rows << '\n';
    }
    return out.str();
}

json summary_json(const ExperimentSummary& s) {
    return {{"sampler", s.sampler},         {"sampling_method", display_name(s.sampler)},
            {"folds", s.folds},             {"av_acc", s.av_acc},
            {"av_fb", s.av_fb},             {"m_avg", s.m_avg},
            {"cba", s.cba},                 {"sampling_time_s", s.sampling_time},
            {"classifier_time_s", s.classifier_time}, {"total_time_s", s.total_time}};
}

void add_sampler_options(CLI::App& app, SamplerConfig& c, std::optional<double>& de, std::optional<double>& floor,
                         std::string& search) {
    app.add_option("--k", c.k, "neighbor count")->capture_default_str();
    app.add_option("--k1", c.k1, "MWMOTE noise-filter neighbors")->capture_default_str();
    app.add_option("--k2", c.k2, "MWMOTE borderline-majority neighbors")->capture_default_str();
    app.add_option("--k3", c.k3, "MWMOTE informative-minority neighbors")->capture_default_str();
    app.add_option("--cluster-k", c.cluster_k, "cluster count")->capture_default_str();
    app.add_option("--mwmote-cluster-k", c.mwmote_cluster_k, "MWMOTE cluster count")->capture_default_str();
    app.add_option("--sigma", c.sigma, "Gaussian SMOTE spread")->capture_default_str();
    app.add_option("--energy", c.energy, "CCR energy per minority row")->capture_default_str();
    app.add_option("--c-max-ratio", c.c_max_ratio, "ANS outcast scan bound")->capture_default_str();
    app.add_option("--radius-neighbor-cap", c.radius_neighbor_cap, "radius query truncation")
        ->capture_default_str();
    app.add_option("--irt", c.imbalance_threshold_irt, "k-Means SMOTE imbalance threshold")->capture_default_str();
    app.add_option("--density-exponent", de, "k-Means SMOTE density exponent (default: feature count)");
    app.add_option("--mwmote-cmax", c.mwmote_cmax, "MWMOTE closeness clip")->capture_default_str();
    app.add_option("--mwmote-cf-th", c.mwmote_cf_th, "MWMOTE closeness cutoff")->capture_default_str();
    app.add_option("--nras-threshold", c.nras_threshold, "NRAS minority-neighbor floor")->capture_default_str();
    app.add_option("--nras-propensity-floor", floor, "NRAS propensity floor (default: off)");
    app.add_option("--rbo-gamma", c.rbo_gamma, "RBO kernel spread")->capture_default_str();
    app.add_option("--rbo-iterations", c.rbo_iterations, "RBO optimization steps")->capture_default_str();
    app.add_option("--rbo-step-size", c.rbo_step_size, "RBO step size")->capture_default_str();
    app.add_option("--rbo-stop-probability", c.rbo_stop_probability, "RBO stop probability")->capture_default_str();
    app.add_option("--safe-level-correction-rate", c.safe_level_correction_rate,
                   "Safe Level SMOTE retry budget")
        ->capture_default_str();
    app.add_option("--beta", c.beta, "F-measure weight")->capture_default_str();
    app.add_option("--kmeans-max-iterations", c.kmeans_max_iterations, "Lloyd iteration cap")
        ->capture_default_str();
    app.add_option("--search", search, "neighbor search strategy")
        ->check(CLI::IsMember({"metric_tree", "brute_force"}))
        ->capture_default_str();
    app.add_option("--seed", c.seed, "random seed")->capture_default_str();
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
    std::vector<std::string> out;
    for (const auto& item : items) {
        std::stringstream ss(item);
        std::string part;
        while (std::getline(ss, part, ',')) {
            if (!part.empty()) out.push_back(part);
        }
    }
    return out;
}

void print_samplers(std::ostream& out, bool as_json) {
    if (as_json) {
        json list = json::array();
        for (const auto& s : samplers()) {
            list.push_back({{"id", s.id},
                            {"name", s.display_name},
                            {"scalable", s.scalable},
                            {"knn_count", s.traits.knn_count},
                            {"kmeans", s.traits.kmeans},
                            {"dependent_loop", s.traits.dependent_loop},
                            {"probability", s.traits.probability},
                            {"linear_regression", s.traits.linear_regression},
                            {"radius_neighbors", s.traits.radius_neighbors},
                            {"quadratic", s.traits.quadratic}});
        }
        out << list.dump(2) << '\n';
        return;
    }
    auto yn = [](bool b) { return b ? "yes" : "-"; };
    out << std::left << std::setw(20) << "id" << std::setw(22) << "name" << std::setw(9) << "scalable"
        << std::setw(5) << "kNN" << std::setw(8) << "k-means" << std::setw(9) << "dep.loop" << std::setw(7)
        << "prob." << std::setw(8) << "lin.reg" << std::setw(8) << "radius"
        << "O(n^2)\n";
    for (const auto& s : samplers()) {
        out << std::left << std::setw(20) << s.id << std::setw(22) << s.display_name << std::setw(9)
            << yn(s.scalable) << std::setw(5) << s.traits.knn_count << std::setw(8) << yn(s.traits.kmeans)
            << std::setw(9) << yn(s.traits.dependent_loop) << std::setw(7) << yn(s.traits.probability)
            << std::setw(8) << yn(s.traits.linear_regression) << std::setw(8) << yn(s.traits.radius_neighbors)
            << yn(s.traits.quadratic) << '\n';
    }
}

int dispatch(const RunConfig& rc, std::ostream& out) {
    if (rc.threads > 0) set_thread_count(rc.threads);
    if (rc.command == "balance") {
        cmd_balance(rc, out);
    } else if (rc.command == "benchmark") {
        cmd_benchmark(rc, out);
    } else if (rc.command == "timing") {
        cmd_timing(rc, out);
    } else {
        throw ConfigError("unknown command '" + rc.command + "'");
    }
    return kOk;
}

}  // namespace

void RunConfig::validate() const {
    if (command != "balance" && command != "benchmark" && command != "timing") {
        throw ConfigError("unknown command '" + command + "'");
    }
    if (input.empty()) throw ConfigError("--in is required");
    if (!std::filesystem::is_regular_file(input)) throw ConfigError("input file not found: " + input.string());
    if (label.empty()) throw ConfigError("--label is required");
    if (samplers.empty()) throw ConfigError("at least one sampler is required");
    for (const auto& s : samplers) find_sampler(s);
    if (command == "balance" && samplers.size() != 1) throw ConfigError("balance takes exactly one sampler");
    if (command == "benchmark") {
        if (classifiers.empty()) throw ConfigError("at least one classifier is required");
        for (const auto& c : classifiers) find_classifier(c);
        if (folds < 2) throw ConfigError("--folds must be at least 2");
    }
    if (command == "timing") {
        if (sizes.empty()) throw ConfigError("--sizes is required");
        for (std::size_t i = 1; i < sizes.size(); ++i) {
            if (sizes[i] <= sizes[i - 1]) throw ConfigError("--sizes must be strictly ascending");
        }
        if (repeats == 0) throw ConfigError("--repeats must be at least 1");
        std::set<std::string> seen;
        for (const auto& s : samplers) {
            if (!seen.insert(s).second) throw ConfigError("duplicate sampler '" + s + "'");
        }
    }
    if (formats.empty()) throw ConfigError("--format needs at least one of csv, markdown, json");
    for (const auto& f : formats) {
        if (std::find(kFormats.begin(), kFormats.end(), f) == kFormats.end()) {
            throw ConfigError("unknown format '" + f + "' (valid: csv, markdown, json)");
        }
    }
    if (out_file.empty()) throw ConfigError("--out-file must not be empty");
    sampler.validate();
}

nlohmann::json manifest(const RunConfig& rc) {
    json j;
    j["tool"] = "rebalance";
    j["version"] = kVersion;
    j["command"] = rc.command;
    j["input"] = std::filesystem::absolute(rc.input).lexically_normal().string();
    j["label"] = rc.label;
    j["samplers"] = rc.samplers;
    j["classifiers"] = rc.classifiers;
    j["folds"] = rc.folds;
    j["threads"] = rc.threads;
    j["normalize"] = rc.normalize;
    j["out_file"] = rc.out_file;
    j["formats"] = rc.formats;
    j["sizes"] = rc.sizes;
    j["repeats"] = rc.repeats;
    j["project_to"] = rc.project_to;
    j["seed"] = rc.sampler.seed;
    j["sampler_config"] = sampler_json(rc.sampler);
    return j;
}

RunConfig from_manifest(const nlohmann::json& j) {
    try {
        if (j.at("tool") != "rebalance") throw ConfigError("not a rebalance manifest");
        RunConfig rc;
        rc.command = j.at("command");
        rc.input = j.at("input").get<std::string>();
        rc.label = j.at("label");
        rc.samplers = j.at("samplers").get<std::vector<std::string>>();
        rc.classifiers = j.at("classifiers").get<std::vector<std::string>>();
        rc.folds = j.at("folds");
        rc.threads = j.at("threads");
        rc.normalize = j.at("normalize");
        rc.out_file = j.at("out_file");
        rc.formats = j.at("formats").get<std::vector<std::string>>();
        rc.sizes = j.at("sizes").get<std::vector<std::size_t>>();
        rc.repeats = j.at("repeats");
        rc.project_to = j.at("project_to");
        rc.sampler = sampler_from_json(j.at("sampler_config"));
        return rc;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed manifest: ") + e.what());
    }
}

Dataset load_input(const RunConfig& rc) {
    CsvOptions opts;
    opts.label_column = rc.label;
    if (all_digits(rc.label)) {
        // a numeric label selects by position unless a header cell spells it
        std::ifstream in(rc.input);
        std::string header;
        std::getline(in, header);
        std::stringstream ss(header);
        std::string cell;
        bool named = false;
        while (std::getline(ss, cell, ',')) {
            cell.erase(0, cell.find_first_not_of(" \t\""));
            cell.erase(cell.find_last_not_of(" \t\"\r") + 1);
            named = named || cell == rc.label;
        }
        if (!named) opts.label_column = static_cast<std::size_t>(std::stoull(rc.label));
    }
    Dataset ds = load_csv(rc.input, opts);
    if (rc.normalize && rc.command == "balance") ds = MinMaxScaler::fit(ds).apply(ds);
    return ds;
}

Dataset cmd_balance(const RunConfig& rc, std::ostream& out) {
    rc.validate();
    const Dataset ds = load_input(rc);
    prepare_out_dir(rc);
    const auto t0 = std::chrono::steady_clock::now();
    Dataset balanced = transform(ds, rc.sampler, rc.samplers.front());
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const std::string label_name = all_digits(rc.label) ? "label" : rc.label;
    write_csv(rc.out_dir / rc.out_file, balanced, label_name);
    write_manifest(rc);

    const auto before = class_counts(ds);
    const auto after = class_counts(balanced);
    out << std::left << std::setw(16) << "class" << std::right << std::setw(10) << "before" << std::setw(10)
        << "after" << '\n';
    for (std::size_t i = 0; i < before.size(); ++i) {
        out << std::left << std::setw(16) << ds.class_name(before[i].label) << std::right << std::setw(10)
            << before[i].count << std::setw(10) << after[i].count << '\n';
    }
    out << "sampler: " << display_name(rc.samplers.front()) << '\n';
    out << "sampling time (s): " << format_seconds(seconds) << '\n';
    out << "wrote " << (rc.out_dir / rc.out_file).string() << '\n';
    return balanced;
}

std::vector<BenchmarkTable> cmd_benchmark(const RunConfig& rc, std::ostream& out) {
    rc.validate();
    const Dataset ds = load_input(rc);
    prepare_out_dir(rc);
    ExperimentOptions opts;
    opts.dataset_name = rc.input.stem().string();
    opts.n_folds = rc.folds;
    opts.normalize = rc.normalize;

    std::vector<ExperimentRecord> records;
    std::vector<BenchmarkTable> tables;
    for (const auto& classifier : rc.classifiers) {
        BenchmarkTable table{opts.dataset_name, classifier, {}};
        for (const auto& sampler : benchmark_samplers(rc)) {
            auto recs = run_experiment(ds, sampler, classifier, rc.sampler, opts);
            table.rows.push_back(summarize(recs).front());
            records.insert(records.end(), recs.begin(), recs.end());
        }
        tables.push_back(std::move(table));
    }

    if (wants(rc, "csv")) {
        write_text(rc.out_dir / "results.csv", render_csv(tables));
        write_text(rc.out_dir / "folds.csv", render_folds_csv(records));
    }
    std::string md;
    for (const auto& t : tables) md += render_markdown(t) + "\n";
    if (wants(rc, "markdown")) write_text(rc.out_dir / "results.md", md);
    if (wants(rc, "json")) {
        json j;
        j["manifest"] = manifest(rc);
        j["tables"] = json::array();
        for (const auto& t : tables) {
            json rows = json::array();
            for (const auto& r : t.rows) rows.push_back(summary_json(r));
            j["tables"].push_back({{"dataset", t.dataset}, {"classifier", t.classifier}, {"rows", rows}});
        }
        write_text(rc.out_dir / "results.json", j.dump(2) + "\n");
    }
    write_manifest(rc);
    out << md;
    return tables;
}

std::vector<TimingEntry> cmd_timing(const RunConfig& rc, std::ostream& out) {
    rc.validate();
    const Dataset ds = load_input(rc);
    prepare_out_dir(rc);
    TimingOptions opts;
    opts.repeats = rc.repeats;
    opts.n_folds = rc.folds;
    const auto entries = timing_scan(ds, rc.samplers, rc.sizes, rc.sampler, opts);

    std::ostringstream csv;
    csv << "sampler,size,seconds,log10_seconds\n";
    char buf[64];
    for (const auto& e : entries) {
        std::snprintf(buf, sizeof buf, "%.6f,%.6f", e.seconds, std::log10(std::max(e.seconds, 1e-6)));
        csv << e.sampler << ',' << e.size << ',' << buf << '\n';
    }

    std::ostringstream proj;
    proj << "sampler,target_size,slope_s_per_row,intercept_s,projected_seconds\n";
    std::ostringstream md;
    md << "Sampling time per fold (s), median of " << rc.repeats << " runs, mean over " << rc.folds << " folds\n\n";
    md << "| Sampling Method |";
    for (auto s : rc.sizes) md << ' ' << s << " |";
    md << " Projected " << rc.project_to << " |\n|---|";
    for (std::size_t i = 0; i <= rc.sizes.size(); ++i) md << "---:|";
    md << '\n';
    for (const auto& id : rc.samplers) {
        std::vector<double> x;
        std::vector<double> y;
        md << "| " << display_name(id) << " |";
        for (const auto& e : entries) {
            if (e.sampler != id) continue;
            x.push_back(static_cast<double>(e.size));
            y.push_back(e.seconds);
            md << ' ' << format_seconds(e.seconds) << " |";
        }
        const auto fit = fit_line(x, y);
        const double projected = fit.at(static_cast<double>(rc.project_to));
        std::snprintf(buf, sizeof buf, "%.9g,%.6f,%.3f", fit.slope, fit.intercept, projected);
        proj << id << ',' << rc.project_to << ',' << buf << '\n';
        md << ' ' << format_seconds(projected) << " |\n";
    }

    if (wants(rc, "csv")) {
        write_text(rc.out_dir / "timing.csv", csv.str());
        write_text(rc.out_dir / "projection.csv", proj.str());
    }
    if (wants(rc, "markdown")) write_text(rc.out_dir / "timing.md", md.str());
    if (wants(rc, "json")) {
        json j;
        j["manifest"] = manifest(rc);
        j["entries"] = json::array();
        for (const auto& e : entries) j["entries"].push_back({{"sampler", e.sampler}, {"size", e.size}, {"seconds", e.seconds}});
        write_text(rc.out_dir / "timing.json", j.dump(2) + "\n");
    }
    write_manifest(rc);
    out << md.str();
    return entries;
}

std::string format_percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", 100.0 * fraction);
    return buf;
}

std::string format_seconds(double seconds) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", seconds);
    return buf;
}

std::string render_markdown(const BenchmarkTable& table) {
    std::ostringstream md;
    const std::size_t folds = table.rows.empty() ? 0 : table.rows.front().folds;
    md << "### " << table.dataset << " / " << table.classifier << "\n\n";
    md << "Metrics in percent; times are per-fold means over " << folds << " folds.\n\n|";
    for (const auto& c : kColumns) md << ' ' << c << " |";
    md << "\n|---|";
    for (std::size_t i = 1; i < kColumns.size(); ++i) md << "---:|";
    md << '\n';
    for (const auto& r : table.rows) {
        md << '|';
        for (const auto& cell : row_cells(r)) md << ' ' << cell << " |";
        md << '\n';
    }
    return md.str();
}

std::string render_csv(const std::vector<BenchmarkTable>& tables) {
    std::ostringstream csv;
    csv << "Dataset,Classifier";
    for (const auto& c : kColumns) csv << ',' << csv_cell(c);
    csv << '\n';
    for (const auto& t : tables) {
        for (const auto& r : t.rows) {
            csv << csv_cell(t.dataset) << ',' << csv_cell(t.classifier);
            for (const auto& cell : row_cells(r)) csv << ',' << csv_cell(cell);
            csv << '\n';
        }
    }
    return csv.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Class-imbalance oversampling toolkit", "rebalance"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    RunConfig rc;
    std::optional<double> de;
    std::optional<double> floor;
    std::string search = "metric_tree";
    std::string sampler;
    std::vector<std::string> sampler_list;
    std::vector<std::string> classifier_list;
    std::vector<std::string> format_list;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--in", rc.input, "input CSV with a header row")->required();
        sub->add_option("--label", rc.label, "label column name or zero-based index")->capture_default_str();
        sub->add_option("--threads", rc.threads, "worker threads (default: REBALANCE_THREADS or all cores)");
        sub->add_flag("--normalize", rc.normalize, "min-max scale features (balance: whole input; benchmark, timing: per train split)");
        sub->add_option("--out-dir", rc.out_dir, "output directory")->capture_default_str();
        sub->add_option("--format", format_list, "output formats: csv, markdown, json (comma separated)");
        add_sampler_options(*sub, rc.sampler, de, floor, search);
    };

    auto* balance = app.add_subcommand("balance", "oversample every class to the majority count");
    common(balance);
    balance->add_option("--sampler", sampler, "sampler id")->required();
    balance->add_option("--out-file", rc.out_file, "output CSV name inside --out-dir")->capture_default_str();

    auto* benchmark = app.add_subcommand("benchmark", "cross-validated sampler and classifier comparison");
    common(benchmark);
    benchmark->add_option("--samplers,--sampler", sampler_list, "sampler ids (comma separated)")->required();
    benchmark->add_option("--classifiers,--classifier", classifier_list,
                          "gaussian_nb, nearest_centroid (default: gaussian_nb)");
    benchmark->add_option("--folds", rc.folds, "cross-validation folds")->capture_default_str();

    auto* timing = app.add_subcommand("timing", "sampling time over increasing stratified subsets");
    common(timing);
    timing->add_option("--samplers,--sampler", sampler_list, "sampler ids (comma separated)")->required();
    std::vector<std::string> size_list;
    timing->add_option("--sizes", size_list, "ascending row counts (comma separated)")->required();
    timing->add_option("--folds", rc.folds, "folds per subset; times are per-fold means")->capture_default_str();
    timing->add_option("--repeats", rc.repeats, "runs per point; the median is reported")->capture_default_str();
    timing->add_option("--project-to", rc.project_to, "size for the linear-regression projection")
        ->capture_default_str();

    auto* replay = app.add_subcommand("replay", "rerun a manifest.json");
    std::filesystem::path manifest_path;
    std::filesystem::path replay_out;
    replay->add_option("manifest", manifest_path, "manifest.json written by an earlier run")->required();
    replay->add_option("--out-dir", replay_out, "output directory (default: the manifest's directory)");

    auto* list = app.add_subcommand("samplers", "list samplers and their components");
    bool list_json = false;
    list->add_flag("--json", list_json, "print JSON");

    std::vector<std::string> argv{"rebalance"};
    argv.insert(argv.end(), args.begin(), args.end());
    std::vector<const char*> cargs;
    for (const auto& a : argv) cargs.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*list) {
            print_samplers(out, list_json);
            return kOk;
        }
        if (*replay) {
            std::ifstream in(manifest_path);
            if (!in) throw ConfigError("cannot open manifest " + manifest_path.string());
            json j;
            try {
                in >> j;
            } catch (const json::exception& e) {
                throw ConfigError(std::string("malformed manifest: ") + e.what());
            }
            RunConfig replayed = from_manifest(j);
            replayed.out_dir = replay_out.empty() ? manifest_path.parent_path() : replay_out;
            if (replayed.out_dir.empty()) replayed.out_dir = ".";
            return dispatch(replayed, out);
        }
        if (de) rc.sampler.density_exponent_de = de;
        if (floor) rc.sampler.nras_propensity_floor = floor;
        rc.sampler.search = search == "brute_force" ? SearchStrategy::brute_force : SearchStrategy::metric_tree;
        if (!format_list.empty()) {
            rc.formats.clear();
            for (auto f : split_list(format_list)) rc.formats.push_back(f == "md" ? "markdown" : f);
        }
        if (*balance) {
            rc.command = "balance";
            rc.samplers = {sampler};
        } else {
            rc.command = *benchmark ? "benchmark" : "timing";
            rc.samplers = split_list(sampler_list);
            if (!classifier_list.empty()) rc.classifiers = split_list(classifier_list);
            for (const auto& s : split_list(size_list)) {
                if (!all_digits(s)) throw ConfigError("invalid size '" + s + "'");
                rc.sizes.push_back(static_cast<std::size_t>(std::stoull(s)));
            }
        }
        return dispatch(rc, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const DataError& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternalError;
    }
}

}  // namespace rebalance::cli
