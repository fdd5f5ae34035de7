#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "exnrule/feature_rule.hpp"
#include "exnrule/metrics.hpp"

namespace exn::bench {

inline constexpr const char* kVersion = "1.0.0";

enum class Method { ExNRule, Knn, Wknn, Rknn };

std::string to_string(Method m);
Method parse_method(const std::string& name);  // throws ConfigInvalid

// A built-in scenario id (S1..S6) or a CSV file.
struct DatasetSource {
    std::string name;
    std::optional<std::string> scenario;
    std::optional<std::filesystem::path> csv;

    // "S3" -> scenario; "name=path.csv" or "path.csv" -> CSV (name defaults to the file stem).
    static DatasetSource parse(const std::string& token);
    std::string to_string() const;
};

struct ExperimentConfig {
    std::vector<DatasetSource> datasets;
    std::vector<Method> methods{Method::ExNRule, Method::Knn, Method::Wknn, Method::Rknn};
    std::size_t repetitions = 50;
    double train_fraction = 0.7;
    std::size_t ensemble_size = 500;
    std::vector<std::size_t> k_values{3};
    bool tune = false;
    std::uint64_t master_seed = 1;
    bool scale = false;
    FeatureRule feature_rule = FeatureRule::sqrt_p();
    double minkowski_q = 2.0;
    std::string label_column;
    std::filesystem::path output_dir;  // empty: nothing is written
    unsigned threads = 0;              // 0: one per hardware thread

    void validate() const;

    // Everything that influences emitted numbers, one "key=value" per line.
    // Excludes threads and output_dir.
    std::string canonical() const;
    std::uint64_t hash() const;

    // Applies one key/value pair from a config file or an override.
    void set(const std::string& key, const std::string& value);
};

/// Flat "key = value" file; blank lines and lines starting with '#' are skipped.
ExperimentConfig load_config_file(const std::filesystem::path& path, ExperimentConfig base = {});

struct SummaryRow {
    std::string method;
    std::string dataset;
    std::size_t k = 0;
    std::size_t count = 0;
    double accuracy = 0.0;
    double kappa = 0.0;
    double brier = 0.0;
};

class ResultsTable {
public:
    ResultsTable() = default;
    explicit ResultsTable(std::vector<EvalRecord> records) : records_(std::move(records)) {}

    const std::vector<EvalRecord>& records() const noexcept { return records_; }
    void add(EvalRecord r) { records_.push_back(std::move(r)); }

    // Per (method, dataset, k) means, groups in order of first appearance.
    std::vector<SummaryRow> summary() const;
    std::optional<SummaryRow> find(const std::string& method, const std::string& dataset, std::size_t k) const;

private:
    std::vector<EvalRecord> records_;
};

/**
 * For each dataset and repetition r: draw the split from RngStream(master_seed, r),
 * evaluate every method on that same split, and record accuracy, kappa and
 * Brier score. Built-in scenarios are regenerated per repetition. Results
 * do not depend on the thread count. When output_dir is set, writes
 * results.csv, summary.csv and box_<metric>.{tsv,svg}.
 */
ResultsTable run_experiment(const ExperimentConfig& config);

// '#'-prefixed metadata block shared by every output file.
std::string metadata_header(const ExperimentConfig& config);

void write_results_csv(const ResultsTable& table, const std::filesystem::path& path,
                       const std::string& header = {});
void write_summary_csv(const ResultsTable& table, const std::filesystem::path& path,
                       const std::string& header = {});
ResultsTable read_results_csv(const std::filesystem::path& path);

enum class Metric { Accuracy, Kappa, Brier };
Metric parse_metric(const std::string& name);  // throws UnknownMetric
std::string to_string(Metric m);

// Type-7 (linear interpolation) sample quantile; `sorted` must be ascending and non-empty.
double quantile7(const std::vector<double>& sorted, double prob);

struct BoxStats {
    std::string group;
    double q1 = 0.0, median = 0.0, q3 = 0.0;
    double whisker_low = 0.0, whisker_high = 0.0;  // extreme values within 1.5 IQR of the box
    std::vector<double> outliers;
};

BoxStats box_stats(std::string group, std::vector<double> values);

/**
 * Writes a TSV with one column per (method, dataset, k) group and one row per
 * repetition. When `svg_path` is set, also draws one box per group.
 */
void emit_boxplot_data(const ResultsTable& table, Metric metric, const std::filesystem::path& tsv_path,
                       const std::optional<std::filesystem::path>& svg_path = std::nullopt,
                       const std::string& header = {});

// Writes scenario `id` generated from RngStream(seed, 0) as CSV.
void dump_scenario(const std::string& id, std::uint64_t seed, const std::filesystem::path& path);

} // namespace exn::bench
