#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "exnrule/rng.hpp"

namespace exn {

using Label = std::uint8_t;

// Non-owning row-major view of an n x p matrix.
class MatrixView {
public:
    MatrixView() = default;
    MatrixView(std::span<const double> data, std::size_t rows, std::size_t cols);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::span<const double> row(std::size_t i) const noexcept {
        return data_.subspan(i * cols_, cols_);
    }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

private:
    std::span<const double> data_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
};

/**
 * Tabular binary-classification data: an n x p matrix of finite reals with a
 * {0,1} label per row. Immutable once constructed.
 */
class Dataset {
public:
    Dataset() = default;

    // Validates shape, finiteness and label range; throws Error otherwise.
    Dataset(std::vector<double> features, std::vector<Label> labels,
            std::vector<std::string> feature_names);

    std::size_t n() const noexcept { return labels_.size(); }
    std::size_t p() const noexcept { return names_.size(); }

    std::span<const double> row(std::size_t i) const noexcept {
        return std::span<const double>(features_).subspan(i * p(), p());
    }
    double value(std::size_t i, std::size_t j) const noexcept { return features_[i * p() + j]; }
    Label label(std::size_t i) const noexcept { return labels_[i]; }

    std::span<const double> features() const noexcept { return features_; }
    std::span<const Label> labels() const noexcept { return labels_; }
    const std::vector<std::string>& feature_names() const noexcept { return names_; }
    MatrixView matrix() const noexcept { return {features_, n(), p()}; }

    std::size_t count_class(Label c) const noexcept;
    bool has_both_classes() const noexcept { return count_class(0) > 0 && count_class(1) > 0; }

    // Rows in the given order (duplicates allowed).
    Dataset select_rows(std::span<const std::size_t> rows) const;

    bool operator==(const Dataset&) const = default;

private:
    std::vector<double> features_;
    std::vector<Label> labels_;
    std::vector<std::string> names_;
};

// Default feature names f1..fp.
std::vector<std::string> default_feature_names(std::size_t p);

/**
 * Reads a comma-separated file with a mandatory header row. The label column
 * is selected by name, or the last column when `label_column` is empty.
 */
Dataset load_csv(const std::filesystem::path& path, const std::string& label_column = {});

// Parses CSV text; `source` only appears in error messages.
Dataset parse_csv(const std::string& text, const std::string& label_column = {},
                  const std::string& source = "<memory>");

// Writes `data` with its feature names plus a trailing "class" column.
// Values are printed with 17 significant digits, so load_csv reads them back exactly.
void write_csv(const Dataset& data, const std::filesystem::path& path);

struct Split {
    Dataset train;
    Dataset test;
    std::vector<std::size_t> train_rows;  // indices into the input
    std::vector<std::size_t> test_rows;
    std::uint64_t partition_hash = 0;
};

inline constexpr int kMaxSplitAttempts = 100;

/**
 * Simple random (non-stratified) split: shuffles row indices and takes the
 * first floor(train_fraction * n) as training rows. Reshuffles, continuing
 * on the same stream, until the training part holds both classes; gives up
 * with DegenerateSplit after kMaxSplitAttempts.
 */
Split train_test_split(const Dataset& data, double train_fraction, RngStream rng);

// FNV-1a over the train indices, a separator, then the test indices.
std::uint64_t partition_hash(std::span<const std::size_t> train_rows,
                             std::span<const std::size_t> test_rows);

struct BaseLearnerSample {
    std::vector<std::size_t> row_indices;      // bootstrap multiset, size n_train
    std::vector<std::size_t> feature_indices;  // strictly increasing, size p'

    bool operator==(const BaseLearnerSample&) const = default;
};

// p_prime distinct indices from [0, p), returned sorted.
std::vector<std::size_t> draw_feature_subset(std::size_t p, std::size_t p_prime, RngStream& rng);

// Bootstrap of n_train rows (with replacement) followed by a feature subset.
BaseLearnerSample draw_base_learner_sample(std::size_t n_train, std::size_t p, std::size_t p_prime,
                                           RngStream rng);

// Uniform random permutation of 0..n-1 (Fisher-Yates, from the top down).
std::vector<std::size_t> random_permutation(std::size_t n, RngStream& rng);

/// Per-feature z-score transform, fitted on training data only.
class Standardizer {
public:
    static Standardizer fit(const Dataset& train);

    // Constant columns are centred but not rescaled.
    Dataset apply(const Dataset& data) const;

    std::span<const double> means() const noexcept { return mean_; }
    std::span<const double> sds() const noexcept { return sd_; }

private:
    std::vector<double> mean_;
    std::vector<double> sd_;
};

} // namespace exn
