#include "exnrule/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "exnrule/error.hpp"

namespace exn {

MatrixView::MatrixView(std::span<const double> data, std::size_t rows, std::size_t cols)
    : data_(data), rows_(rows), cols_(cols) {
    if (data.size() != rows * cols)
        throw Error(ErrorCode::DimensionMismatch, "matrix buffer does not match rows x cols");
}

Dataset::Dataset(std::vector<double> features, std::vector<Label> labels,
                 std::vector<std::string> feature_names)
    : features_(std::move(features)), labels_(std::move(labels)), names_(std::move(feature_names)) {
    if (names_.empty()) throw Error(ErrorCode::ConfigInvalid, "dataset needs at least one feature");
    if (labels_.empty()) throw Error(ErrorCode::ConfigInvalid, "dataset needs at least one row");
    if (features_.size() != labels_.size() * names_.size())
        throw Error(ErrorCode::DimensionMismatch,
                    "feature buffer holds " + std::to_string(features_.size()) + " values, expected " +
                        std::to_string(labels_.size() * names_.size()));
    for (std::size_t i = 0; i < features_.size(); ++i) {
        if (!std::isfinite(features_[i]))
            throw Error(ErrorCode::MissingValue, "non-finite value at row " +
                                                     std::to_string(i / names_.size()) + ", column " +
                                                     std::to_string(i % names_.size()));
    }
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] > 1)
            throw Error(ErrorCode::NonBinaryLabel, "label " + std::to_string(labels_[i]) +
                                                       " at row " + std::to_string(i));
    }
}

std::size_t Dataset::count_class(Label c) const noexcept {
    return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), c));
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
    std::vector<double> f;
    f.reserve(rows.size() * p());
    std::vector<Label> y;
    y.reserve(rows.size());
    for (std::size_t r : rows) {
        if (r >= n()) throw Error(ErrorCode::DimensionMismatch, "row index out of range");
        auto src = row(r);
        f.insert(f.end(), src.begin(), src.end());
        y.push_back(labels_[r]);
    }
    return Dataset(std::move(f), std::move(y), names_);
}

std::vector<std::string> default_feature_names(std::size_t p) {
    std::vector<std::string> names;
    names.reserve(p);
    for (std::size_t j = 0; j < p; ++j) names.push_back("f" + std::to_string(j + 1));
    return names;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            return out;
        }
        out.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

bool is_missing_token(std::string_view s) {
    return s.empty() || s == "NA" || s == "na" || s == "NaN" || s == "nan" || s == "?";
}

std::string where(const std::string& source, std::size_t line, std::size_t col) {
    return source + ":" + std::to_string(line) + ", column " + std::to_string(col + 1);
}

} // namespace

Dataset parse_csv(const std::string& text, const std::string& label_column,
                  const std::string& source) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;

    std::vector<std::string_view> header;
    std::string header_line;
    while (std::getline(in, header_line)) {
        ++line_no;
        if (!trim(header_line).empty()) break;
    }
    if (trim(header_line).empty()) throw Error(ErrorCode::ParseError, source + ": missing header row");
    header = split_fields(header_line);
    if (header.size() < 2)
        throw Error(ErrorCode::ParseError, source + ": need at least one feature and one label column");

    std::size_t label_idx = header.size() - 1;
    if (!label_column.empty()) {
        auto it = std::find(header.begin(), header.end(), std::string_view(label_column));
        if (it == header.end())
            throw Error(ErrorCode::ParseError, source + ": no column named '" + label_column + "'");
        label_idx = static_cast<std::size_t>(it - header.begin());
    }
    std::vector<std::string> names;
    for (std::size_t j = 0; j < header.size(); ++j)
        if (j != label_idx) names.emplace_back(header[j]);

    std::vector<double> features;
    std::vector<Label> labels;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != header.size())
            throw Error(ErrorCode::ParseError, source + ":" + std::to_string(line_no) + ": expected " +
                                                   std::to_string(header.size()) + " fields, got " +
                                                   std::to_string(fields.size()));
        for (std::size_t j = 0; j < fields.size(); ++j) {
            const auto cell = fields[j];
            if (is_missing_token(cell))
                throw Error(ErrorCode::MissingValue, where(source, line_no, j));
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            const bool parsed = ec == std::errc() && ptr == cell.data() + cell.size();
            if (j == label_idx) {
                if (!parsed || (v != 0.0 && v != 1.0))
                    throw Error(ErrorCode::NonBinaryLabel,
                                where(source, line_no, j) + ": '" + std::string(cell) + "'");
                labels.push_back(static_cast<Label>(v));
            } else {
                if (!parsed)
                    throw Error(ErrorCode::ParseError,
                                where(source, line_no, j) + ": '" + std::string(cell) + "'");
                if (std::isnan(v)) throw Error(ErrorCode::MissingValue, where(source, line_no, j));
                if (!std::isfinite(v))
                    throw Error(ErrorCode::ParseError, where(source, line_no, j) + ": non-finite value");
                features.push_back(v);
            }
        }
    }
    if (labels.size() < 2)
        throw Error(ErrorCode::ParseError, source + ": need at least two data rows");
    return Dataset(std::move(features), std::move(labels), std::move(names));
}

Dataset load_csv(const std::filesystem::path& path, const std::string& label_column) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), label_column, path.string());
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    for (const auto& name : data.feature_names()) out << name << ',';
    out << "class\n";
    char buf[64];
    for (std::size_t i = 0; i < data.n(); ++i) {
        for (double v : data.row(i)) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << buf << ',';
        }
        out << static_cast<int>(data.label(i)) << '\n';
    }
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

std::vector<std::size_t> random_permutation(std::size_t n, RngStream& rng) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform_index(i));
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

std::uint64_t partition_hash(std::span<const std::size_t> train_rows,
                             std::span<const std::size_t> test_rows) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    auto feed = [&h](std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xFF;
            h *= 0x100000001B3ULL;
        }
    };
    for (auto r : train_rows) feed(r);
    feed(~std::uint64_t{0});
    for (auto r : test_rows) feed(r);
    return h;
}

Split train_test_split(const Dataset& data, double train_fraction, RngStream rng) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw Error(ErrorCode::ConfigInvalid, "train_fraction must lie in (0, 1)");
    const auto n = data.n();
    const auto n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n)));
    if (n_train < 2 || n_train >= n)
        throw Error(ErrorCode::DegenerateSplit,
                    "train_fraction " + std::to_string(train_fraction) + " on n=" + std::to_string(n) +
                        " leaves " + std::to_string(n_train) + " training rows");

    for (int attempt = 0; attempt < kMaxSplitAttempts; ++attempt) {
        auto perm = random_permutation(n, rng);
        bool seen[2] = {false, false};
        for (std::size_t i = 0; i < n_train; ++i) seen[data.label(perm[i])] = true;
        if (!(seen[0] && seen[1])) continue;

        Split s;
        s.train_rows.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
        s.test_rows.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
        s.train = data.select_rows(s.train_rows);
        s.test = data.select_rows(s.test_rows);
        s.partition_hash = partition_hash(s.train_rows, s.test_rows);
        return s;
    }
    throw Error(ErrorCode::DegenerateSplit, "training part lacked a class after " +
                                                std::to_string(kMaxSplitAttempts) + " attempts");
}

std::vector<std::size_t> draw_feature_subset(std::size_t p, std::size_t p_prime, RngStream& rng) {
    if (p_prime < 1 || p_prime > p)
        throw Error(ErrorCode::InvalidSubsetSize,
                    "p'=" + std::to_string(p_prime) + " outside [1, " + std::to_string(p) + "]");
    // Partial Fisher-Yates: the first p_prime slots are a uniform draw without replacement.
    std::vector<std::size_t> idx(p);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < p_prime; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.uniform_index(p - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(p_prime);
    std::sort(idx.begin(), idx.end());
    return idx;
}

BaseLearnerSample draw_base_learner_sample(std::size_t n_train, std::size_t p, std::size_t p_prime,
                                           RngStream rng) {
    if (n_train < 1) throw Error(ErrorCode::ConfigInvalid, "n_train must be positive");
    if (p_prime < 1 || p_prime > p)
        throw Error(ErrorCode::InvalidSubsetSize,
                    "p'=" + std::to_string(p_prime) + " outside [1, " + std::to_string(p) + "]");
    BaseLearnerSample s;
    s.row_indices.resize(n_train);
    for (auto& r : s.row_indices) r = static_cast<std::size_t>(rng.uniform_index(n_train));
    s.feature_indices = draw_feature_subset(p, p_prime, rng);
    return s;
}

Standardizer Standardizer::fit(const Dataset& train) {
    Standardizer z;
    const auto n = train.n();
    const auto p = train.p();
    z.mean_.assign(p, 0.0);
    z.sd_.assign(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += train.value(i, j);
        const double mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = train.value(i, j) - mean;
            ss += d * d;
        }
        z.mean_[j] = mean;
        z.sd_[j] = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    }
    return z;
}

Dataset Standardizer::apply(const Dataset& data) const {
    if (data.p() != mean_.size())
        throw Error(ErrorCode::DimensionMismatch, "standardizer fitted on a different feature count");
    std::vector<double> f(data.features().begin(), data.features().end());
    const auto p = data.p();
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto j = i % p;
        f[i] -= mean_[j];
        if (sd_[j] > 0.0) f[i] /= sd_[j];
    }
    return Dataset(std::move(f), std::vector<Label>(data.labels().begin(), data.labels().end()),
                   data.feature_names());
}

} // namespace exn
