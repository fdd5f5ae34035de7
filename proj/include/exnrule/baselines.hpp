#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "exnrule/dataset.hpp"
#include "exnrule/distance.hpp"
#include "exnrule/feature_rule.hpp"
#include "exnrule/voting.hpp"

namespace exn {

struct KnnConfig {
    std::size_t k = 3;
    DistanceMetric metric{};
};

struct Neighbor {
    std::size_t row;
    double distance;
};

// The k rows closest to `query` (already projected onto `features`), ordered
// by (distance, row index).
std::vector<Neighbor> k_nearest(const ProjectedView& view, std::span<const double> query, std::size_t k,
                                const DistanceMetric& metric);

// Plain majority vote; prob is the class-1 fraction, an even split takes the nearest neighbour's label.
Vote knn_predict(const Dataset& train, std::span<const double> query, const KnnConfig& config);

// Inverse-distance weights 1 / (d + kWknnEpsilon).
inline constexpr double kWknnEpsilon = 1e-12;
Vote wknn_predict(const Dataset& train, std::span<const double> query, const KnnConfig& config);

/**
 * Random-subspace kNN ensemble: B plain kNN learners, each restricted to its
 * own feature subset (no row bootstrap). Member b draws its subset from
 * RngStream(master_seed, b).
 */
struct RknnConfig {
    std::size_t ensemble_size = 500;
    std::size_t k = 3;
    FeatureRule feature_rule = FeatureRule::sqrt_p();
    DistanceMetric metric{};
    std::uint64_t master_seed = 0;
};

class RknnModel {
public:
    RknnModel(Dataset train, RknnConfig config, std::vector<std::vector<std::size_t>> subsets);

    const Dataset& train() const noexcept { return train_; }
    const RknnConfig& config() const noexcept { return config_; }
    const std::vector<std::vector<std::size_t>>& feature_subsets() const noexcept { return subsets_; }

private:
    Dataset train_;
    RknnConfig config_;
    std::vector<std::vector<std::size_t>> subsets_;
};

RknnModel rknn_fit(const Dataset& train, const RknnConfig& config);
Vote rknn_predict(const RknnModel& model, std::span<const double> query, unsigned workers = 1);

enum class KnnFamily { Knn, Wknn, Rknn };

std::string to_string(KnnFamily f);
std::optional<KnnFamily> parse_knn_family(const std::string& name);

struct TuneOptions {
    std::vector<std::size_t> grid{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::size_t folds = 5;
    std::uint64_t seed = 0;
    DistanceMetric metric{};
    RknnConfig rknn{};  // template for Rknn tuning; its k is overridden
};

// Cross-validated accuracy for each grid value, in grid order. Grid values
// larger than the smallest fold's training part are scored as -1.
std::vector<double> cv_accuracy(const Dataset& train, KnnFamily learner, const TuneOptions& options);

/**
 * Picks the k with the highest cross-validated accuracy; ties go to the
 * smaller k. Folds come from a seeded permutation: position i of the
 * permutation lands in fold i mod folds.
 */
std::size_t tune_k(const Dataset& train, KnnFamily learner, const TuneOptions& options);

} // namespace exn
