#pragma once

#include <cstddef>
#include <span>

#include "exnrule/dataset.hpp"

namespace exn {

// Minkowski distance with exponent q >= 1; q = 2 is Euclidean.
class DistanceMetric {
public:
    DistanceMetric() = default;
    explicit DistanceMetric(double q);

    double q() const noexcept { return q_; }

    // Contribution of one coordinate difference, |d|^q.
    double term(double d) const noexcept;
    // Maps an accumulated sum of terms back to a distance, s^(1/q).
    double finish(double s) const noexcept;

    bool operator==(const DistanceMetric&) const = default;

private:
    double q_ = 2.0;
};

// (sum_j |a_j - b_j|^q)^(1/q). Throws DimensionMismatch on unequal or zero length.
double minkowski(std::span<const double> a, std::span<const double> b, const DistanceMetric& metric);

/**
 * Rows of a Dataset seen through a feature subset. Rows are addressed by
 * their index in the underlying dataset; coordinates are gathered on the fly.
 */
class ProjectedView {
public:
    ProjectedView(const Dataset& data, std::span<const std::size_t> feature_indices);

    std::size_t dims() const noexcept { return features_.size(); }
    const Dataset& data() const noexcept { return *data_; }
    std::span<const std::size_t> feature_indices() const noexcept { return features_; }

    // Distance between training row `row` and a query already projected to dims().
    double distance(std::size_t row, std::span<const double> query,
                    const DistanceMetric& metric) const noexcept;
    // Distance between two training rows.
    double distance(std::size_t row_a, std::size_t row_b, const DistanceMetric& metric) const noexcept;

    std::vector<double> project(std::span<const double> full_row) const;

private:
    const Dataset* data_;
    std::span<const std::size_t> features_;
};

struct PoolHit {
    std::size_t position;  // index into the pool
    std::size_t row;       // pool[position]
    double distance;
};

/**
 * Closest pool entry to `query` by linear scan. `pool` lists dataset row
 * indices and may repeat rows. On exact distance ties the earliest pool
 * position wins.
 */
PoolHit nearest_in_pool(std::span<const std::size_t> pool, const ProjectedView& view,
                        std::span<const double> query, const DistanceMetric& metric);

// Same search with the previous chain element (a dataset row) as the anchor.
PoolHit nearest_in_pool_to_row(std::span<const std::size_t> pool, const ProjectedView& view,
                               std::size_t anchor_row, const DistanceMetric& metric);

} // namespace exn
