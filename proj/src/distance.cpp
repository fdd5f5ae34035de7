#include "exnrule/distance.hpp"

#include <cmath>

#include "exnrule/error.hpp"

namespace exn {

DistanceMetric::DistanceMetric(double q) : q_(q) {
    if (!(q >= 1.0) || !std::isfinite(q))
        throw Error(ErrorCode::ConfigInvalid, "Minkowski exponent must be a finite q >= 1");
}

double DistanceMetric::term(double d) const noexcept {
    if (q_ == 2.0) return d * d;
    if (q_ == 1.0) return std::fabs(d);
    return std::pow(std::fabs(d), q_);
}

double DistanceMetric::finish(double s) const noexcept {
    if (q_ == 2.0) return std::sqrt(s);
    if (q_ == 1.0) return s;
    return std::pow(s, 1.0 / q_);
}

double minkowski(std::span<const double> a, std::span<const double> b, const DistanceMetric& metric) {
    if (a.size() != b.size() || a.empty())
        throw Error(ErrorCode::DimensionMismatch, "minkowski on vectors of length " +
                                                      std::to_string(a.size()) + " and " +
                                                      std::to_string(b.size()));
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += metric.term(a[j] - b[j]);
    return metric.finish(s);
}

ProjectedView::ProjectedView(const Dataset& data, std::span<const std::size_t> feature_indices)
    : data_(&data), features_(feature_indices) {
    if (features_.empty()) throw Error(ErrorCode::InvalidSubsetSize, "empty feature subset");
    for (auto j : features_)
        if (j >= data.p()) throw Error(ErrorCode::InvalidSubsetSize, "feature index out of range");
}

double ProjectedView::distance(std::size_t row, std::span<const double> query,
                               const DistanceMetric& metric) const noexcept {
    const auto x = data_->row(row);
    double s = 0.0;
    for (std::size_t j = 0; j < features_.size(); ++j) s += metric.term(x[features_[j]] - query[j]);
    return metric.finish(s);
}

double ProjectedView::distance(std::size_t row_a, std::size_t row_b,
                               const DistanceMetric& metric) const noexcept {
    const auto a = data_->row(row_a);
    const auto b = data_->row(row_b);
    double s = 0.0;
    for (auto j : features_) s += metric.term(a[j] - b[j]);
    return metric.finish(s);
}

std::vector<double> ProjectedView::project(std::span<const double> full_row) const {
    if (full_row.size() != data_->p())
        throw Error(ErrorCode::DimensionMismatch, "query has " + std::to_string(full_row.size()) +
                                                      " features, expected " + std::to_string(data_->p()));
    std::vector<double> out;
    out.reserve(features_.size());
    for (auto j : features_) out.push_back(full_row[j]);
    return out;
}

namespace {

template <class DistanceTo>
PoolHit scan_pool(std::span<const std::size_t> pool, DistanceTo&& dist) {
    if (pool.empty()) throw Error(ErrorCode::EmptyPool, "nearest_in_pool on an empty pool");
    PoolHit best{0, pool[0], dist(pool[0])};
    for (std::size_t i = 1; i < pool.size(); ++i) {
        const double d = dist(pool[i]);
        if (d < best.distance) best = {i, pool[i], d};
    }
    return best;
}

} // namespace

PoolHit nearest_in_pool(std::span<const std::size_t> pool, const ProjectedView& view,
                        std::span<const double> query, const DistanceMetric& metric) {
    if (query.size() != view.dims())
        throw Error(ErrorCode::DimensionMismatch, "projected query has " + std::to_string(query.size()) +
                                                      " values, view has " + std::to_string(view.dims()));
    return scan_pool(pool, [&](std::size_t row) { return view.distance(row, query, metric); });
}

PoolHit nearest_in_pool_to_row(std::span<const std::size_t> pool, const ProjectedView& view,
                               std::size_t anchor_row, const DistanceMetric& metric) {
    return scan_pool(pool, [&](std::size_t row) { return view.distance(row, anchor_row, metric); });
}

} // namespace exn
