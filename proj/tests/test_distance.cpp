#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "exnrule/distance.hpp"
#include "exnrule/error.hpp"
#include "oracles.hpp"

using namespace exn;

namespace {

Dataset line_data(std::vector<double> xs) {
    std::vector<Label> y(xs.size() - 1, 0);
    y.push_back(1);
    return Dataset(std::move(xs), std::move(y), {"x"});
}

} // namespace

TEST(Minkowski, Examples) {
    const std::vector<double> a{0, 0}, b{3, 4};
    EXPECT_DOUBLE_EQ(minkowski(a, b, DistanceMetric(2)), 5.0);
    EXPECT_DOUBLE_EQ(minkowski(a, b, DistanceMetric(1)), 7.0);
    // (27 + 64)^(1/3) evaluated in extended precision.
    const long double expected = std::cbrt(91.0L);
    EXPECT_NEAR(minkowski(a, b, DistanceMetric(3)), static_cast<double>(expected), 1e-14);
    EXPECT_EQ(minkowski(a, a, DistanceMetric(3)), 0.0);
}

TEST(Minkowski, Errors) {
    const std::vector<double> a{0, 0}, b{1};
    EXPECT_THROW(minkowski(a, b, DistanceMetric()), Error);
    EXPECT_THROW(minkowski({}, {}, DistanceMetric()), Error);
    EXPECT_THROW(DistanceMetric(0.5), Error);
}

TEST(Minkowski, SymmetryAndTriangleInequality) {
    RngStream rng(31, 0);
    for (int t = 0; t < 2000; ++t) {
        const DistanceMetric m(1.0 + 3.0 * rng.uniform());
        const std::size_t p = 1 + rng.uniform_index(6);
        std::vector<double> a(p), b(p), c(p);
        for (std::size_t j = 0; j < p; ++j) {
            a[j] = rng.normal(0, 5);
            b[j] = rng.normal(0, 5);
            c[j] = rng.normal(0, 5);
        }
        ASSERT_EQ(minkowski(a, b, m), minkowski(b, a, m));
        ASSERT_LE(minkowski(a, c, m), minkowski(a, b, m) + minkowski(b, c, m) + 1e-9);
    }
}

TEST(NearestInPool, UniqueMinimum) {
    const auto d = line_data({1, 2, 10});
    const std::vector<std::size_t> feats{0}, pool{0, 1, 2};
    const std::vector<double> q{0};
    const auto hit = nearest_in_pool(pool, ProjectedView(d, feats), q, DistanceMetric());
    EXPECT_EQ(hit.row, 0u);
    EXPECT_EQ(hit.position, 0u);
    EXPECT_DOUBLE_EQ(hit.distance, 1.0);
}

TEST(NearestInPool, TieGoesToEarlierPosition) {
    const auto d = line_data({5, 1, 9});
    const std::vector<std::size_t> feats{0}, pool{2, 1, 1};  // row 1 duplicated by a bootstrap
    const std::vector<double> q{0};
    const auto hit = nearest_in_pool(pool, ProjectedView(d, feats), q, DistanceMetric());
    EXPECT_EQ(hit.position, 1u);
    EXPECT_EQ(hit.row, 1u);
}

TEST(NearestInPool, EmptyPool) {
    const auto d = line_data({1, 2});
    const std::vector<std::size_t> feats{0}, pool{};
    const std::vector<double> q{0};
    try {
        nearest_in_pool(pool, ProjectedView(d, feats), q, DistanceMetric());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyPool);
    }
}

TEST(NearestInPool, MatchesExhaustiveArgmin) {
    RngStream rng(17, 0);
    for (int t = 0; t < 200; ++t) {
        auto d = oracle::random_dataset(rng, 20, 3, t % 2 == 0);
        const std::vector<std::size_t> feats{0, 1, 2};
        std::vector<std::size_t> pool(20);
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        std::vector<double> q{rng.uniform() * 4, rng.uniform() * 4, rng.uniform() * 4};
        const auto hit = nearest_in_pool(pool, ProjectedView(d, feats), q, DistanceMetric());

        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < 20; ++i) {
            const auto r = d.row(i);
            const double dist = oracle::minkowski({r.begin(), r.end()}, q, 2.0);
            if (dist < best_d) best_d = dist, best = i;
        }
        ASSERT_EQ(hit.row, best);
        ASSERT_EQ(hit.distance, best_d);
    }
}

TEST(NearestInPool, ScalingScalesDistanceOnly) {
    RngStream rng(19, 0);
    for (int t = 0; t < 100; ++t) {
        auto d = oracle::random_dataset(rng, 15, 3, false);
        const double c = 0.5 + 4.0 * rng.uniform();
        std::vector<double> scaled(d.features().begin(), d.features().end());
        for (auto& v : scaled) v *= c;
        const Dataset ds(scaled, {d.labels().begin(), d.labels().end()}, d.feature_names());
        const std::vector<std::size_t> feats{0, 2};
        std::vector<std::size_t> pool(15);
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        const std::vector<double> q{rng.uniform(), rng.uniform()};
        const std::vector<double> qs{q[0] * c, q[1] * c};
        const auto a = nearest_in_pool(pool, ProjectedView(d, feats), q, DistanceMetric());
        const auto b = nearest_in_pool(pool, ProjectedView(ds, feats), qs, DistanceMetric());
        ASSERT_EQ(a.row, b.row);
        ASSERT_NEAR(b.distance, c * a.distance, 1e-12 * (1 + b.distance));
    }
}

TEST(NearestInPool, IgnoresEntriesOtherThanTheArgmin) {
    const auto d = line_data({3, 1, 8, 20, -30});
    const std::vector<std::size_t> feats{0};
    const std::vector<double> q{0.9};
    const std::vector<std::size_t> a{0, 1, 2}, b{3, 1, 4, 2};
    EXPECT_EQ(nearest_in_pool(a, ProjectedView(d, feats), q, DistanceMetric()).row, 1u);
    EXPECT_EQ(nearest_in_pool(b, ProjectedView(d, feats), q, DistanceMetric()).row, 1u);
}
