// Brute-force reference implementations used only by the tests. They share no
// code with the library beyond the Dataset container.
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "exnrule/dataset.hpp"
#include "exnrule/rng.hpp"

namespace oracle {

inline double minkowski(const std::vector<double>& a, const std::vector<double>& b, double q) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        s += q == 2.0 ? d * d : q == 1.0 ? std::fabs(d) : std::pow(std::fabs(d), q);
    }
    return q == 2.0 ? std::sqrt(s) : q == 1.0 ? s : std::pow(s, 1.0 / q);
}

struct Chain {
    std::vector<std::size_t> positions;
    std::vector<std::size_t> rows;
    std::vector<exn::Label> labels;
    std::vector<double> hops;
};

// Full (pool + query) distance matrix, then greedy walk; lowest position wins ties.
inline Chain greedy_chain(const exn::Dataset& train, const std::vector<std::size_t>& pool,
                          const std::vector<std::size_t>& features, const std::vector<double>& query_projected,
                          std::size_t k, double q) {
    const std::size_t m = pool.size();
    std::vector<std::vector<double>> pts(m + 1);
    pts[0] = query_projected;
    for (std::size_t i = 0; i < m; ++i)
        for (auto j : features) pts[i + 1].push_back(train.value(pool[i], j));
    std::vector<std::vector<double>> dist(m + 1, std::vector<double>(m + 1));
    for (std::size_t a = 0; a <= m; ++a)
        for (std::size_t b = 0; b <= m; ++b) dist[a][b] = minkowski(pts[b], pts[a], q);

    Chain c;
    std::vector<bool> used(m, false);
    std::size_t current = 0;  // matrix index; 0 is the query
    for (std::size_t step = 0; step < k; ++step) {
        std::size_t best = m;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            if (used[i]) continue;
            if (best == m || dist[current][i + 1] < best_d) {
                best = i;
                best_d = dist[current][i + 1];
            }
        }
        used[best] = true;
        c.positions.push_back(best);
        c.rows.push_back(pool[best]);
        c.labels.push_back(train.label(pool[best]));
        c.hops.push_back(best_d);
        current = best + 1;
    }
    return c;
}

// Label of the closest training row; earliest row wins ties.
inline exn::Label one_nn(const exn::Dataset& train, const std::vector<double>& query, double q = 2.0) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < train.n(); ++i) {
        const auto r = train.row(i);
        const double d = minkowski(std::vector<double>(r.begin(), r.end()), query, q);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return train.label(best);
}

// Random dataset with both classes; `integer_grid` makes distance ties likely.
inline exn::Dataset random_dataset(exn::RngStream& rng, std::size_t n, std::size_t p, bool integer_grid) {
    std::vector<double> f;
    std::vector<exn::Label> y;
    for (std::size_t i = 0; i < n * p; ++i)
        f.push_back(integer_grid ? static_cast<double>(rng.uniform_index(4)) : rng.uniform() * 10.0 - 5.0);
    for (std::size_t i = 0; i < n; ++i) y.push_back(static_cast<exn::Label>(rng.uniform_index(2)));
    y[0] = 0;
    y[n - 1] = 1;
    return exn::Dataset(std::move(f), std::move(y), exn::default_feature_names(p));
}

} // namespace oracle

namespace oracle {

// Elongated two-class layout around a query at the origin: a grey blob (label 0)
// hugging the query and a green filament (label 1) that starts at the query's
// nearest neighbour and runs away along +x in steps of 0.5.
struct FilamentLayout {
    exn::Dataset train;
    std::vector<double> query;
};

inline FilamentLayout filament_layout() {
    const std::vector<std::pair<double, double>> green{{0.9, 0}, {1.4, 0}, {1.9, 0}, {2.4, 0}, {2.9, 0}, {3.4, 0}};
    const std::vector<std::pair<double, double>> grey{{0, 1.0},    {-1.05, 0},   {0, -1.1},  {-1.6, 0.5},
                                                      {-1.5, -0.6}, {-2.0, 0.1}, {-0.9, 1.4}};
    std::vector<double> f;
    std::vector<exn::Label> y;
    for (auto [x, z] : grey) f.push_back(x), f.push_back(z), y.push_back(0);
    for (auto [x, z] : green) f.push_back(x), f.push_back(z), y.push_back(1);
    return {exn::Dataset(std::move(f), std::move(y), {"x", "y"}), {0.0, 0.0}};
}

} // namespace oracle
