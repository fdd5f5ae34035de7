#include "exnrule/baselines.hpp"

#include <algorithm>
#include <numeric>

#include "exnrule/error.hpp"
#include "exnrule/parallel.hpp"

namespace exn {

namespace {

std::vector<std::size_t> all_features(std::size_t p) {
    std::vector<std::size_t> idx(p);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return idx;
}

void check_k(std::size_t k, std::size_t n) {
    if (k < 1 || k > n)
        throw Error(ErrorCode::ConfigInvalid, "k=" + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
}

void check_query(const Dataset& train, std::span<const double> query) {
    if (query.size() != train.p())
        throw Error(ErrorCode::DimensionMismatch, "query has " + std::to_string(query.size()) +
                                                      " features, training data has " + std::to_string(train.p()));
}

Vote majority(const Dataset& train, std::span<const Neighbor> nn) {
    std::size_t ones = 0;
    for (const auto& nb : nn) ones += train.label(nb.row);
    const std::size_t zeros = nn.size() - ones;
    Vote v;
    v.prob_class1 = static_cast<double>(ones) / static_cast<double>(nn.size());
    v.label = ones == zeros ? train.label(nn.front().row) : (ones > zeros ? 1 : 0);
    return v;
}

} // namespace

std::vector<Neighbor> k_nearest(const ProjectedView& view, std::span<const double> query, std::size_t k,
                                const DistanceMetric& metric) {
    const auto n = view.data().n();
    check_k(k, n);
    if (query.size() != view.dims())
        throw Error(ErrorCode::DimensionMismatch, "projected query length does not match the view");
    std::vector<Neighbor> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = {i, view.distance(i, query, metric)};
    auto closer = [](const Neighbor& a, const Neighbor& b) {
        return a.distance < b.distance || (a.distance == b.distance && a.row < b.row);
    };
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), closer);
    all.resize(k);
    return all;
}

Vote knn_predict(const Dataset& train, std::span<const double> query, const KnnConfig& config) {
    check_query(train, query);
    const auto features = all_features(train.p());
    const auto nn = k_nearest(ProjectedView(train, features), query, config.k, config.metric);
    return majority(train, nn);
}

Vote wknn_predict(const Dataset& train, std::span<const double> query, const KnnConfig& config) {
    check_query(train, query);
    const auto features = all_features(train.p());
    const auto nn = k_nearest(ProjectedView(train, features), query, config.k, config.metric);
    double mass[2] = {0.0, 0.0};
    for (const auto& nb : nn) mass[train.label(nb.row)] += 1.0 / (nb.distance + kWknnEpsilon);
    Vote v;
    v.prob_class1 = mass[1] / (mass[0] + mass[1]);
    v.label = mass[0] == mass[1] ? train.label(nn.front().row) : (mass[1] > mass[0] ? 1 : 0);
    return v;
}

RknnModel::RknnModel(Dataset train, RknnConfig config, std::vector<std::vector<std::size_t>> subsets)
    : train_(std::move(train)), config_(std::move(config)), subsets_(std::move(subsets)) {
    if (config_.ensemble_size < 1) throw Error(ErrorCode::ConfigInvalid, "ensemble size must be >= 1");
    if (config_.k < 1 || config_.k > train_.n())
        throw Error(ErrorCode::ConfigInvalid, "k=" + std::to_string(config_.k) + " outside [1, n_train]");
    if (subsets_.size() != config_.ensemble_size)
        throw Error(ErrorCode::ConfigInvalid, "one feature subset per member is required");
}

RknnModel rknn_fit(const Dataset& train, const RknnConfig& config) {
    if (config.ensemble_size < 1) throw Error(ErrorCode::ConfigInvalid, "ensemble size must be >= 1");
    if (config.k < 1 || config.k > train.n())
        throw Error(ErrorCode::ConfigInvalid, "k=" + std::to_string(config.k) + " outside [1, n_train]");
    const auto p_prime = config.feature_rule.resolve(train.p());
    if (p_prime < 1 || p_prime > train.p())
        throw Error(ErrorCode::ConfigInvalid, "p'=" + std::to_string(p_prime) + " outside [1, " +
                                                  std::to_string(train.p()) + "]");
    std::vector<std::vector<std::size_t>> subsets;
    subsets.reserve(config.ensemble_size);
    for (std::size_t b = 0; b < config.ensemble_size; ++b) {
        RngStream rng(config.master_seed, b);
        subsets.push_back(draw_feature_subset(train.p(), p_prime, rng));
    }
    return RknnModel(train, config, std::move(subsets));
}

Vote rknn_predict(const RknnModel& model, std::span<const double> query, unsigned workers) {
    const auto& train = model.train();
    check_query(train, query);
    const auto& subsets = model.feature_subsets();
    const auto& cfg = model.config();
    std::vector<Label> labels(subsets.size());
    std::vector<double> probs(subsets.size());
    parallel_for(subsets.size(), workers, [&](std::size_t b) {
        const ProjectedView view(train, subsets[b]);
        const auto projected = view.project(query);
        const auto vote = majority(train, k_nearest(view, projected, cfg.k, cfg.metric));
        labels[b] = vote.label;
        probs[b] = vote.prob_class1;
    });
    return ensemble_vote(labels, probs);
}

std::string to_string(KnnFamily f) {
    switch (f) {
    case KnnFamily::Knn: return "knn";
    case KnnFamily::Wknn: return "wknn";
    case KnnFamily::Rknn: return "rknn";
    }
    return "knn";
}

std::optional<KnnFamily> parse_knn_family(const std::string& name) {
    if (name == "knn") return KnnFamily::Knn;
    if (name == "wknn") return KnnFamily::Wknn;
    if (name == "rknn") return KnnFamily::Rknn;
    return std::nullopt;
}

std::vector<double> cv_accuracy(const Dataset& train, KnnFamily learner, const TuneOptions& options) {
    if (options.grid.empty()) throw Error(ErrorCode::ConfigInvalid, "empty k grid");
    if (options.folds < 2 || options.folds > train.n())
        throw Error(ErrorCode::DegenerateFolds, "need 2 <= folds <= n, got folds=" + std::to_string(options.folds));

    RngStream rng(options.seed, 0);
    const auto perm = random_permutation(train.n(), rng);
    std::vector<std::vector<std::size_t>> fold_test(options.folds), fold_train(options.folds);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        for (std::size_t f = 0; f < options.folds; ++f)
            (i % options.folds == f ? fold_test[f] : fold_train[f]).push_back(perm[i]);
    }
    std::vector<Dataset> train_parts, test_parts;
    std::size_t smallest = train.n();
    for (std::size_t f = 0; f < options.folds; ++f) {
        train_parts.push_back(train.select_rows(fold_train[f]));
        test_parts.push_back(train.select_rows(fold_test[f]));
        if (!train_parts.back().has_both_classes())
            throw Error(ErrorCode::DegenerateFolds, "fold " + std::to_string(f) + " trains on a single class");
        smallest = std::min(smallest, train_parts.back().n());
    }

    std::vector<double> scores;
    for (auto k : options.grid) {
        if (k < 1 || k > smallest) {
            scores.push_back(-1.0);
            continue;
        }
        double sum = 0.0;
        for (std::size_t f = 0; f < options.folds; ++f) {
            const auto& tr = train_parts[f];
            const auto& te = test_parts[f];
            std::optional<RknnModel> rknn;
            if (learner == KnnFamily::Rknn) {
                auto cfg = options.rknn;
                cfg.k = k;
                cfg.metric = options.metric;
                rknn = rknn_fit(tr, cfg);
            }
            std::size_t correct = 0;
            for (std::size_t i = 0; i < te.n(); ++i) {
                Vote v;
                switch (learner) {
                case KnnFamily::Knn: v = knn_predict(tr, te.row(i), {k, options.metric}); break;
                case KnnFamily::Wknn: v = wknn_predict(tr, te.row(i), {k, options.metric}); break;
                case KnnFamily::Rknn: v = rknn_predict(*rknn, te.row(i)); break;
                }
                correct += v.label == te.label(i);
            }
            sum += static_cast<double>(correct) / static_cast<double>(te.n());
        }
        scores.push_back(sum / static_cast<double>(options.folds));
    }
    return scores;
}

std::size_t tune_k(const Dataset& train, KnnFamily learner, const TuneOptions& options) {
    const auto scores = cv_accuracy(train, learner, options);
    std::optional<std::size_t> best;
    double best_score = -1.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (scores[i] < 0.0) continue;
        const auto k = options.grid[i];
        if (!best || scores[i] > best_score || (scores[i] == best_score && k < *best)) {
            best = k;
            best_score = scores[i];
        }
    }
    if (!best) throw Error(ErrorCode::DegenerateFolds, "no grid value fits inside every fold");
    return *best;
}

} // namespace exn
