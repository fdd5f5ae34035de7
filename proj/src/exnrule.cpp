#include "exnrule/exnrule.hpp"

#include <numeric>

#include <json.hpp>

#include "exnrule/error.hpp"
#include "exnrule/parallel.hpp"

namespace exn {

namespace {

constexpr int kModelFormatVersion = 1;

std::size_t validated_p_prime(const Dataset& train, const ExNRuleConfig& config) {
    if (config.ensemble_size < 1) throw Error(ErrorCode::ConfigInvalid, "ensemble size must be >= 1");
    if (config.chain_length < 1) throw Error(ErrorCode::ConfigInvalid, "chain length k must be >= 1");
    if (config.chain_length > train.n())
        throw Error(ErrorCode::ConfigInvalid, "chain length k=" + std::to_string(config.chain_length) +
                                                  " exceeds n_train=" + std::to_string(train.n()));
    const auto p_prime = config.feature_rule.resolve(train.p());
    if (p_prime < 1 || p_prime > train.p())
        throw Error(ErrorCode::ConfigInvalid, "p'=" + std::to_string(p_prime) + " outside [1, " +
                                                  std::to_string(train.p()) + "]");
    if (!train.has_both_classes())
        throw Error(ErrorCode::SingleClassTraining, "training data holds a single class");
    return p_prime;
}

} // namespace

ExNRuleModel::ExNRuleModel(Dataset train, ExNRuleConfig config, std::vector<BaseLearnerSample> samples)
    : train_(std::move(train)), config_(std::move(config)), samples_(std::move(samples)) {
    const auto p_prime = validated_p_prime(train_, config_);
    if (samples_.size() != config_.ensemble_size)
        throw Error(ErrorCode::ConfigInvalid, "expected " + std::to_string(config_.ensemble_size) +
                                                  " member samples, got " + std::to_string(samples_.size()));
    for (const auto& s : samples_) {
        if (s.feature_indices.size() != p_prime)
            throw Error(ErrorCode::ConfigInvalid, "member sample has the wrong feature count");
        if (s.row_indices.size() != train_.n())
            throw Error(ErrorCode::ConfigInvalid, "member sample has the wrong row count");
        for (std::size_t j = 0; j < s.feature_indices.size(); ++j) {
            if (s.feature_indices[j] >= train_.p() || (j > 0 && s.feature_indices[j] <= s.feature_indices[j - 1]))
                throw Error(ErrorCode::ConfigInvalid, "member feature indices must be increasing and in range");
        }
        for (auto r : s.row_indices)
            if (r >= train_.n()) throw Error(ErrorCode::ConfigInvalid, "member row index out of range");
    }
}

ExNRuleModel fit(const Dataset& train, const ExNRuleConfig& config) {
    const auto p_prime = validated_p_prime(train, config);
    std::vector<BaseLearnerSample> samples;
    samples.reserve(config.ensemble_size);
    for (std::size_t b = 0; b < config.ensemble_size; ++b) {
        RngStream rng(config.master_seed, b);
        if (config.bootstrap) {
            samples.push_back(draw_base_learner_sample(train.n(), train.p(), p_prime, rng));
        } else {
            BaseLearnerSample s;
            s.row_indices.resize(train.n());
            std::iota(s.row_indices.begin(), s.row_indices.end(), std::size_t{0});
            s.feature_indices = draw_feature_subset(train.p(), p_prime, rng);
            samples.push_back(std::move(s));
        }
    }
    return ExNRuleModel(train, config, std::move(samples));
}

ChainResult extended_chain(const BaseLearnerSample& sample, const Dataset& train,
                           std::span<const double> query_projected, std::size_t k,
                           const DistanceMetric& metric) {
    if (k < 1) throw Error(ErrorCode::ConfigInvalid, "chain length k must be >= 1");
    if (k > sample.row_indices.size())
        throw Error(ErrorCode::ChainExhausted, "k=" + std::to_string(k) + " exceeds pool size " +
                                                   std::to_string(sample.row_indices.size()));
    const ProjectedView view(train, sample.feature_indices);

    std::vector<std::size_t> remaining_rows = sample.row_indices;
    std::vector<std::size_t> remaining_pos(remaining_rows.size());
    std::iota(remaining_pos.begin(), remaining_pos.end(), std::size_t{0});

    ChainResult chain;
    chain.pool_positions.reserve(k);
    chain.rows.reserve(k);
    chain.labels.reserve(k);
    chain.hop_distances.reserve(k);

    for (std::size_t i = 0; i < k; ++i) {
        const PoolHit hit = i == 0 ? nearest_in_pool(remaining_rows, view, query_projected, metric)
                                   : nearest_in_pool_to_row(remaining_rows, view, chain.rows.back(), metric);
        chain.pool_positions.push_back(remaining_pos[hit.position]);
        chain.rows.push_back(hit.row);
        chain.labels.push_back(train.label(hit.row));
        chain.hop_distances.push_back(hit.distance);
        remaining_rows.erase(remaining_rows.begin() + static_cast<std::ptrdiff_t>(hit.position));
        remaining_pos.erase(remaining_pos.begin() + static_cast<std::ptrdiff_t>(hit.position));
    }
    return chain;
}

Vote base_predict(const ChainResult& chain) {
    const auto k = chain.labels.size();
    if (k == 0) throw Error(ErrorCode::EmptyPool, "base vote on an empty chain");
    std::size_t ones = 0;
    for (auto y : chain.labels) ones += y;
    Vote v;
    v.prob_class1 = static_cast<double>(ones) / static_cast<double>(k);
    if (2 * ones == k)
        v.label = chain.labels.front();
    else
        v.label = 2 * ones > k ? 1 : 0;
    return v;
}

Prediction predict(const ExNRuleModel& model, std::span<const double> query, bool keep_votes,
                   unsigned workers) {
    const auto& train = model.train();
    if (query.size() != train.p())
        throw Error(ErrorCode::DimensionMismatch, "query has " + std::to_string(query.size()) +
                                                      " features, model expects " + std::to_string(train.p()));
    const auto& samples = model.samples();
    const auto& cfg = model.config();
    std::vector<Label> labels(samples.size());
    std::vector<double> probs(samples.size());

    parallel_for(samples.size(), workers, [&](std::size_t b) {
        const auto& s = samples[b];
        std::vector<double> projected;
        projected.reserve(s.feature_indices.size());
        for (auto j : s.feature_indices) projected.push_back(query[j]);
        const auto vote = base_predict(extended_chain(s, train, projected, cfg.chain_length, cfg.metric));
        labels[b] = vote.label;
        probs[b] = vote.prob_class1;
    });

    const Vote v = ensemble_vote(labels, probs);
    Prediction out{v.label, v.prob_class1, {}};
    if (keep_votes) out.per_base_votes = std::move(labels);
    return out;
}

std::vector<Prediction> predict_batch(const ExNRuleModel& model, const MatrixView& queries,
                                      unsigned workers) {
    if (queries.rows() > 0 && queries.cols() != model.train().p())
        throw Error(ErrorCode::DimensionMismatch, "query matrix has " + std::to_string(queries.cols()) +
                                                      " columns, model expects " +
                                                      std::to_string(model.train().p()));
    std::vector<Prediction> out(queries.rows());
    parallel_for(queries.rows(), workers, [&](std::size_t i) { out[i] = predict(model, queries.row(i)); });
    return out;
}

std::string model_to_json(const ExNRuleModel& model) {
    const auto& cfg = model.config();
    nlohmann::json doc;
    doc["format"] = "exnrule-model";
    doc["version"] = kModelFormatVersion;
    doc["config"] = {
        {"ensemble_size", cfg.ensemble_size},
        {"chain_length", cfg.chain_length},
        {"feature_rule", cfg.feature_rule.to_string()},
        {"minkowski_q", cfg.metric.q()},
        {"master_seed", cfg.master_seed},
        {"bootstrap", cfg.bootstrap},
    };
    doc["n_train"] = model.train().n();
    doc["p"] = model.train().p();
    auto& samples = doc["samples"] = nlohmann::json::array();
    for (const auto& s : model.samples())
        samples.push_back({{"rows", s.row_indices}, {"features", s.feature_indices}});
    return doc.dump();
}

ExNRuleModel model_from_json(const std::string& text, const Dataset& train) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("model JSON: ") + e.what());
    }
    try {
        if (doc.at("format") != "exnrule-model")
            throw Error(ErrorCode::ParseError, "not an exnrule model document");
        if (doc.at("version").get<int>() != kModelFormatVersion)
            throw Error(ErrorCode::ParseError, "unsupported model version " + doc.at("version").dump());
        if (doc.at("n_train").get<std::size_t>() != train.n() || doc.at("p").get<std::size_t>() != train.p())
            throw Error(ErrorCode::DimensionMismatch, "model was fitted on data of a different shape");
        const auto& c = doc.at("config");
        ExNRuleConfig cfg;
        cfg.ensemble_size = c.at("ensemble_size").get<std::size_t>();
        cfg.chain_length = c.at("chain_length").get<std::size_t>();
        cfg.feature_rule = FeatureRule::parse(c.at("feature_rule").get<std::string>());
        cfg.metric = DistanceMetric(c.at("minkowski_q").get<double>());
        cfg.master_seed = c.at("master_seed").get<std::uint64_t>();
        cfg.bootstrap = c.at("bootstrap").get<bool>();
        std::vector<BaseLearnerSample> samples;
        for (const auto& s : doc.at("samples"))
            samples.push_back({s.at("rows").get<std::vector<std::size_t>>(),
                               s.at("features").get<std::vector<std::size_t>>()});
        return ExNRuleModel(train, cfg, std::move(samples));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("model JSON: ") + e.what());
    }
}

} // namespace exn
