#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "exnrule/dataset.hpp"
#include "exnrule/distance.hpp"
#include "exnrule/feature_rule.hpp"
#include "exnrule/voting.hpp"

namespace exn {

/**
 * Extended-neighbourhood-rule kNN ensemble.
 *
 * Each of the B members holds a bootstrap sample of the training rows and a
 * random feature subset. For a query, a member builds a k-step chain: the
 * first element is the pool entry nearest to the query, and every following
 * element is the remaining pool entry nearest to the previous element (not
 * to the query). Chain labels are majority-voted per member, then member
 * labels are majority-voted across the ensemble.
 */
struct ExNRuleConfig {
    std::size_t ensemble_size = 500;
    std::size_t chain_length = 3;
    FeatureRule feature_rule = FeatureRule::sqrt_p();
    DistanceMetric metric{};
    std::uint64_t master_seed = 0;
    bool bootstrap = true;

    bool operator==(const ExNRuleConfig&) const = default;
};

struct ChainResult {
    std::vector<std::size_t> pool_positions;  // distinct positions within the member's pool
    std::vector<std::size_t> rows;            // training rows at those positions
    std::vector<Label> labels;                // y^1 .. y^k
    std::vector<double> hop_distances;        // d(X^{i-1}, X^i), X^0 being the query
};

struct Prediction {
    Label label = 0;
    double prob_class1 = 0.0;
    std::vector<Label> per_base_votes;  // filled only on request
};

class ExNRuleModel {
public:
    ExNRuleModel(Dataset train, ExNRuleConfig config, std::vector<BaseLearnerSample> samples);

    const Dataset& train() const noexcept { return train_; }
    const ExNRuleConfig& config() const noexcept { return config_; }
    const std::vector<BaseLearnerSample>& samples() const noexcept { return samples_; }
    std::size_t p_prime() const noexcept { return samples_.front().feature_indices.size(); }

private:
    Dataset train_;
    ExNRuleConfig config_;
    std::vector<BaseLearnerSample> samples_;
};

// Draws the B member samples; member b uses RngStream(master_seed, b).
// No chains are built here: they depend on the query.
ExNRuleModel fit(const Dataset& train, const ExNRuleConfig& config);

/// Greedy k-step chain over one member's pool. Pool entries are removed per
/// occurrence, so a row duplicated by the bootstrap may appear twice.
ChainResult extended_chain(const BaseLearnerSample& sample, const Dataset& train,
                           std::span<const double> query_projected, std::size_t k,
                           const DistanceMetric& metric);

/// Majority over chain labels; an even split takes the first hop's label.
Vote base_predict(const ChainResult& chain);

// `workers` > 1 evaluates members concurrently; output is identical to serial.
Prediction predict(const ExNRuleModel& model, std::span<const double> query,
                   bool keep_votes = false, unsigned workers = 1);

std::vector<Prediction> predict_batch(const ExNRuleModel& model, const MatrixView& queries,
                                      unsigned workers = 1);

// Versioned JSON document holding the configuration and every member sample.
std::string model_to_json(const ExNRuleModel& model);
// Rebuilds a model against the training data it was fitted on.
ExNRuleModel model_from_json(const std::string& text, const Dataset& train);

} // namespace exn
