#pragma once

#include <cstddef>
#include <span>
#include <cstdint>
#include <string>

#include "exnrule/dataset.hpp"

namespace exn {

// Fraction of exact matches.
double accuracy(std::span<const Label> predicted, std::span<const Label> truth);

/**
 * Cohen's kappa, (p_o - p_e) / (1 - p_e), with p_e = sum_c pred_c * true_c / n^2.
 * When p_e = 1 (both sides constant and equal) the result is 1.
 */
double cohen_kappa(std::span<const Label> predicted, std::span<const Label> truth);

// Mean of (prob_class1 - label)^2; lies in [0, 1].
double brier_score(std::span<const double> prob_class1, std::span<const Label> truth);

struct EvalRecord {
    std::string method;
    std::string dataset;
    std::size_t k = 0;         // requested k; 0 when k was tuned
    std::size_t repetition = 0;
    std::size_t k_used = 0;
    std::uint64_t partition_hash = 0;
    double accuracy = 0.0;
    double kappa = 0.0;
    double brier = 0.0;
};

} // namespace exn
