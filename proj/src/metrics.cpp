#include "exnrule/metrics.hpp"

#include "exnrule/error.hpp"

namespace exn {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
    if (a != b || a == 0)
        throw Error(ErrorCode::LengthMismatch,
                    "metric inputs have lengths " + std::to_string(a) + " and " + std::to_string(b));
}

} // namespace

double accuracy(std::span<const Label> predicted, std::span<const Label> truth) {
    check_lengths(predicted.size(), truth.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i];
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

double cohen_kappa(std::span<const Label> predicted, std::span<const Label> truth) {
    check_lengths(predicted.size(), truth.size());
    const auto n = truth.size();
    std::size_t agree = 0, pred1 = 0, true1 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        agree += predicted[i] == truth[i];
        pred1 += predicted[i];
        true1 += truth[i];
    }
    // Chance agreement in integer units of 1/n^2.
    const std::size_t chance = pred1 * true1 + (n - pred1) * (n - true1);
    if (chance == n * n) return 1.0;
    const double nn = static_cast<double>(n) * static_cast<double>(n);
    const double p_o = static_cast<double>(agree) / static_cast<double>(n);
    const double p_e = static_cast<double>(chance) / nn;
    return (p_o - p_e) / (1.0 - p_e);
}

double brier_score(std::span<const double> prob_class1, std::span<const Label> truth) {
    check_lengths(prob_class1.size(), truth.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double p = prob_class1[i];
        if (!(p >= 0.0 && p <= 1.0))
            throw Error(ErrorCode::ProbOutOfRange, "probability " + std::to_string(p) + " at index " + std::to_string(i));
        const double d = p - static_cast<double>(truth[i]);
        sum += d * d;
    }
    return sum / static_cast<double>(truth.size());
}

} // namespace exn
