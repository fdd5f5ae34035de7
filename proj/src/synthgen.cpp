#include "exnrule/synthgen.hpp"

#include "exnrule/error.hpp"

namespace exn {

const std::vector<ScenarioSpec>& builtin_specs() {
    static const std::vector<ScenarioSpec> specs = {
        {"S1", 5.0, 5.0, 10.0, 10.0, 50, 5},
        {"S2", 5.0, 5.0, 10.0, 5.0, 50, 5},
        {"S3", 5.0, 5.0, 10.0, 4.0, 50, 5},
        {"S4", 5.0, 4.0, 10.0, 4.0, 50, 5},
        {"S5", 5.0, 5.0, 5.0, 10.0, 50, 5},
        {"S6", 3.0, 3.0, 1.0, 3.0, 50, 5},
    };
    return specs;
}

std::optional<ScenarioSpec> find_scenario(const std::string& id) {
    for (const auto& s : builtin_specs())
        if (s.id == id) return s;
    return std::nullopt;
}

Dataset generate(const ScenarioSpec& spec, RngStream rng) {
    if (!(spec.class0_sd > 0.0) || !(spec.class1_sd > 0.0))
        throw Error(ErrorCode::ConfigInvalid, "scenario standard deviations must be positive");
    if (spec.n_per_class < 1 || spec.p < 1)
        throw Error(ErrorCode::ConfigInvalid, "scenario needs rows and features");
    const std::size_t n = 2 * spec.n_per_class;
    std::vector<double> features;
    features.reserve(n * spec.p);
    std::vector<Label> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool second = i >= spec.n_per_class;
        const double mean = second ? spec.class1_mean : spec.class0_mean;
        const double sd = second ? spec.class1_sd : spec.class0_sd;
        for (std::size_t j = 0; j < spec.p; ++j) features.push_back(rng.normal(mean, sd));
        labels.push_back(second ? 1 : 0);
    }
    return Dataset(std::move(features), std::move(labels), default_feature_names(spec.p));
}

} // namespace exn
