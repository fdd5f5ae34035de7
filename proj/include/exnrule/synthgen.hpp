#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "exnrule/dataset.hpp"
#include "exnrule/rng.hpp"

namespace exn {

// Two Gaussian classes; every feature of a class is i.i.d. Normal(mean, sd).
struct ScenarioSpec {
    std::string id;
    double class0_mean = 0.0;
    double class0_sd = 1.0;
    double class1_mean = 0.0;
    double class1_sd = 1.0;
    std::size_t n_per_class = 50;
    std::size_t p = 5;
};

// S1..S6 of the simulation study.
const std::vector<ScenarioSpec>& builtin_specs();
std::optional<ScenarioSpec> find_scenario(const std::string& id);

/**
 * Rows 0..n_per_class-1 are class 0, the rest class 1. Values are drawn in
 * row-major order from `rng` via RngStream::normal.
 */
Dataset generate(const ScenarioSpec& spec, RngStream rng);

} // namespace exn
