#pragma once

#include <cstddef>
#include <string>

namespace exn {

// How many features each ensemble member sees, as a function of p.
struct FeatureRule {
    enum class Kind { SqrtP, HalfP, ThirdP, QuarterP, FifthP, Fixed };

    Kind kind = Kind::SqrtP;
    std::size_t fixed = 0;  // used only by Kind::Fixed

    static FeatureRule sqrt_p() { return {Kind::SqrtP, 0}; }
    static FeatureRule fraction(std::size_t divisor);  // 2..5
    static FeatureRule fixed_count(std::size_t p_prime) { return {Kind::Fixed, p_prime}; }

    // max(1, floor(sqrt(p))) or max(1, floor(p / d)); Fixed is returned as-is
    // and range-checked by the caller.
    std::size_t resolve(std::size_t p) const;

    // "sqrt", "p/2" .. "p/5", or a decimal count.
    std::string to_string() const;
    static FeatureRule parse(const std::string& text);

    bool operator==(const FeatureRule&) const = default;
};

} // namespace exn
