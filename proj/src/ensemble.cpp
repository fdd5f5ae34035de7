#include <cmath>

#include "exnrule/error.hpp"
#include "exnrule/feature_rule.hpp"
#include "exnrule/voting.hpp"

namespace exn {

FeatureRule FeatureRule::fraction(std::size_t divisor) {
    switch (divisor) {
    case 2: return {Kind::HalfP, 0};
    case 3: return {Kind::ThirdP, 0};
    case 4: return {Kind::QuarterP, 0};
    case 5: return {Kind::FifthP, 0};
    default: throw Error(ErrorCode::ConfigInvalid, "feature fraction must be p/2 .. p/5");
    }
}

std::size_t FeatureRule::resolve(std::size_t p) const {
    auto at_least_one = [](std::size_t v) { return v < 1 ? std::size_t{1} : v; };
    switch (kind) {
    case Kind::SqrtP: {
        // integer floor(sqrt(p)), immune to rounding in std::sqrt
        std::size_t r = static_cast<std::size_t>(std::sqrt(static_cast<double>(p)));
        while (r * r > p) --r;
        while ((r + 1) * (r + 1) <= p) ++r;
        return at_least_one(r);
    }
    case Kind::HalfP: return at_least_one(p / 2);
    case Kind::ThirdP: return at_least_one(p / 3);
    case Kind::QuarterP: return at_least_one(p / 4);
    case Kind::FifthP: return at_least_one(p / 5);
    case Kind::Fixed: return fixed;
    }
    return 1;
}

std::string FeatureRule::to_string() const {
    switch (kind) {
    case Kind::SqrtP: return "sqrt";
    case Kind::HalfP: return "p/2";
    case Kind::ThirdP: return "p/3";
    case Kind::QuarterP: return "p/4";
    case Kind::FifthP: return "p/5";
    case Kind::Fixed: return std::to_string(fixed);
    }
    return "sqrt";
}

FeatureRule FeatureRule::parse(const std::string& text) {
    if (text == "sqrt" || text == "sqrt_p") return sqrt_p();
    if (text.size() == 3 && text[0] == 'p' && text[1] == '/') return fraction(static_cast<std::size_t>(text[2] - '0'));
    try {
        std::size_t used = 0;
        const auto v = std::stoull(text, &used);
        if (used == text.size() && v > 0) return fixed_count(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::ConfigInvalid, "unknown feature rule '" + text + "'");
}

Vote ensemble_vote(std::span<const Label> base_labels, std::span<const double> base_probs) {
    if (base_labels.empty() || base_labels.size() != base_probs.size())
        throw Error(ErrorCode::LengthMismatch, "ensemble vote needs one probability per base label");
    std::size_t ones = 0;
    double sum = 0.0;
    for (std::size_t b = 0; b < base_labels.size(); ++b) {
        ones += base_labels[b];
        sum += base_probs[b];
    }
    Vote v;
    v.prob_class1 = sum / static_cast<double>(base_labels.size());
    const std::size_t zeros = base_labels.size() - ones;
    if (ones != zeros)
        v.label = ones > zeros ? 1 : 0;
    else
        v.label = v.prob_class1 > 0.5 ? 1 : 0;
    return v;
}

} // namespace exn
