#pragma once

#include <cstddef>
#include <span>

#include "exnrule/dataset.hpp"

namespace exn {

struct Vote {
    Label label = 0;
    double prob_class1 = 0.0;
};

/**
 * Second-level vote over base learners: majority of base labels. An even
 * split goes to the class with the higher mean probability, then to class 0.
 * The returned probability is the mean of the base probabilities, summed in
 * index order.
 */
Vote ensemble_vote(std::span<const Label> base_labels, std::span<const double> base_probs);

} // namespace exn
