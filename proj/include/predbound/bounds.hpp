#pragma once

#include "predbound/types.hpp"

namespace predbound {

/// Lower bound on the support length of an estimation or prediction error
/// whose target has conditional entropy `h`: returns 2^h.
/// Throws InvalidInput when h.bits is not finite.
[[nodiscard]] double support_bound_from_entropy(const EntropyValue& h);

/// Lower bound on the maximum deviation of the error: 2^(h - 1).
[[nodiscard]] double deviation_bound_from_entropy(const EntropyValue& h);

/// Half of a support length. A zero-mean error cannot deviate less than this.
[[nodiscard]] double half_support_deviation(double support_length);

/// Full report for a given setting and prediction step.
[[nodiscard]] BoundReport make_bound_report(const EntropyValue& h, BoundSetting setting,
                                            int m_step = 1);

/// Bound on the increment of a recursion driven by noise whose conditional
/// entropy given its own past is `h_noise`.
[[nodiscard]] BoundReport recursive_increment_bound(const EntropyValue& h_noise);

/// Bound on the test-point error of any fitted model, given the conditional
/// entropy of the test output given test input and training data.
[[nodiscard]] BoundReport fitting_bound_from_entropy(const EntropyValue& h_cond);

}  // namespace predbound
