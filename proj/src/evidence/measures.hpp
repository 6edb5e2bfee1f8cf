#pragma once

#include <cstddef>

#include "evidence/bba.hpp"

namespace evifuse::evidence {

// Combination is refused once the conflict reaches this value.
inline constexpr double kTotalConflictThreshold = 1.0 - 1e-12;
// Scale of SW - SW_~q inside the disagreement arctan.
inline constexpr double kDefaultDisagreementSigma = 2.0;

// Mass falling on empty intersections.
double conflict_k(const Bba& m1, const Bba& m2);

// Dempster's normalized conjunctive rule.
Bba combine_dempster(const Bba& m1, const Bba& m2);

// Belief entropy with base-10 logarithm; each focal set A contributes
// -m(A) log10(m(A) / (2^|A| - 1)).
double deng_entropy(const Bba& m);

// Belief Jensen-Shannon divergence, base-2 logarithm, over the union of focal
// sets. Lies in [0, 1].
double bjs_divergence(const Bba& m1, const Bba& m2);

// sqrt((m1 - m2)' Jac (m1 - m2)) with Jac(A, B) = |A n B| / |A u B|. No 1/2
// factor under the root.
double jousselme_distance(const Bba& m1, const Bba& m2);

struct Spread {
  double sw = 0.0;          // mean distance of every BOE to the overall mean
  double sw_without = 0.0;  // same, with BOE q removed from both the mean and the average
};

// SW and SW_~q; the leave-one-out centre averages over the remaining N - 1 BOEs.
Spread evidence_spread(const BoeSet& boes, std::size_t q);

// 0.5 + atan((SW - SW_~q) / sigma) / pi.
double disagreement_degree(const BoeSet& boes, std::size_t q, double sigma = kDefaultDisagreementSigma);

}  // namespace evifuse::evidence
