#pragma once

#include <cstdint>
#include <string>

#include "pbdstein/pmf.hpp"

namespace pbdstein {

struct DistanceResult {
  double value = 0.0;
  std::string method;
  // what the truncated tails could add to the reported value
  double tail_error = 0.0;
};

// Wasserstein-1 distance on the integers, sum_k |F_P(k) - F_Q(k)|.
// method = "cdf_sum". Inputs must be normalized up to their tail bounds.
DistanceResult wasserstein(const TruncatedPmf& p, const TruncatedPmf& q);

// Total variation distance, (1/2) sum_k |p_k - q_k|.
// method = "pointwise_half_l1".
DistanceResult total_variation(const TruncatedPmf& p, const TruncatedPmf& q);

// Lower bound on the Wasserstein distance from random 1-Lipschitz witness
// functions (+-1 increment paths) plus the canonical f(k) = k. Deterministic
// in (trials, seed). method = "witness_search".
DistanceResult lipschitz_witness_lb(const TruncatedPmf& p, const TruncatedPmf& q,
                                    int trials, std::uint64_t seed);

}  // namespace pbdstein
