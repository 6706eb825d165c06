#include "pbdstein/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pbdstein/errors.hpp"
#include "pbdstein/rng.hpp"
#include "pbdstein/stable_sum.hpp"

namespace pbdstein {

namespace {

void check_supports(const TruncatedPmf& p, const TruncatedPmf& q) {
  if (p.offset < 0 || q.offset < 0)
    throw domain_error("distances are defined on non-negative supports");
  if (p.probs.empty() || q.probs.empty()) throw domain_error("empty pmf");
  for (const TruncatedPmf* m : {&p, &q}) {
    StableSum mass;
    for (double v : m->probs) mass.add(v);
    const double total = mass.value();
    // retained mass plus the certified tail has to account for all of it
    if (total > 1.0 + 1e-12 || 1.0 - total > m->tail_bound + 1e-12)
      throw domain_error("pmf is not normalized within its tail bound");
  }
}

double mass_at(const TruncatedPmf& m, std::int64_t k) {
  const std::int64_t rel = k - m.offset;
  if (rel < 0 || rel > m.trunc()) return 0.0;
  return m.probs[static_cast<std::size_t>(rel)];
}

}  // namespace

DistanceResult wasserstein(const TruncatedPmf& p, const TruncatedPmf& q) {
  check_supports(p, q);
  const std::int64_t hi = std::max(p.support_end(), q.support_end());

  // running cdf difference D(k) = F_P(k) - F_Q(k); the distance is the l1
  // norm of D, which vanishes beyond both supports
  StableSum diff;
  StableSum total;
  for (std::int64_t k = 0; k < hi; ++k) {
    diff.add(mass_at(p, k) - mass_at(q, k));
    total.add(std::abs(diff.value()));
  }

  DistanceResult out;
  out.value = total.value();
  out.method = "cdf_sum";
  out.tail_error = static_cast<double>(p.support_end()) * p.tail_bound +
                   static_cast<double>(q.support_end()) * q.tail_bound;
  return out;
}

DistanceResult total_variation(const TruncatedPmf& p, const TruncatedPmf& q) {
  check_supports(p, q);
  const std::int64_t hi = std::max(p.support_end(), q.support_end());

  StableSum total;
  for (std::int64_t k = 0; k <= hi; ++k)
    total.add(std::abs(mass_at(p, k) - mass_at(q, k)));

  DistanceResult out;
  out.value = 0.5 * total.value();
  out.method = "pointwise_half_l1";
  out.tail_error = 0.5 * (p.tail_bound + q.tail_bound);
  return out;
}

DistanceResult lipschitz_witness_lb(const TruncatedPmf& p, const TruncatedPmf& q,
                                    int trials, std::uint64_t seed) {
  check_supports(p, q);
  if (trials < 0) throw domain_error("trials must be non-negative");
  const std::int64_t hi = std::max(p.support_end(), q.support_end());

  // |E_P f - E_Q f| for a walk f with increments step(k) in {-1, +1}
  auto pairing = [&](auto&& step) {
    double f = 0.0;
    StableSum gap;
    for (std::int64_t k = 0; k <= hi; ++k) {
      if (k > 0) f += step(k);
      gap.add(f * (mass_at(p, k) - mass_at(q, k)));
    }
    return std::abs(gap.value());
  };

  double best = pairing([](std::int64_t) { return 1.0; });
  for (int t = 0; t < trials; ++t) {
    SplitMix64 rng(stream_seed(seed, static_cast<std::uint64_t>(t)));
    best = std::max(best, pairing([&](std::int64_t) {
             return rng.uniform() < 0.5 ? -1.0 : 1.0;
           }));
  }

  DistanceResult out;
  out.value = best;
  out.method = "witness_search";
  out.tail_error = static_cast<double>(p.support_end()) * p.tail_bound +
                   static_cast<double>(q.support_end()) * q.tail_bound;
  return out;
}

}  // namespace pbdstein
