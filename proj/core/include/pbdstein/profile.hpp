#pragma once

#include <cstdint>
#include <vector>

#include "pbdstein/pmf.hpp"
#include "pbdstein/rates.hpp"

namespace pbdstein {

// Success probabilities of independent Bernoulli summands.
struct BernoulliProfile {
  std::vector<double> p;

  explicit BernoulliProfile(std::vector<double> probs);

  std::size_t size() const { return p.size(); }

  // lambda_r = sum_i p_i^r
  double lambda(int r) const;

  // theta_r = lambda_r / lambda_1; requires lambda_1 > 0
  double theta(int r) const;
};

// Law of W = sum_i X_i by direct convolution, processing the p_i in the given
// order. Exact up to roundoff, tail_bound = 0.
TruncatedPmf exact_pmf(const BernoulliProfile& profile);

struct FitResult {
  PBDParams params;
  // lambda^2/lambda2 - 1 - 2*lambda, the applicability condition
  double condition = 0.0;
  // set when the condition is within 1e-12 of zero
  bool borderline = false;
};

// Quadratic-death chain matched to the first three power sums:
//   beta  = lambda^2/lambda2 - 1 - 2*lambda + 2*lambda3/lambda2
//   alpha = beta*lambda + lambda^2 - lambda2
// Requires lambda2 > 0 and condition >= 0 (borderline values within 1e-12 of
// zero are accepted and flagged).
FitResult fit_pbd(const BernoulliProfile& profile);

struct ReferenceLaws {
  TruncatedPmf poisson;          // Poisson(lambda)
  TruncatedPmf shifted_poisson;  // shift + Poisson(lambda - shift)
  std::int64_t shift = 0;
  // true when lambda2 was within 1e-9 of an integer and that integer was used
  bool integer_shift = false;
};

ReferenceLaws reference_laws(const BernoulliProfile& profile, double tol = 1e-10);

}  // namespace pbdstein
