#include "pbdstein/profile.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "pbdstein/errors.hpp"
#include "pbdstein/stable_sum.hpp"

namespace pbdstein {

BernoulliProfile::BernoulliProfile(std::vector<double> probs) : p(std::move(probs)) {
  if (p.empty()) throw domain_error("profile must contain at least one probability");
  for (std::size_t i = 0; i < p.size(); ++i)
    if (!(std::isfinite(p[i]) && p[i] >= 0.0 && p[i] <= 1.0))
      throw domain_error("profile entry " + std::to_string(i) + " is outside [0, 1]");
}

double BernoulliProfile::lambda(int r) const {
  if (r < 0) throw domain_error("power-sum order must be nonnegative");
  StableSum acc;
  for (double pi : p) {
    double t = 1.0;
    for (int j = 0; j < r; ++j) t *= pi;
    acc.add(t);
  }
  return acc.value();
}

double BernoulliProfile::theta(int r) const {
  const double l1 = lambda(1);
  if (l1 <= 0.0)
    throw domain_error("theta is undefined for an all-zero profile (lambda = 0)");
  return lambda(r) / l1;
}

TruncatedPmf exact_pmf(const BernoulliProfile& profile) {
  std::vector<double> q{1.0};
  q.reserve(profile.size() + 1);
  for (double pi : profile.p) {
    q.push_back(0.0);
    for (std::size_t k = q.size() - 1; k >= 1; --k)
      q[k] = q[k] * (1.0 - pi) + q[k - 1] * pi;
    q[0] *= (1.0 - pi);
  }
  TruncatedPmf out;
  out.probs = std::move(q);
  out.meta.source = "bernoulli_convolution";
  out.meta.params["n"] = static_cast<double>(profile.size());
  return out;
}

FitResult fit_pbd(const BernoulliProfile& profile) {
  const double l1 = profile.lambda(1);
  const double l2 = profile.lambda(2);
  const double l3 = profile.lambda(3);
  if (l2 <= 0.0)
    throw inapplicable_error("lambda2_positive",
                             "the moment fit is undefined when every p_i is zero");

  const double cond = l1 * l1 / l2 - 1.0 - 2.0 * l1;
  if (cond < -1e-12)
    throw inapplicable_error("moment_condition",
                             "lambda^2/lambda2 - 1 - 2*lambda = " + std::to_string(cond) +
                                 " is negative; the quadratic-death fit does not apply");

  const double beta = cond + 2.0 * l3 / l2;
  const double alpha = beta * l1 + l1 * l1 - l2;
  if (!(beta > 0.0) || !(alpha > 0.0))
    throw inapplicable_error("moment_condition",
                             "fitted rates are not positive (alpha = " + std::to_string(alpha) +
                                 ", beta = " + std::to_string(beta) + ")");

  FitResult out{PBDParams(alpha, beta), cond, std::abs(cond) <= 1e-12};

  // alpha >= beta*lambda and alpha >= lambda^3/lambda2 - lambda - lambda^2 -
  // lambda2 hold algebraically; re-check numerically
  const double slack = 1e-10 * (1.0 + std::abs(alpha));
  if (alpha + slack < beta * l1 ||
      alpha + slack < l1 * l1 * l1 / l2 - l1 - l1 * l1 - l2)
    throw consistency_error("fitted alpha violates its lower bounds");
  return out;
}

ReferenceLaws reference_laws(const BernoulliProfile& profile, double tol) {
  const double l1 = profile.lambda(1);
  const double l2 = profile.lambda(2);

  ReferenceLaws out;
  out.poisson = poisson_pmf(l1, tol);

  const double rounded = std::round(l2);
  bool integral = std::abs(l2 - rounded) <= 1e-9;
  std::int64_t shift = integral ? static_cast<std::int64_t>(rounded)
                                : static_cast<std::int64_t>(std::floor(l2));
  if (integral && static_cast<double>(shift) > l1) {
    // rounding up would make the shifted mean negative; fall back to floor
    integral = false;
    shift = static_cast<std::int64_t>(std::floor(l2));
  }
  const double shifted_mean = l1 - static_cast<double>(shift);
  if (shifted_mean < 0.0)
    throw domain_error("shifted Poisson mean is negative (lambda < shift)");

  out.shift = shift;
  out.integer_shift = integral;
  out.shifted_poisson = poisson_pmf(shifted_mean, tol);
  out.shifted_poisson.offset = shift;
  out.shifted_poisson.meta.source = "shifted_poisson";
  out.shifted_poisson.meta.params["shift"] = static_cast<double>(shift);
  if (!integral) out.shifted_poisson.meta.notes.push_back("non_integer_shift");
  return out;
}

}  // namespace pbdstein
