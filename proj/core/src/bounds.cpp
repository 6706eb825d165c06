#include "pbdstein/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pbdstein/errors.hpp"
#include "pbdstein/stable_sum.hpp"

namespace pbdstein {

namespace {

constexpr double kRateMin = 1e-3;
constexpr double kRateMax = 1e6;

void check_range(double v, double lo, const char* name) {
  if (!(v >= lo && v <= kRateMax))
    throw domain_error(std::string(name) + " outside the supported bound range");
}

BoundEntry ok(double v) {
  if (!(std::isfinite(v) && v >= 0.0))
    throw consistency_error("bound evaluated to a non-finite or negative value");
  return BoundEntry{v, ""};
}

BoundEntry na(std::string reason) { return BoundEntry{std::nullopt, std::move(reason)}; }

}  // namespace

BoundReport factor_bounds(const PBDParams& params) {
  check_range(params.alpha, kRateMin, "alpha");
  check_range(params.beta, kRateMin, "beta");
  const double a = params.alpha;
  const double b = params.beta;

  BoundReport r;
  r["sup_g_15"] = ok(std::min(
      1.0 / (b + 2.0 * a / (a + 2.0 * b + 2.0)),
      (std::sqrt(a + (1.0 - b) * (1.0 - b) / 4.0) + (1.0 - b) / 2.0) / a));
  r["sup_dg_16"] = ok(std::min(
      1.0 / (b + 1.0) + (a + 2.0) / (a * (a + 2.0) + 2.0 * b * (a + b + 1.0)),
      1.0 / std::sqrt(a) + 1.0 / a));
  r["sup_d2g_17"] = ok(2.0 / a + 1.0 / (a + b * (1.0 + b + a / 2.0)));
  r["sup_d2g_17_relax"] = ok(3.0 / a);
  r["mean_lower_210"] =
      ok(2.0 * a * (a + b + 1.0) / (2.0 * (b + 1.0) * (a + b) + a * a));
  r["mean_upper_210"] =
      ok(a * (a + 2.0 * b + 2.0) / (b * (a + 2.0 * b + 2.0) + 2.0 * a));
  return r;
}

BoundReport factor_bounds_ab(double a, double b) {
  check_range(a, kRateMin, "a");
  check_range(b, 0.0, "b");

  BoundReport r;
  // at b = 0 the square-root branches degenerate; their limits coincide with
  // the first branch, so only that one is evaluated
  const double g_branch1 = 1.0 / (1.0 + 2.0 * a * b / (a + 2.0 * b + 2.0));
  const double dg_branch1 =
      1.0 / (1.0 + b) +
      (a + 2.0 * b) / (a * a + 2.0 * a + 2.0 + 2.0 * b * (a + 1.0));
  if (b == 0.0) {
    r["sup_gt_18"] = ok(g_branch1);
    r["sup_dgt_19"] = ok(dg_branch1);
  } else {
    r["sup_gt_18"] = ok(std::min(
        g_branch1,
        (std::sqrt(a * b + (b - 1.0) * (b - 1.0) / 4.0) + (b - 1.0) / 2.0) /
            (a * b)));
    r["sup_dgt_19"] =
        ok(std::min(dg_branch1, 1.0 / std::sqrt(a * b) + 1.0 / a));
  }
  r["sup_d2gt_110"] = ok(2.0 / a + b / ((a + 1.0) * b + 1.0 + a / 2.0));
  return r;
}

BoundReport poisson_factor_bounds(double a) {
  check_range(a, kRateMin, "a");

  BoundReport r;
  r["pn_g_111"] = ok(1.0);
  r["pn_dg_112"] =
      ok(std::min(1.0, 8.0 / (3.0 * std::sqrt(2.0 * std::exp(1.0) * a))));
  r["pn_d2g_113"] = ok(std::min(4.0 / 3.0, 2.0 / a));
  return r;
}

BoundReport approx_bounds(const BernoulliProfile& profile) {
  const double l1 = profile.lambda(1);
  const double l2 = profile.lambda(2);
  const double l3 = profile.lambda(3);
  const double t2 = profile.theta(2);
  const double t3 = profile.theta(3);

  BoundReport r;

  if (l1 > l2) {
    r["bx_shifted"] = ok(4.0 * t2 / (1.0 - t2));
  } else {
    r["bx_shifted"] = na("requires the mean to exceed the second power sum");
  }

  std::optional<FitResult> fit;
  std::string fit_reason;
  try {
    fit = fit_pbd(profile);
  } catch (const inapplicable_error& e) {
    fit_reason = e.condition();
  }

  if (!fit) {
    r["pbd_application_114"] = na("fit inapplicable: " + fit_reason);
    r["remark_sigma"] = na("fit inapplicable: " + fit_reason);
    return r;
  }

  const double denom = l1 - l2 - (1.0 + t2) * t2;
  if (denom > 0.0) {
    r["pbd_application_114"] = ok(3.0 * t3 + 6.0 * t2 * l2 / denom);
  } else {
    r["pbd_application_114"] = na("requires lambda - lambda_2 - (1+theta_2)theta_2 > 0");
  }

  // sigma_k is the root of the variance mass left after dropping the k
  // largest contributions p_i(1-p_i)
  std::vector<double> rho;
  rho.reserve(profile.size());
  for (double p : profile.p) rho.push_back(p * (1.0 - p));
  std::sort(rho.begin(), rho.end(), std::greater<double>());
  auto sigma = [&](std::size_t k) {
    StableSum s;
    for (std::size_t i = rho.size(); i-- > k;) s.add(rho[i]);
    return std::sqrt(std::max(s.value(), 0.0));
  };
  const double s1 = sigma(1);
  const double s2 = sigma(2);
  if (s1 > 0.0 && s2 > 0.0) {
    const double alpha = fit->params.alpha;
    const double beta = fit->params.beta;
    r["remark_sigma"] =
        ok((beta * l3 / s1 + 2.0 * l1 * l2 / s2) *
           (1.0 / std::sqrt(alpha) + 1.0 / alpha));
  } else {
    r["remark_sigma"] = na("requires at least three non-degenerate summands");
  }
  return r;
}

}  // namespace pbdstein
