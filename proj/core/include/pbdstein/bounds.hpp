#pragma once

#include <map>
#include <optional>
#include <string>

#include "pbdstein/profile.hpp"
#include "pbdstein/rates.hpp"

namespace pbdstein {

struct BoundEntry {
  std::optional<double> value;
  std::string reason;  // set when the entry is inapplicable

  bool applicable() const { return value.has_value(); }
};

// Stable-ordered report keyed by bound id.
using BoundReport = std::map<std::string, BoundEntry>;

// Closed-form bounds for the quadratic-death chain with birth alpha:
//   sup_g_15, sup_dg_16, sup_d2g_17, sup_d2g_17_relax (the 3/alpha relaxation),
//   mean_lower_210, mean_upper_210.
// Supported domain: alpha, beta in [1e-3, 1e6].
BoundReport factor_bounds(const PBDParams& params);

// The same bounds under the (a, b) parameterization (solutions scale by 1/b):
//   sup_gt_18, sup_dgt_19, sup_d2gt_110.
// b = 0 is the unit-death limit; degenerate branches are replaced by their
// limits. Supported domain: a in [1e-3, 1e6], b in [0, 1e6].
BoundReport factor_bounds_ab(double a, double b);

// Unit-death (Poisson) bounds: pn_g_111, pn_dg_112, pn_d2g_113.
BoundReport poisson_factor_bounds(double a);

// Approximation-error bounds for a Bernoulli-sum profile:
//   pbd_application_114  distance to the fitted quadratic-death equilibrium
//   bx_shifted           distance to the shifted Poisson, 4*theta2/(1-theta2)
//   remark_sigma         variance-scaled variant using the fitted parameters
// Entries whose preconditions fail are reported inapplicable with a reason,
// never silently dropped.
BoundReport approx_bounds(const BernoulliProfile& profile);

}  // namespace pbdstein
