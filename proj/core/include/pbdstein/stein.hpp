#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pbdstein/pmf.hpp"
#include "pbdstein/profile.hpp"
#include "pbdstein/rates.hpp"

namespace pbdstein {

// Solution g of the difference equation
//   alpha*g(i+1) - death(i)*g(i) = f(i) - E_pi[f],   g(0) = g(1),
// assembled on the retained window of an equilibrium pmf.
struct SteinSolution {
  std::vector<double> g;          // indices 0..N
  std::vector<double> residuals;  // |lhs - rhs| at i = 0..N-1
  double max_residual = 0.0;
  double f_sup = 0.0;             // max |f| on the window
};

SteinSolution stein_solve(const PBDParams& params, const TruncatedPmf& pmf,
                          const std::function<double(std::int64_t)>& f);

// Solution for the indicator f = 1{k}: negative at indices <= k, positive
// above, with g(0) = g(1).
std::vector<double> indicator_solution(const PBDParams& params, const TruncatedPmf& pmf,
                                       std::int64_t k);

// alpha*g(i+1) - death(i)*g(i)
double apply_stein_operator(const std::vector<double>& g, const PBDParams& params,
                            std::int64_t i);

// Mean one-step passage times of the chain: e_plus[i] from i to i+1 and
// e_minus[i] from i to i-1. e_minus[0] is +infinity (state -1 is unreachable).
struct HittingMeans {
  std::vector<double> e_plus;
  std::vector<double> e_minus;
};

HittingMeans hitting_means(const PBDParams& params, const TruncatedPmf& pmf);

struct SupremumResult {
  double value = 0.0;
  std::int64_t arg_index = 0;
  // last index the scan visited before its stopping rule certified the rest
  std::int64_t scan_end = 0;
};

// sup over |f| <= 1 of max_i |g_f(i)|. Equals mean/alpha; the value is
// cross-checked against the assembled table for f(k) = -k.
SupremumResult exact_sup_g(const PBDParams& params, const TruncatedPmf& pmf);

// sup over 1-Lipschitz f of |g_f(i+1) - g_f(i)|, maximized over i >= 1. The
// scan stops once the tail envelope max{i, sqrt(alpha)+1} * min(1/alpha,
// 1/death(i)) falls below the running maximum.
SupremumResult exact_sup_delta_g(const PBDParams& params, const TruncatedPmf& pmf,
                                 std::int64_t i_max = -1);

// sup over 1-Lipschitz f of the second difference |g_f(i+2) - 2 g_f(i+1) +
// g_f(i)|, maximized over i >= 0.
SupremumResult exact_sup_delta2_g(const PBDParams& params, const TruncatedPmf& pmf,
                                  std::int64_t i_max = -1);

// Per-index suprema over 1-Lipschitz f, entries i = 0..upto. Entry 0 of the
// first-difference profile is 0 by the g(0) = g(1) convention; entry 0 of the
// second-difference profile equals the first-difference supremum at 1.
std::vector<double> sup_delta_g_profile(const PBDParams& params, const TruncatedPmf& pmf,
                                        std::int64_t upto);
std::vector<double> sup_delta2_g_profile(const PBDParams& params, const TruncatedPmf& pmf,
                                         std::int64_t upto);

// Identity linking E[alpha*g(W+1) - death(W)*g(W)] for a Bernoulli-sum W to
// its second-difference perturbation expansion. rhs carries two first-order
// terms whose coefficients vanish exactly when (alpha, beta) are the moment
// fit of the profile, plus the three expansion sums over dropped summands.
struct ExpansionCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;                 // lhs - rhs
  double first_order_coeff = 0.0;   // multiplies E g(W+1)
  double second_order_coeff = 0.0;  // multiplies E Delta g(W+1)
};

ExpansionCheck expansion_identity(const BernoulliProfile& profile, const PBDParams& params,
                                  const std::vector<double>& g);

}  // namespace pbdstein
