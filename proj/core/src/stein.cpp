#include "pbdstein/stein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pbdstein/errors.hpp"
#include "pbdstein/stable_sum.hpp"

namespace pbdstein {

namespace {

// Shared cumulative tables on the retained window. e_plus[i] = F(i) /
// (alpha*pi_i) is the mean passage time i -> i+1, e_minus[i] = Fbar(i) /
// (alpha*pi_{i-1}) the mean passage time i -> i-1 (detailed balance turns
// beta_i*pi_i into alpha*pi_{i-1}).
struct Tables {
  std::int64_t n = 0;  // last retained index
  std::vector<double> F, Fb;
  std::vector<double> ep, em;
};

Tables build_tables(const PBDParams& params, const TruncatedPmf& pmf) {
  if (pmf.offset != 0)
    throw domain_error("stein tables require a pmf starting at 0");
  if (pmf.probs.size() < 2) throw domain_error("pmf window too short");
  for (std::size_t k = 0; k < pmf.probs.size(); ++k)
    if (!(pmf.probs[k] > 0.0))
      throw consistency_error(
          "retained probability underflowed to zero at index " + std::to_string(k) +
          "; the parameter range exceeds what the tables can represent");

  Tables t;
  t.n = pmf.trunc();
  const std::size_t n = pmf.probs.size();

  t.F.resize(n);
  t.Fb.resize(n);
  StableSum fwd;
  for (std::size_t i = 0; i < n; ++i) {
    fwd.add(pmf.probs[i]);
    t.F[i] = fwd.value();
  }
  StableSum bwd;
  for (std::size_t i = n; i-- > 0;) {
    bwd.add(pmf.probs[i]);
    t.Fb[i] = bwd.value();
  }

  // spot-check that the pmf actually balances these parameters
  for (std::int64_t i : {std::int64_t{1}, t.n / 2, t.n}) {
    if (i < 1) continue;
    const double lhs = params.alpha * pmf.probs[static_cast<std::size_t>(i - 1)];
    const double rhs = params.death_rate(i) * pmf.probs[static_cast<std::size_t>(i)];
    if (std::abs(lhs - rhs) > 1e-8 * std::max({lhs, rhs, 1e-300}))
      throw consistency_error("pmf does not satisfy detailed balance for these parameters");
  }

  t.ep.resize(n);
  t.em.resize(n);
  t.em[0] = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    t.ep[i] = t.F[i] / (params.alpha * pmf.probs[i]);
    if (i >= 1) t.em[i] = t.Fb[i] / (params.alpha * pmf.probs[i - 1]);
  }
  return t;
}

// Envelope on sup_f |g_f(i+1) - g_f(i)| over 1-Lipschitz f.
double delta_envelope(const PBDParams& params, std::int64_t i) {
  const double x = static_cast<double>(i);
  const double lead = std::max(x, std::sqrt(params.alpha) + 1.0);
  return lead * std::min(1.0 / params.alpha, 1.0 / params.death_rate(i));
}

// True once the envelope is decreasing in i, which needs i past sqrt(alpha)+1
// and past the point where death exceeds alpha.
bool envelope_decreasing(const PBDParams& params, std::int64_t i) {
  return static_cast<double>(i) > std::sqrt(params.alpha) + 1.0 &&
         params.death_rate(i) > params.alpha;
}

double weighted_below(const TruncatedPmf& pmf, std::int64_t i) {
  // sum_{k < i} (i - k) pi_k
  StableSum s;
  for (std::int64_t k = 0; k < i; ++k)
    s.add(static_cast<double>(i - k) * pmf.probs[static_cast<std::size_t>(k)]);
  return s.value();
}

double weighted_above(const TruncatedPmf& pmf, std::int64_t from, std::int64_t center) {
  // sum_{k >= from} (k - center) pi_k, summed tail-first
  StableSum s;
  for (std::int64_t k = pmf.trunc(); k >= from; --k)
    s.add(static_cast<double>(k - center) * pmf.probs[static_cast<std::size_t>(k)]);
  return s.value();
}

// sup over 1-Lipschitz f of |g_f(i+1) - g_f(i)| at a fixed i >= 1, attained
// by f(k) = -|k - i|.
double sup_delta_at(const Tables& t, const TruncatedPmf& pmf, std::int64_t i) {
  const std::size_t ui = static_cast<std::size_t>(i);
  const double drop_minus = t.em[ui] - t.em[ui + 1];   // >= 0, e_minus decreasing
  const double rise_plus = t.ep[ui] - t.ep[ui - 1];    // >= 0, e_plus increasing
  return drop_minus * weighted_below(pmf, i) + rise_plus * weighted_above(pmf, i + 1, i);
}

// sup over 1-Lipschitz f of |Delta^2 g_f(i)| at a fixed i >= 1. The extremal
// f has slope -1 left of i, a free +-1 step to f(i+1), and slope -1 after;
// the free step contributes the absolute edge term.
double sup_delta2_at(const Tables& t, const TruncatedPmf& pmf, std::int64_t i) {
  const std::size_t ui = static_cast<std::size_t>(i);
  const double conv_plus = t.ep[ui + 1] - 2.0 * t.ep[ui] + t.ep[ui - 1];    // >= 0
  const double conv_minus = t.em[ui + 2] - 2.0 * t.em[ui + 1] + t.em[ui];   // >= 0
  const double cross = t.em[ui + 2] + 2.0 * t.ep[ui] - t.ep[ui - 1];
  const double edge = pmf.probs[ui + 1] * cross - conv_plus * t.Fb[ui + 2];
  return conv_minus * weighted_below(pmf, i) +
         conv_plus * weighted_above(pmf, i + 2, i + 1) + std::abs(edge);
}

}  // namespace

SteinSolution stein_solve(const PBDParams& params, const TruncatedPmf& pmf,
                          const std::function<double(std::int64_t)>& f) {
  const Tables t = build_tables(params, pmf);
  const std::int64_t n = t.n;
  const std::size_t un = pmf.probs.size();

  std::vector<double> fv(un);
  double f_sup = 0.0;
  for (std::int64_t k = 0; k <= n; ++k) {
    fv[static_cast<std::size_t>(k)] = f(k);
    if (!std::isfinite(fv[static_cast<std::size_t>(k)]))
      throw domain_error("f is not finite at index " + std::to_string(k));
    f_sup = std::max(f_sup, std::abs(fv[static_cast<std::size_t>(k)]));
  }

  // prefix A(j) = sum_{k<=j} f(k) pi_k and suffix B(i) = sum_{k>=i} f(k) pi_k
  std::vector<double> A(un), B(un);
  StableSum fwd;
  for (std::size_t k = 0; k < un; ++k) {
    fwd.add(fv[k] * pmf.probs[k]);
    A[k] = fwd.value();
  }
  StableSum bwd;
  for (std::size_t k = un; k-- > 0;) {
    bwd.add(fv[k] * pmf.probs[k]);
    B[k] = bwd.value();
  }
  const double pi_f = A[un - 1];

  // g(i) = [A(i-1) - pi(f) F(i-1)] / (alpha pi_{i-1})
  //      = [pi(f) Fbar(i) - B(i)] / (alpha pi_{i-1});
  // the two numerators are identical in exact arithmetic, so pick the side
  // whose leading terms are small
  SteinSolution sol;
  sol.g.resize(un);
  sol.f_sup = f_sup;
  for (std::int64_t i = 1; i <= n; ++i) {
    const std::size_t ui = static_cast<std::size_t>(i);
    const double denom = params.alpha * pmf.probs[ui - 1];
    const double num = (t.F[ui - 1] <= 0.5) ? (A[ui - 1] - pi_f * t.F[ui - 1])
                                            : (pi_f * t.Fb[ui] - B[ui]);
    sol.g[ui] = num / denom;
  }
  sol.g[0] = sol.g[1];

  sol.residuals.resize(un - 1);
  for (std::int64_t i = 0; i < n; ++i) {
    const std::size_t ui = static_cast<std::size_t>(i);
    const double lhs = params.alpha * sol.g[ui + 1] - params.death_rate(i) * sol.g[ui];
    sol.residuals[ui] = std::abs(lhs - (fv[ui] - pi_f));
    sol.max_residual = std::max(sol.max_residual, sol.residuals[ui]);
  }
  const double budget =
      1e-9 * (1.0 + f_sup) + static_cast<double>(n) * pmf.tail_bound;
  if (sol.max_residual > budget)
    throw consistency_error("stein residual " + std::to_string(sol.max_residual) +
                            " exceeds its contract");
  return sol;
}

std::vector<double> indicator_solution(const PBDParams& params, const TruncatedPmf& pmf,
                                       std::int64_t k) {
  const Tables t = build_tables(params, pmf);
  if (k < 0 || k > t.n) throw domain_error("indicator index outside the retained window");

  const double pk = pmf.probs[static_cast<std::size_t>(k)];
  std::vector<double> g(pmf.probs.size());
  for (std::int64_t i = 1; i <= t.n; ++i) {
    const std::size_t ui = static_cast<std::size_t>(i);
    g[ui] = (i <= k) ? -pk * t.ep[ui - 1] : pk * t.em[ui];
  }
  g[0] = g[1];
  return g;
}

double apply_stein_operator(const std::vector<double>& g, const PBDParams& params,
                            std::int64_t i) {
  if (i < 0 || i + 1 >= static_cast<std::int64_t>(g.size()))
    throw domain_error("stein operator index outside the table");
  return params.alpha * g[static_cast<std::size_t>(i + 1)] -
         params.death_rate(i) * g[static_cast<std::size_t>(i)];
}

HittingMeans hitting_means(const PBDParams& params, const TruncatedPmf& pmf) {
  const Tables t = build_tables(params, pmf);
  return HittingMeans{t.ep, t.em};
}

SupremumResult exact_sup_g(const PBDParams& params, const TruncatedPmf& pmf) {
  const double direct = moment(pmf, 1).value / params.alpha;

  // second route: the assembled solution for f(k) = -k, whose maximum the
  // direct value must reproduce
  const SteinSolution sol = stein_solve(params, pmf, [](std::int64_t k) {
    return -static_cast<double>(k);
  });
  double best = 0.0;
  std::int64_t arg = 1;
  for (std::int64_t i = 1; i <= pmf.trunc(); ++i) {
    const double v = std::abs(sol.g[static_cast<std::size_t>(i)]);
    if (v > best) {
      best = v;
      arg = i;
    }
  }
  if (std::abs(direct - best) > 1e-10 * std::max(direct, 1e-300))
    throw consistency_error("sup |g_f| cross-check failed: mean/alpha = " +
                            std::to_string(direct) + " vs table " + std::to_string(best));
  return SupremumResult{direct, arg, pmf.trunc()};
}

SupremumResult exact_sup_delta_g(const PBDParams& params, const TruncatedPmf& pmf,
                                 std::int64_t i_max) {
  const Tables t = build_tables(params, pmf);
  const std::int64_t hard_cap = t.n - 2;
  if (hard_cap < 1)
    throw consistency_error("window too short for the first-difference scan; lower tol");
  if (i_max < 0) i_max = hard_cap;
  if (i_max < 1 || i_max > hard_cap)
    throw domain_error("i_max must lie in [1, N-2]");

  SupremumResult res;
  for (std::int64_t i = 1; i <= i_max; ++i) {
    const double s = sup_delta_at(t, pmf, i);
    if (s > res.value) {
      res.value = s;
      res.arg_index = i;
    }
    res.scan_end = i;
    if (envelope_decreasing(params, i) && delta_envelope(params, i) < res.value)
      return res;
  }
  throw consistency_error(
      "the tail envelope never fell below the running maximum; lower tol to widen the window");
}

SupremumResult exact_sup_delta2_g(const PBDParams& params, const TruncatedPmf& pmf,
                                  std::int64_t i_max) {
  const Tables t = build_tables(params, pmf);
  const std::int64_t hard_cap = t.n - 3;
  if (hard_cap < 1)
    throw consistency_error("window too short for the second-difference scan; lower tol");
  if (i_max < 0) i_max = hard_cap;
  if (i_max < 1 || i_max > hard_cap)
    throw domain_error("i_max must lie in [1, N-3]");

  // |Delta^2 g_f(0)| = |Delta g_f(1)| by the g(0) = g(1) convention
  SupremumResult res;
  res.value = sup_delta_at(t, pmf, 1);
  res.arg_index = 0;
  for (std::int64_t i = 1; i <= i_max; ++i) {
    const double s = sup_delta2_at(t, pmf, i);
    if (s > res.value) {
      res.value = s;
      res.arg_index = i;
    }
    res.scan_end = i;
    // |Delta^2 g_f(i)| <= |Delta g_f(i)| + |Delta g_f(i+1)|
    if (envelope_decreasing(params, i) &&
        delta_envelope(params, i) + delta_envelope(params, i + 1) < res.value)
      return res;
  }
  throw consistency_error(
      "the tail envelope never fell below the running maximum; lower tol to widen the window");
}

std::vector<double> sup_delta_g_profile(const PBDParams& params, const TruncatedPmf& pmf,
                                        std::int64_t upto) {
  const Tables t = build_tables(params, pmf);
  if (upto < 0 || upto > t.n - 2) throw domain_error("profile end must lie in [0, N-2]");
  std::vector<double> out(static_cast<std::size_t>(upto) + 1, 0.0);
  for (std::int64_t i = 1; i <= upto; ++i)
    out[static_cast<std::size_t>(i)] = sup_delta_at(t, pmf, i);
  return out;
}

std::vector<double> sup_delta2_g_profile(const PBDParams& params, const TruncatedPmf& pmf,
                                         std::int64_t upto) {
  const Tables t = build_tables(params, pmf);
  if (upto < 0 || upto > t.n - 3) throw domain_error("profile end must lie in [0, N-3]");
  std::vector<double> out(static_cast<std::size_t>(upto) + 1, 0.0);
  out[0] = sup_delta_at(t, pmf, 1);
  for (std::int64_t i = 1; i <= upto; ++i)
    out[static_cast<std::size_t>(i)] = sup_delta2_at(t, pmf, i);
  return out;
}

ExpansionCheck expansion_identity(const BernoulliProfile& profile, const PBDParams& params,
                                  const std::vector<double>& g) {
  const std::size_t n = profile.size();
  if (n > 20)
    throw domain_error("expansion check is limited to profiles with at most 20 summands");
  if (g.size() < n + 3)
    throw domain_error("g table must extend at least two indices past the profile size");

  const double l1 = profile.lambda(1);
  const double l2 = profile.lambda(2);
  const double l3 = profile.lambda(3);

  // pmf of the full sum and of the sums with one or two summands removed
  auto convolve_without = [&](std::size_t skip_a, std::size_t skip_b) {
    std::vector<double> q{1.0};
    for (std::size_t i = 0; i < n; ++i) {
      if (i == skip_a || i == skip_b) continue;
      q.push_back(0.0);
      for (std::size_t k = q.size() - 1; k >= 1; --k)
        q[k] = q[k] * (1.0 - profile.p[i]) + q[k - 1] * profile.p[i];
      q[0] *= (1.0 - profile.p[i]);
    }
    return q;
  };
  const std::vector<double> qW = convolve_without(n, n);

  auto expect = [&](const std::vector<double>& q, auto&& h) {
    StableSum s;
    for (std::size_t w = 0; w < q.size(); ++w)
      s.add(q[w] * h(static_cast<std::int64_t>(w)));
    return s.value();
  };
  auto d2g = [&](std::int64_t x) {
    const std::size_t u = static_cast<std::size_t>(x);
    return g[u + 2] - 2.0 * g[u + 1] + g[u];
  };

  ExpansionCheck out;
  out.lhs = expect(qW, [&](std::int64_t w) {
    return params.alpha * g[static_cast<std::size_t>(w) + 1] -
           params.death_rate(w) * g[static_cast<std::size_t>(w)];
  });

  out.first_order_coeff = params.alpha - (params.beta * l1 + l1 * l1 - l2);
  out.second_order_coeff =
      params.beta * l2 - l1 * l1 + l2 + 2.0 * l1 * l2 - 2.0 * l3;

  const double e_g1 = expect(qW, [&](std::int64_t w) {
    return g[static_cast<std::size_t>(w) + 1];
  });
  const double e_dg1 = expect(qW, [&](std::int64_t w) {
    const std::size_t u = static_cast<std::size_t>(w);
    return g[u + 2] - g[u + 1];
  });

  StableSum expansion;
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double> qi = convolve_without(i, i);
    const double pi = profile.p[i];
    expansion.add(-params.beta * pi * pi * pi *
                  expect(qi, [&](std::int64_t w) { return d2g(w + 1); }));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::vector<double> qij = convolve_without(i, j);
      const double pi = profile.p[i];
      const double pj = profile.p[j];
      const double at2 = expect(qij, [&](std::int64_t w) { return d2g(w + 2); });
      const double at1 = expect(qij, [&](std::int64_t w) { return d2g(w + 1); });
      // ordered pairs (i,j) and (j,i) contribute equally
      expansion.add(2.0 * pi * pi * pj * pj * (1.0 - pi - pj) * at2);
      expansion.add(2.0 * pi * pj * (pi + pj) * (1.0 - pi) * (1.0 - pj) * at1);
    }
  }

  out.rhs = out.first_order_coeff * e_g1 + out.second_order_coeff * e_dg1 +
            expansion.value();
  out.gap = out.lhs - out.rhs;
  return out;
}

}  // namespace pbdstein
