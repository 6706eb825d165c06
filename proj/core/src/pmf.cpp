#include "pbdstein/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>

#include "pbdstein/errors.hpp"
#include "pbdstein/stable_sum.hpp"

namespace pbdstein {

double TruncatedPmf::at(std::int64_t k) const {
  if (k < offset || k > support_end()) return 0.0;
  return probs[static_cast<std::size_t>(k - offset)];
}

TruncatedPmf TruncatedPmf::point_mass(std::int64_t k) {
  if (k < 0) throw domain_error("point mass index must be nonnegative");
  TruncatedPmf out;
  out.offset = k;
  out.probs = {1.0};
  out.meta.source = "point_mass";
  out.meta.params["k"] = static_cast<double>(k);
  return out;
}

namespace {

constexpr double kUnderflow = 1e-300;
constexpr double kRescaleAt = 1e250;
constexpr double kRescaleFactor = 0x1p-512;
constexpr std::int64_t kIterCap = 4'000'000;

// Ratio recursion w_{k+1} = w_k * birth(k)/death(k+1) from w_0 = 1 with exact
// power-of-two rescaling against overflow. The window closes once the
// one-step ratio r is at most 1/2 from a certified index on and the geometric
// tail w_N * r/(1-r) drops below tol times the running total. cert_from is
// the index from which r <= 1/2 is known to persist; pass 0 when the ratio is
// monotone decreasing.
template <typename BirthFn, typename DeathFn>
TruncatedPmf equilibrium_core(BirthFn birth, DeathFn death, double tol,
                              std::optional<std::int64_t> cap, std::int64_t cert_from,
                              PmfMeta meta) {
  if (!(tol > 0.0 && tol < 1.0)) throw domain_error("tol must lie in (0, 1)");

  std::vector<double> w;
  w.reserve(64);
  w.push_back(1.0);
  StableSum total;
  total.add(1.0);
  double tail_w = 0.0;        // unnormalized tail mass bound at the stop index
  bool ratio_ever_small = false;

  for (;;) {
    const std::int64_t n = static_cast<std::int64_t>(w.size()) - 1;
    if (cap && n == *cap) break;
    if (n >= kIterCap) {
      if (!ratio_ever_small)
        throw inapplicable_error("summability",
                                 "one-step ratio birth(n)/death(n+1) never fell to 1/2; "
                                 "the equilibrium series is not certifiably summable");
      throw consistency_error("equilibrium window exceeded the iteration cap");
    }

    const double a = birth(n);
    if (!(a >= 0.0)) throw domain_error("birth rate negative at index " + std::to_string(n));
    if (a == 0.0) break;  // exact finite support

    const double d = death(n + 1);
    if (!(d > 0.0))
      throw domain_error("death rate not positive at index " + std::to_string(n + 1));

    const double r = a / d;
    const bool certified = r <= 0.5 && n >= cert_from;
    if (certified) {
      ratio_ever_small = true;
      const double tail = w.back() * r / (1.0 - r);
      if (tail < tol * total.value()) {
        tail_w = tail;
        break;
      }
    }

    double next = w.back() * r;
    if (next > kRescaleAt) {
      for (double& x : w) x *= kRescaleFactor;
      total.scale(kRescaleFactor);
      next *= kRescaleFactor;
    }
    if (next < kUnderflow) {
      if (certified) {
        // fold the dropped weight and everything after it into the tail
        tail_w = next / (1.0 - r);
        if (tail_w >= tol * total.value())
          throw consistency_error("requested tol is below what doubles can represent");
        break;
      }
      throw consistency_error(
          "equilibrium weights underflowed before the tail certificate applied");
    }
    w.push_back(next);
    total.add(next);
  }

  TruncatedPmf out;
  const double s = total.value();
  out.probs.resize(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) out.probs[k] = w[k] / s;
  out.tail_bound = tail_w / s;
  meta.tol = tol;
  meta.renormalized = true;
  out.meta = std::move(meta);
  return out;
}

}  // namespace

TruncatedPmf pbd_equilibrium(const PBDParams& params, double tol) {
  PmfMeta meta;
  meta.source = "pbd_equilibrium";
  meta.params["alpha"] = params.alpha;
  meta.params["beta"] = params.beta;
  // death(i) increases in i, so the one-step ratio is monotone decreasing
  return equilibrium_core([&](std::int64_t) { return params.alpha; },
                          [&](std::int64_t i) { return params.death_rate(i); }, tol,
                          std::nullopt, 0, std::move(meta));
}

TruncatedPmf general_equilibrium(const PolynomialRates& rates, double tol) {
  PmfMeta meta;
  meta.source = "general_equilibrium";
  if (rates.support_cap) meta.params["support_cap"] = static_cast<double>(*rates.support_cap);

  std::int64_t cert_from = 0;
  if (!rates.support_cap) {
    // margin(x) = death(x+1) - 2*birth(x); beyond its Cauchy root bound the
    // sign is the leading coefficient's, so margin >= 0 there makes the
    // one-step ratio stay at or below 1/2 for every later index
    std::vector<double> margin = poly_shift_one(rates.death);
    margin.resize(std::max(margin.size(), rates.birth.size()), 0.0);
    for (std::size_t j = 0; j < rates.birth.size(); ++j) margin[j] -= 2.0 * rates.birth[j];
    std::size_t d = margin.size();
    while (d > 0 && margin[d - 1] == 0.0) --d;
    if (d == 0) {
      cert_from = 0;  // ratio identically 1/2
    } else if (margin[d - 1] < 0.0) {
      cert_from = kIterCap + 1;  // ratio eventually above 1/2; never certify
    } else {
      cert_from = static_cast<std::int64_t>(std::ceil(cauchy_root_bound(margin)));
    }
  }

  return equilibrium_core([&](std::int64_t i) { return rates.birth_rate(i); },
                          [&](std::int64_t i) { return rates.death_rate(i); }, tol,
                          rates.support_cap, cert_from, std::move(meta));
}

TruncatedPmf poisson_pmf(double mean, double tol) {
  if (!(std::isfinite(mean) && mean >= 0.0))
    throw domain_error("poisson mean must be finite and nonnegative");
  if (mean == 0.0) {
    TruncatedPmf out = TruncatedPmf::point_mass(0);
    out.meta.source = "poisson";
    out.meta.params.clear();
    out.meta.params["mean"] = 0.0;
    out.meta.tol = tol;
    return out;
  }
  PmfMeta meta;
  meta.source = "poisson";
  meta.params["mean"] = mean;
  return equilibrium_core([&](std::int64_t) { return mean; },
                          [](std::int64_t i) { return static_cast<double>(i); }, tol,
                          std::nullopt, 0, std::move(meta));
}

MomentResult moment(const TruncatedPmf& pmf, int r) {
  if (r < 0) throw domain_error("moment order must be nonnegative");

  auto ipow = [](double x, int e) {
    double v = 1.0;
    for (int j = 0; j < e; ++j) v *= x;
    return v;
  };

  StableSum acc;
  for (std::size_t k = 0; k < pmf.probs.size(); ++k)
    acc.add(ipow(static_cast<double>(pmf.offset + static_cast<std::int64_t>(k)), r) *
            pmf.probs[k]);

  MomentResult out;
  out.value = acc.value();
  if (pmf.tail_bound == 0.0) {
    out.tail_term_bound = 0.0;
  } else if (r == 0) {
    out.tail_term_bound = pmf.tail_bound;
  } else {
    // sum_{k>N} k^r pi_k <= 2 * tail * (N+1)^r * sum_{j>=1} j^r 2^-j, using
    // (N+j) <= (N+1) j and pi_{N+j} <= tail * 2^{1-j}
    double geo = 0.0;
    double term;
    for (int j = 1; j <= 2048; ++j) {
      term = ipow(static_cast<double>(j), r) * std::pow(0.5, j);
      geo += term;
      if (term < 1e-18 * geo) break;
    }
    out.tail_term_bound =
        2.0 * pmf.tail_bound * ipow(static_cast<double>(pmf.support_end() + 1), r) * geo;
  }
  return out;
}

CdfTables cdf_tables(const TruncatedPmf& pmf) {
  const std::size_t n = pmf.probs.size();
  CdfTables t;
  t.lower.resize(n);
  t.upper.resize(n);
  StableSum fwd;
  for (std::size_t i = 0; i < n; ++i) {
    fwd.add(pmf.probs[i]);
    t.lower[i] = fwd.value();
  }
  StableSum bwd;
  for (std::size_t i = n; i-- > 0;) {
    bwd.add(pmf.probs[i]);
    t.upper[i] = bwd.value();
  }
  return t;
}

}  // namespace pbdstein
