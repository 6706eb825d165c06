#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pbdstein/rates.hpp"

namespace pbdstein {

struct PmfMeta {
  std::string source;
  double tol = 0.0;
  bool renormalized = false;
  std::map<std::string, double> params;
  std::vector<std::string> notes;
};

// Distribution on {offset, ..., offset + N} plus a certified bound on the
// probability mass beyond the retained window.
struct TruncatedPmf {
  std::int64_t offset = 0;
  std::vector<double> probs;
  double tail_bound = 0.0;
  PmfMeta meta;

  std::int64_t trunc() const { return static_cast<std::int64_t>(probs.size()) - 1; }
  std::int64_t support_end() const { return offset + trunc(); }

  // P(X = k) for an absolute index k; zero outside the window.
  double at(std::int64_t k) const;

  static TruncatedPmf point_mass(std::int64_t k);
};

// Equilibrium of the quadratic-death chain. The window is extended until the
// one-step ratio r = alpha/death(N+1) is at most 1/2 and the geometric tail
// pi_N * r/(1-r) falls below tol.
TruncatedPmf pbd_equilibrium(const PBDParams& params, double tol = 1e-10);

// Equilibrium of a general polynomial birth-death chain. Same truncation
// rule; the ratio condition is certified for all later indices through a
// root bound on death(x+1) - 2*birth(x).
TruncatedPmf general_equilibrium(const PolynomialRates& rates, double tol = 1e-10);

// Poisson(mean) as the equilibrium of the unit-death chain.
TruncatedPmf poisson_pmf(double mean, double tol = 1e-10);

struct MomentResult {
  double value = 0.0;
  // Bound on the omitted sum_{k > N} k^r pi_k, derived from the geometric
  // tail certificate.
  double tail_term_bound = 0.0;
};

MomentResult moment(const TruncatedPmf& pmf, int r);

struct CdfTables {
  std::vector<double> lower;  // F(i)    = sum_{k <= i} probs[k], window index
  std::vector<double> upper;  // Fbar(i) = sum_{k >= i} probs[k]
};

CdfTables cdf_tables(const TruncatedPmf& pmf);

}  // namespace pbdstein
