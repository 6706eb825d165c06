#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace pbdstein {

// c[0] + c[1]*x + c[2]*x^2 + ...
double poly_eval(const std::vector<double>& c, double x);

// Coefficients of c(x+1).
std::vector<double> poly_shift_one(const std::vector<double>& c);

// Cauchy bound: every real root of c lies in |x| <= 1 + max_i |c_i / c_lead|.
// Returns 0 for constant or all-zero polynomials.
double cauchy_root_bound(const std::vector<double>& c);

// Birth-death chain on the nonnegative integers with polynomial rates.
// birth(i) must be nonnegative and death(i) strictly positive for every index
// the equilibrium retains; violations are rejected here when they are
// detectable from the coefficients and otherwise at the offending index
// during the equilibrium recursion. A declared support cap m requires
// birth(m) = 0.
struct PolynomialRates {
  std::vector<double> birth;
  std::vector<double> death;
  std::optional<std::int64_t> support_cap;

  PolynomialRates(std::vector<double> birth_coeffs, std::vector<double> death_coeffs,
                  std::optional<std::int64_t> cap = std::nullopt);

  double birth_rate(std::int64_t i) const { return poly_eval(birth, static_cast<double>(i)); }
  double death_rate(std::int64_t i) const { return poly_eval(death, static_cast<double>(i)); }
};

// Constant-birth chain with quadratic death, birth = alpha and
// death(i) = beta*i + i*(i-1). Both parameters must be strictly positive;
// the alpha = 0 degenerate chain is the point mass at 0 and is represented
// as a pmf, not as parameters.
struct PBDParams {
  double alpha;
  double beta;

  PBDParams(double alpha_in, double beta_in);

  double death_rate(std::int64_t i) const {
    const double x = static_cast<double>(i);
    return x * (beta + x - 1.0);
  }

  PolynomialRates rates() const;

  // Same chain under the (a, b) parameterization: birth a and
  // death(i) = i + b*i*(i-1) with a = alpha/beta, b = 1/beta. The equilibrium
  // is identical; solutions of the associated difference equation scale by
  // 1/b. Requires b > 0 (b = 0 is the unit-death chain, see poisson_pmf).
  static PBDParams from_ab(double a, double b);
  double a() const { return alpha / beta; }
  double b() const { return 1.0 / beta; }
};

}  // namespace pbdstein
