#include "pbdstein/rates.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pbdstein/errors.hpp"

namespace pbdstein {

double poly_eval(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
  return v;
}

std::vector<double> poly_shift_one(const std::vector<double>& c) {
  // c(x+1) via repeated synthetic division by (x - (-1)), i.e. Horner with
  // accumulation; binomial expansion term by term is equivalent and simpler.
  std::vector<double> out(c.size(), 0.0);
  for (std::size_t j = 0; j < c.size(); ++j) {
    // c_j * (x+1)^j
    double binom = 1.0;
    for (std::size_t k = 0; k <= j; ++k) {
      out[k] += c[j] * binom;
      binom = binom * static_cast<double>(j - k) / static_cast<double>(k + 1);
    }
  }
  return out;
}

namespace {

std::size_t effective_degree(const std::vector<double>& c) {
  std::size_t d = c.size();
  while (d > 0 && c[d - 1] == 0.0) --d;
  return d;  // number of meaningful coefficients; 0 means identically zero
}

}  // namespace

double cauchy_root_bound(const std::vector<double>& c) {
  const std::size_t d = effective_degree(c);
  if (d <= 1) return 0.0;
  const double lead = std::abs(c[d - 1]);
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < d; ++i) m = std::max(m, std::abs(c[i]) / lead);
  return 1.0 + m;
}

PolynomialRates::PolynomialRates(std::vector<double> birth_coeffs,
                                 std::vector<double> death_coeffs,
                                 std::optional<std::int64_t> cap)
    : birth(std::move(birth_coeffs)), death(std::move(death_coeffs)), support_cap(cap) {
  for (double c : birth)
    if (!std::isfinite(c)) throw domain_error("birth coefficient is not finite");
  for (double c : death)
    if (!std::isfinite(c)) throw domain_error("death coefficient is not finite");
  if (support_cap) {
    if (*support_cap < 0) throw domain_error("support_cap must be nonnegative");
    double scale = 1.0;
    for (double c : birth) scale += std::abs(c);
    const double at_cap = birth_rate(*support_cap);
    if (std::abs(at_cap) > 1e-12 * scale * (1.0 + std::abs(static_cast<double>(*support_cap))))
      throw domain_error("birth rate must vanish at the declared support_cap");
  }

  // Sign screen over the range where the polynomials can still change sign.
  // The equilibrium recursion re-checks every index it actually visits.
  constexpr std::int64_t kScanCap = 1 << 20;
  std::int64_t scan_end = static_cast<std::int64_t>(
      std::ceil(std::max(cauchy_root_bound(birth), cauchy_root_bound(death))));
  if (support_cap) scan_end = std::min(scan_end, *support_cap);
  scan_end = std::min(scan_end, kScanCap);
  for (std::int64_t i = 0; i <= scan_end; ++i) {
    const double b = birth_rate(i);
    if (b == 0.0) break;  // support ends here; later signs are unused
    if (b < 0.0) throw domain_error("birth rate negative at index " + std::to_string(i));
    if (i >= 1 && death_rate(i) <= 0.0)
      throw domain_error("death rate not positive at index " + std::to_string(i));
  }
}

PBDParams::PBDParams(double alpha_in, double beta_in) : alpha(alpha_in), beta(beta_in) {
  if (!(std::isfinite(alpha) && alpha > 0.0))
    throw domain_error("alpha must be finite and positive");
  if (!(std::isfinite(beta) && beta > 0.0))
    throw domain_error("beta must be finite and positive");
}

PolynomialRates PBDParams::rates() const {
  // death(i) = beta*i + i*(i-1) = (beta-1)*i + i^2
  return PolynomialRates({alpha}, {0.0, beta - 1.0, 1.0});
}

PBDParams PBDParams::from_ab(double a, double b) {
  if (!(std::isfinite(a) && a > 0.0)) throw domain_error("a must be finite and positive");
  if (!(std::isfinite(b) && b > 0.0))
    throw domain_error("b must be finite and positive (b = 0 is the unit-death chain)");
  return PBDParams(a / b, 1.0 / b);
}

}  // namespace pbdstein
