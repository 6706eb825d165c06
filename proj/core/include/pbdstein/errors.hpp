#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace pbdstein {

// Invalid input: non-positive rates, probabilities outside [0,1], malformed
// polynomials, out-of-range indices or tolerances.
class domain_error : public std::invalid_argument {
 public:
  explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

// The requested quantity is mathematically undefined for this input, e.g. the
// moment-fit condition fails or an equilibrium series does not converge.
// condition() names the violated requirement.
class inapplicable_error : public std::runtime_error {
 public:
  inapplicable_error(std::string condition, const std::string& what)
      : std::runtime_error(what), condition_(std::move(condition)) {}
  const std::string& condition() const noexcept { return condition_; }

 private:
  std::string condition_;
};

// An internal cross-check failed: two routes to the same value disagree, a
// residual exceeded its contract, or a scan could not certify its stopping
// rule within the retained window.
class consistency_error : public std::runtime_error {
 public:
  explicit consistency_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pbdstein
