#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace pbdstein {

// Neumaier variant of compensated summation.
class StableSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }

  // Exact when s is a power of two.
  void scale(double s) {
    sum_ *= s;
    comp_ *= s;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Fixed-shape pairwise reduction; the result depends only on the contents of
// v, not on how the caller produced or partitioned it.
inline double pairwise_total(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 8) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_total(v, lo, mid) + pairwise_total(v, mid, hi);
}

inline double pairwise_total(const std::vector<double>& v) {
  return v.empty() ? 0.0 : pairwise_total(v, 0, v.size());
}

}  // namespace pbdstein
