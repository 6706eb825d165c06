#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pbdstein/rates.hpp"

namespace pbdstein {

// Immigration-death particle system restricted to integer sites <= site,
// started with sites 1..site occupied. Immigrants arrive at rate alpha at the
// closest vacant site left of site 1; the particle at site n dies at rate
// beta + 2 * #{occupied sites below n}. Returns the first time the focus site
// becomes vacant. Its expectation solves the quadratic-death difference
// equation for f(k) = -k at index `site`.
double simulate_vacancy_time(const PBDParams& params, std::int64_t site, std::uint64_t seed);

struct CouplingEstimate {
  std::string target;
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
};

// Monte-Carlo mean of the vacancy time over n_samples independent streams
// derived from seed. The result is identical for any thread count; threads
// only bounds the parallel width. Requires n_samples >= 100.
CouplingEstimate estimate_vacancy_mean(const PBDParams& params, std::int64_t site,
                                       std::int64_t n_samples, std::uint64_t seed,
                                       int threads = 1);

// Number of occupied sites <= site at time t in the same particle system.
// Distributed as the birth-death chain started from `site`.
std::int64_t particle_count_at(const PBDParams& params, std::int64_t site, double t,
                               std::uint64_t seed);

struct PathPoint {
  double time;
  std::int64_t state;
};

// Jump-chain path of the birth-death process itself: birth alpha, death
// beta*k + k*(k-1), recorded as (event time, new state) pairs starting with
// (0, initial).
std::vector<PathPoint> simulate_chain_path(const PBDParams& params, std::int64_t initial,
                                           double t_horizon, std::uint64_t seed);

}  // namespace pbdstein
