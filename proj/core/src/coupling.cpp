#include "pbdstein/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "pbdstein/errors.hpp"
#include "pbdstein/rng.hpp"
#include "pbdstein/stable_sum.hpp"

namespace pbdstein {

namespace {

constexpr std::int64_t kEventCap = 1'000'000'000;

// Occupied integer sites, kept sorted ascending. The death weight of the
// particle at sorted position q is beta + 2q; the weights over a full
// configuration of z particles sum to the chain's death rate z*(beta+z-1).
struct ParticleSystem {
  std::vector<std::int64_t> sites;

  bool occupied(std::int64_t s) const {
    return std::binary_search(sites.begin(), sites.end(), s);
  }
  void immigrate() {
    std::int64_t s = 0;
    while (occupied(s)) --s;
    sites.insert(std::lower_bound(sites.begin(), sites.end(), s), s);
  }
  // picks the dying particle by rank weight and removes it; returns its site
  std::int64_t kill(double u, double beta) {
    const std::size_t z = sites.size();
    std::size_t q = z - 1;
    double acc = 0.0;
    for (std::size_t j = 0; j < z; ++j) {
      acc += beta + 2.0 * static_cast<double>(j);
      if (u < acc) {
        q = j;
        break;
      }
    }
    const std::int64_t s = sites[q];
    sites.erase(sites.begin() + static_cast<std::ptrdiff_t>(q));
    return s;
  }
};

}  // namespace

double simulate_vacancy_time(const PBDParams& params, std::int64_t site,
                             std::uint64_t seed) {
  if (site < 1) throw domain_error("the focus site must be at least 1");

  ParticleSystem sys;
  for (std::int64_t s = 1; s <= site; ++s) sys.sites.push_back(s);

  SplitMix64 rng(seed);
  double t = 0.0;
  for (std::int64_t events = 0; events < kEventCap; ++events) {
    const double z = static_cast<double>(sys.sites.size());
    const double death = z * (params.beta + z - 1.0);
    const double total = params.alpha + death;
    t += rng.exponential(total);
    const double u = rng.uniform() * total;
    if (u < params.alpha) {
      sys.immigrate();
    } else if (sys.kill(u - params.alpha, params.beta) == site) {
      return t;
    }
  }
  throw consistency_error("vacancy simulation exceeded its event budget");
}

CouplingEstimate estimate_vacancy_mean(const PBDParams& params, std::int64_t site,
                                       std::int64_t n_samples, std::uint64_t seed,
                                       int threads) {
  if (n_samples < 100) throw domain_error("need at least 100 samples");
  if (threads < 1) throw domain_error("threads must be positive");

  // one private stream per sample index, so the values (and therefore the
  // estimate) do not depend on the thread count
  std::vector<double> values(static_cast<std::size_t>(n_samples));
  auto worker = [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t k = lo; k < hi; ++k)
      values[static_cast<std::size_t>(k)] = simulate_vacancy_time(
          params, site, stream_seed(seed, static_cast<std::uint64_t>(k)));
  };
  if (threads == 1) {
    worker(0, n_samples);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
      const std::int64_t lo = n_samples * w / threads;
      const std::int64_t hi = n_samples * (w + 1) / threads;
      pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  const double n = static_cast<double>(n_samples);
  const double mean = pairwise_total(values) / n;
  std::vector<double> sq(values.size());
  for (std::size_t k = 0; k < values.size(); ++k)
    sq[k] = (values[k] - mean) * (values[k] - mean);
  const double sample_var = pairwise_total(sq) / (n - 1.0);

  CouplingEstimate est;
  est.target = "vacancy_mean_site_" + std::to_string(site);
  est.mean = mean;
  est.std_error = std::sqrt(sample_var / n);
  est.n_samples = n_samples;
  est.seed = seed;
  return est;
}

std::int64_t particle_count_at(const PBDParams& params, std::int64_t site, double t,
                               std::uint64_t seed) {
  if (site < 0) throw domain_error("site must be non-negative");
  if (!(t >= 0.0) || !std::isfinite(t)) throw domain_error("time must be finite and non-negative");

  ParticleSystem sys;
  for (std::int64_t s = 1; s <= site; ++s) sys.sites.push_back(s);

  SplitMix64 rng(seed);
  double now = 0.0;
  for (std::int64_t events = 0; events < kEventCap; ++events) {
    const double z = static_cast<double>(sys.sites.size());
    const double death = z * (params.beta + z - 1.0);
    const double total = params.alpha + death;
    now += rng.exponential(total);
    if (now > t) return static_cast<std::int64_t>(sys.sites.size());
    const double u = rng.uniform() * total;
    if (u < params.alpha) {
      sys.immigrate();
    } else {
      sys.kill(u - params.alpha, params.beta);
    }
  }
  throw consistency_error("particle simulation exceeded its event budget");
}

std::vector<PathPoint> simulate_chain_path(const PBDParams& params, std::int64_t initial,
                                           double t_horizon, std::uint64_t seed) {
  if (initial < 0) throw domain_error("initial state must be non-negative");
  if (!(t_horizon >= 0.0) || !std::isfinite(t_horizon))
    throw domain_error("horizon must be finite and non-negative");

  std::vector<PathPoint> path;
  path.push_back(PathPoint{0.0, initial});

  SplitMix64 rng(seed);
  std::int64_t z = initial;
  double now = 0.0;
  for (std::int64_t events = 0; events < kEventCap; ++events) {
    const double death = params.death_rate(z);
    const double total = params.alpha + death;
    now += rng.exponential(total);
    if (now > t_horizon) return path;
    z += (rng.uniform() * total < params.alpha) ? 1 : -1;
    path.push_back(PathPoint{now, z});
  }
  throw consistency_error("path simulation exceeded its event budget");
}

}  // namespace pbdstein
