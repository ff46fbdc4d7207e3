#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "esseen/dist.hpp"

namespace test_support {

// xorshift64*; tests only need a reproducible stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
  std::uint64_t next() {
    s_ ^= s_ >> 12;
    s_ ^= s_ << 25;
    s_ ^= s_ >> 27;
    return s_ * 0x2545f4914f6cdd1dULL;
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }

 private:
  std::uint64_t s_;
};

// Random finite distribution with `atoms` distinct points in [-3, 3].
inline esseen::DiscreteDist random_dist(Rng& rng, int atoms) {
  std::vector<double> x, p;
  double total = 0.0;
  for (int i = 0; i < atoms; ++i) {
    x.push_back(rng.uniform(-3.0, 3.0));
    p.push_back(0.05 + rng.uniform());
    total += p.back();
  }
  for (double& v : p) v /= total;
  return esseen::make_discrete(x, p);
}

// Centred version of random_dist (mean shifted to zero).
inline esseen::DiscreteDist random_centered(Rng& rng, int atoms) {
  const esseen::DiscreteDist d = random_dist(rng, atoms);
  const double mu = esseen::moments(d).mean;
  std::vector<double> x(d.points().begin(), d.points().end()), p(d.probs().begin(), d.probs().end());
  for (double& v : x) v -= mu;
  return esseen::make_discrete(x, p);
}

// Normal CDF at x >= 0 by composite Simpson on the density over [0, x].
inline double simpson_normal_cdf(double x, int panels = 20000) {
  const double h = x / panels;
  auto pdf = [](double u) { return std::exp(-0.5 * u * u) / std::sqrt(2.0 * M_PI); };
  double s = pdf(0.0) + pdf(x);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * pdf(i * h);
  return 0.5 + s * h / 3.0;
}

}  // namespace test_support
