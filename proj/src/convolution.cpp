#include "esseen/convolution.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace esseen {

namespace {

void check_prune_tol(double prune_tol) {
  if (!(prune_tol >= 0.0 && prune_tol <= kMaxPruneTol))
    throw Error(Errc::BadParam, "prune_tol must lie in [0, 1e-9]");
}

// Bound on the pairwise table before merging; the merged result is checked
// against max_atoms separately.
constexpr std::size_t kMaxPairs = 200'000'000;

}  // namespace

DiscreteDist convolve(const DiscreteDist& d1, const DiscreteDist& d2, double prune_tol,
                      std::size_t max_atoms) {
  check_prune_tol(prune_tol);
  const auto n1 = static_cast<std::size_t>(d1.size());
  const auto n2 = static_cast<std::size_t>(d2.size());
  if (n1 * n2 > kMaxPairs)
    throw Error(Errc::SupportOverflow,
                "pairwise support " + std::to_string(n1 * n2) + " exceeds working limit");

  struct Pair {
    double point;
    double prob;
  };
  std::vector<Pair> pairs;
  pairs.reserve(n1 * n2);
  const auto& x = d1.points();
  const auto& p = d1.probs();
  const auto& y = d2.points();
  const auto& q = d2.probs();
  for (Eigen::Index i = 0; i < x.size(); ++i)
    for (Eigen::Index j = 0; j < y.size(); ++j) pairs.push_back({x[i] + y[j], p[i] * q[j]});

  // Stable order fixes the summation order inside each merged atom.
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Pair& a, const Pair& b) { return a.point < b.point; });

  Eigen::ArrayXd points(static_cast<Eigen::Index>(pairs.size()));
  Eigen::ArrayXd probs(static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    points[static_cast<Eigen::Index>(k)] = pairs[k].point;
    probs[static_cast<Eigen::Index>(k)] = pairs[k].prob;
  }

  // Mass lost so far: 1 - (1 - r1)(1 - r2).
  const double r1 = d1.pruned_mass();
  const double r2 = d2.pruned_mass();
  DiscreteDist out = DiscreteDist::from_sorted(points, probs, r1 + r2 - r1 * r2, prune_tol);
  if (static_cast<std::size_t>(out.size()) > max_atoms)
    throw Error(Errc::SupportOverflow, "convolution has " + std::to_string(out.size()) +
                                           " atoms, cap is " + std::to_string(max_atoms));
  return out;
}

DiscreteDist sum_iid(const DiscreteDist& d, int n, double prune_tol, std::size_t max_atoms) {
  if (n < 1) throw Error(Errc::BadParam, "sum_iid needs n >= 1");
  check_prune_tol(prune_tol);

  std::optional<DiscreteDist> acc;
  DiscreteDist base = d;
  for (unsigned k = static_cast<unsigned>(n);;) {
    if (k & 1u) acc = acc ? convolve(*acc, base, prune_tol, max_atoms) : base;
    k >>= 1u;
    if (k == 0) break;
    base = convolve(base, base, prune_tol, max_atoms);
  }
  return *acc;
}

DiscreteDist sum_independent(std::span<const DiscreteDist> ds, double prune_tol,
                             std::size_t max_atoms) {
  if (ds.empty()) throw Error(Errc::EmptySupport, "sum_independent needs at least one term");
  check_prune_tol(prune_tol);
  DiscreteDist acc = ds.front();
  for (std::size_t k = 1; k < ds.size(); ++k) acc = convolve(acc, ds[k], prune_tol, max_atoms);
  return acc;
}

}  // namespace esseen
