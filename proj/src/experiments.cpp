#include "esseen/experiments.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "esseen/kolmogorov.hpp"
#include "esseen/parallel.hpp"

namespace esseen {

namespace {

void check_sizes(std::span<const int> n_list) {
  if (n_list.empty()) throw Error(Errc::EmptyGrid, "empty list of sizes");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1) throw Error(Errc::BadParam, "sizes must be >= 1");
    if (i > 0 && n_list[i] < n_list[i - 1]) throw Error(Errc::BadParam, "sizes must be sorted");
  }
}

}  // namespace

DiscreteDist normalized_summand(const DiscreteDist& y, int n) {
  if (n < 1) throw Error(Errc::BadParam, "n must be >= 1");
  return scale(standardize(y), 1.0 / std::sqrt(static_cast<double>(n)));
}

DiscreteDist normalized_sum(const DiscreteDist& y, int n, double prune_tol) {
  return sum_iid(normalized_summand(y, n), n, prune_tol);
}

RateRow rate_row(const DiscreteDist& y, int n, double prune_tol) {
  const DiscreteDist x = normalized_summand(y, n);
  const DistanceReport dr = kolmogorov_vs_normal(sum_iid(x, n, prune_tol));
  RateRow row;
  row.n = n;
  row.distance = dr.distance;
  row.error_bar = dr.error_bar;
  row.sqrt_n_distance = dr.distance * std::sqrt(static_cast<double>(n));
  row.be_rhs = n * moments(x).abs3;
  row.ratio = row.distance / row.be_rhs;
  return row;
}

FitResult fit_loglog(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(Errc::BadParam, "fit needs equal lengths");
  if (x.size() < 2) throw Error(Errc::EmptyGrid, "fit needs at least two points");
  const auto m = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd design(m, 2);
  Eigen::VectorXd target(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) throw Error(Errc::BadParam, "log-log fit needs positive data");
    design(i, 0) = std::log(x[k]);
    design(i, 1) = 1.0;
    target[i] = std::log(y[k]);
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(target);
  const double ss_res = (design * coef - target).squaredNorm();
  const double ss_tot = (target.array() - target.mean()).matrix().squaredNorm();

  FitResult fit;
  fit.slope = coef[0];
  fit.intercept = coef[1];
  fit.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
  return fit;
}

RateResult rate_experiment(const std::string& label, const DiscreteDist& y,
                           std::span<const int> n_list, const ExperimentOptions& opts) {
  check_sizes(n_list);
  // Fail fast on degenerate input before spawning work.
  standardize(y);

  RateResult result;
  result.label = label;
  result.rows = parallel_map(n_list.size(), opts.threads,
                             [&](std::size_t i) { return rate_row(y, n_list[i], opts.prune_tol); });

  std::vector<double> ns, ds;
  for (const auto& r : result.rows) {
    ns.push_back(r.n);
    ds.push_back(r.distance);
  }
  result.fit = fit_loglog(ns, ds);
  return result;
}

RateResult rate_experiment(const FamilySpec& spec, std::span<const int> n_list,
                           const ExperimentOptions& opts) {
  return rate_experiment(spec.name(), family(spec), n_list, opts);
}

ConstantScan constant_scan(std::span<const FamilySpec> specs, std::span<const int> n_list,
                           const ExperimentOptions& opts) {
  if (specs.empty()) throw Error(Errc::EmptyGrid, "no families to scan");
  check_sizes(n_list);

  std::vector<FamilySpec> ordered(specs.begin(), specs.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const FamilySpec& a, const FamilySpec& b) { return a.name() < b.name(); });

  const std::size_t cells = ordered.size() * n_list.size();
  ConstantScan scan;
  scan.cells = parallel_map(cells, opts.threads, [&](std::size_t i) {
    const FamilySpec& spec = ordered[i / n_list.size()];
    const int n = n_list[i % n_list.size()];
    const RateRow row = rate_row(family(spec), n, opts.prune_tol);
    return ScanCell{spec.name(), n, row.distance, row.be_rhs, row.ratio};
  });
  for (const auto& c : scan.cells) scan.constant = std::max(scan.constant, c.ratio);
  return scan;
}

std::vector<FamilySpec> default_suite() {
  return {FamilySpec::rademacher(), FamilySpec::centered_bernoulli(0.3),
          FamilySpec::two_point(-2.0, 1.0)};
}

std::vector<int> default_scan_sizes() {
  return {1, 2, 3, 4, 5, 6, 8, 10, 12, 16, 20, 24, 32, 48, 64, 96, 128, 192, 256};
}

}  // namespace esseen
