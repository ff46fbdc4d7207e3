#pragma once

#include <span>
#include <string>
#include <vector>

#include "esseen/convolution.hpp"
#include "esseen/dist.hpp"

namespace esseen {

struct ExperimentOptions {
  int threads = 1;
  double prune_tol = kDefaultPruneTol;
};

/// One summand of the normalised sum: standardize(y) / sqrt(n).
DiscreteDist normalized_summand(const DiscreteDist& y, int n);

/// (Y_1 + ... + Y_n) / sqrt(n) for standardized i.i.d. copies of y.
DiscreteDist normalized_sum(const DiscreteDist& y, int n, double prune_tol = kDefaultPruneTol);

struct RateRow {
  int n = 0;
  double distance = 0.0;
  double sqrt_n_distance = 0.0;
  /// sum of E|X_k|^3 over the n normalised summands
  double be_rhs = 0.0;
  double ratio = 0.0;
  double error_bar = 0.0;
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

struct RateResult {
  std::string label;
  std::vector<RateRow> rows;
  FitResult fit;
};

RateRow rate_row(const DiscreteDist& y, int n, double prune_tol = kDefaultPruneTol);

/// Least-squares line through (log x, log y).
FitResult fit_loglog(std::span<const double> x, std::span<const double> y);

/// Exact distances of the normalised sums for each n and the log-log fit of
/// distance against n. `n_list` must be sorted with every n >= 1.
RateResult rate_experiment(const std::string& label, const DiscreteDist& y,
                           std::span<const int> n_list, const ExperimentOptions& opts = {});
RateResult rate_experiment(const FamilySpec& spec, std::span<const int> n_list,
                           const ExperimentOptions& opts = {});

struct ScanCell {
  std::string family;
  int n = 0;
  double distance = 0.0;
  double rho3 = 0.0;
  double ratio = 0.0;
};

struct ConstantScan {
  /// max over cells of distance / rho3
  double constant = 0.0;
  /// sorted by family name, then n
  std::vector<ScanCell> cells;
};

ConstantScan constant_scan(std::span<const FamilySpec> specs, std::span<const int> n_list,
                           const ExperimentOptions& opts = {});

/// Families and sizes used for suite-level checks and the default C_be.
std::vector<FamilySpec> default_suite();
std::vector<int> default_scan_sizes();

}  // namespace esseen
