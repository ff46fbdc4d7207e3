#pragma once

#include "esseen/dist.hpp"
#include "esseen/fourier_kernel.hpp"

namespace esseen {

enum class SupSide { AtAtom, LeftLimit };

struct DistanceReport {
  double distance = 0.0;
  double arg_sup = 0.0;
  SupSide side = SupSide::AtAtom;
  /// Probability mass discarded by pruning; the true distance lies within
  /// distance +/- error_bar.
  double error_bar = 0.0;
};

/// sup_a |P{X <= a} - Phi(a)|, exact.
DistanceReport kolmogorov_vs_normal(const DiscreteDist& d);

/// sup_a |P{X <= a} - P{Y <= a}|, exact.
DistanceReport kolmogorov_discrete(const DiscreteDist& d1, const DiscreteDist& d2);

inline constexpr double kSmoothedQuadTol = 1e-9;

/// E f((X - a)/eps) - E f((G - a)/eps) for the kernel's smoothed indicator f.
double smoothed_discrepancy(const DiscreteDist& d, const Kernel& k, double eps, double a,
                            double quad_tol = kSmoothedQuadTol);

struct SmoothedSup {
  double sup = 0.0;
  double arg = 0.0;
};

/// Maximises |smoothed_discrepancy| over a symmetric a-grid covering the
/// support and [-8, 8], then refines the best cell by golden-section search
/// to 1e-6 in a.
SmoothedSup sup_smoothed_discrepancy(const DiscreteDist& d, const Kernel& k, double eps);

}  // namespace esseen
