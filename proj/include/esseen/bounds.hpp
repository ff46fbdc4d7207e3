#pragma once

#include <optional>
#include <span>

#include "esseen/charfun.hpp"
#include "esseen/convolution.hpp"
#include "esseen/dist.hpp"
#include "esseen/fourier_kernel.hpp"
#include "esseen/kolmogorov.hpp"

namespace esseen {

struct BoundConfig {
  /// Smoothing scale.
  double eps = 0.2;
  /// Absolute tolerance of the adaptive quadrature.
  double quad_tol = 1e-9;
  /// Window constant: the chf comparison runs over |t| <= c_small / rho^3.
  double c_small = 0.25;
  /// Constant of the smoothing penalty C M eps; unset means 18 * c_phi_tail.
  std::optional<double> C_smooth;
  /// Constant of the final bound C * sum E|X_k|^3; unset means suite-derived.
  std::optional<double> C_be;
  double prune_tol = kDefaultPruneTol;
};

/// 18 * c_phi_tail of the kernel unless the config pins it.
double smoothing_constant(const BoundConfig& cfg, const Kernel& k = default_kernel());

struct BoundReport {
  double lhs = 0.0;            // exact Kolmogorov distance to the normal
  double integral_term = 0.0;  // integral of |chf_x - chf_y| / |t| over |t| <= 1/eps
  double tail_term = 0.0;      // C M eps
  double rhs = 0.0;            // 2 * integral_term + tail_term
  double min_feasible_C = 0.0;
  double eps = 0.0;
  double density_bound = 0.0;
  double C_smooth = 0.0;
  double error_bar = 0.0;

  // Set by end_to_end_bound.
  double rho3 = 0.0;
  double c_small_effective = 0.0;
  bool wide_epsilon = false;
  double lemma4_constant = 0.0;
  double lemma4_majorant = 0.0;
};

inline constexpr double kChfIntegralDelta = 1e-8;

/// Integral of |chf_x(t) - chf_y(t)| / |t| over [-1/eps, 1/eps].
///
/// The band |t| < 1e-8 is replaced by the bound
/// 2 delta (|mu_x - mu_y| + delta (E X^2 + E Y^2) / 2), so the result is an
/// upper estimate with absolute error at most quad_tol + 1e-10.
double chf_integral(const ChfExpr& x, const ChfExpr& y, double eps, double quad_tol = 1e-9);

// Constant chain behind the factor 18: pick a where the discrepancy is at
// least 0.9 of its sup; it stays above half the sup on an interval of length
// sup / 3M, so T = sup / 6M and the tail loss 3 C_phi sup / 2T = 9 C_phi M
// doubles to 18.
inline constexpr double kPeakFraction = 0.9;
inline constexpr double kIntervalFraction = 1.0 / 3.0;
inline constexpr double kSmoothingTailFactor = 2.0 * 1.5 * 2.0 / kIntervalFraction;
static_assert(kPeakFraction - kIntervalFraction >= 0.5, "interval must keep half the sup");

struct Lemma1Check {
  double distance = 0.0;
  double sup_smoothed = 0.0;
  double tail_term = 0.0;  // 18 c_phi_tail M eps
  double peak_fraction = kPeakFraction;
  double interval_fraction = kIntervalFraction;
  bool holds = false;
};

/// distance <= 2 sup_smoothed + 18 c_phi_tail M eps, with Y the standard normal.
Lemma1Check lemma1_check(const DiscreteDist& d, const Kernel& k, double eps,
                         std::optional<SmoothedSup> precomputed = {});

struct Lemma2Check {
  double lhs_sup = 0.0;
  double rhs_integral = 0.0;
  bool holds = false;
};

inline constexpr double kLemma2Slack = 1e-6;

Lemma2Check lemma2_check(const DiscreteDist& d, const Kernel& k, double eps,
                         double quad_tol = 1e-9, std::optional<SmoothedSup> precomputed = {});

/// Smoothing-inequality right-hand side for X with chf `x` against the
/// standard normal. `x` must reduce to atoms (or be the normal itself) so the
/// exact distance can be computed.
BoundReport esseen_rhs(const ChfExpr& x, double density_bound, double eps, const BoundConfig& cfg);

/// Largest c <= c_small, halving as needed, for which |chf_S(t)| <= exp(-t^2/4)
/// on a grid of |t| <= c / rho^3.
double calibrate_c_small(std::span<const DiscreteDist> ds, double c_small);

/// Full chain for independent mean-zero summands with unit total variance:
/// eps = rho^3 / c_small, the smoothing-inequality right-hand side at that
/// eps, and the cubic-envelope majorant of the integral term.
BoundReport end_to_end_bound(std::span<const DiscreteDist> ds, const BoundConfig& cfg);

/// C_be * sum_k E|X_k|^3.
double berry_esseen_rhs(std::span<const DiscreteDist> ds, double C_be);

}  // namespace esseen
