#pragma once

#include <cmath>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "esseen/error.hpp"

namespace esseen {

/// Adaptive Simpson with an absolute tolerance.
///
/// Each panel carries its own three samples; a panel is accepted when the
/// two-half estimate differs from the whole-panel estimate by at most
/// 15 * tol, with tol halved at each bisection (Richardson correction applied).
/// Throws `QuadratureDepthExceeded` when a panel needs more than `max_depth`
/// bisections.
template <typename Real, typename F>
class AdaptiveSimpson {
 public:
  AdaptiveSimpson(F f, Real tol, int max_depth = 50) : f_(std::move(f)), tol_(tol), max_depth_(max_depth) {}

  Real integrate(Real a, Real b) {
    if (a == b) return Real(0);
    const Real fa = f_(a), fb = f_(b), m = (a + b) / 2, fm = f_(m);
    const Real whole = (b - a) / 6 * (fa + 4 * fm + fb);
    return refine(a, b, fa, fm, fb, whole, tol_, 0);
  }

  /// Integral over [a, b] with forced breakpoints; the tolerance is split in
  /// proportion to panel length.
  Real integrate(std::span<const Real> breaks) {
    Real total = 0;
    if (breaks.size() < 2) return total;
    const Real span_len = breaks.back() - breaks.front();
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      const Real a = breaks[i], b = breaks[i + 1];
      if (!(b > a)) continue;
      const Real fa = f_(a), fb = f_(b), m = (a + b) / 2, fm = f_(m);
      const Real whole = (b - a) / 6 * (fa + 4 * fm + fb);
      total += refine(a, b, fa, fm, fb, whole, tol_ * (b - a) / span_len, 0);
    }
    return total;
  }

  long evaluations() const noexcept { return evals_; }

 private:
  Real refine(Real a, Real b, Real fa, Real fm, Real fb, Real whole, Real tol, int depth) {
    const Real m = (a + b) / 2;
    const Real lm = (a + m) / 2, rm = (m + b) / 2;
    const Real flm = f_(lm), frm = f_(rm);
    evals_ += 2;
    const Real left = (m - a) / 6 * (fa + 4 * flm + fm);
    const Real right = (b - m) / 6 * (fm + 4 * frm + fb);
    const Real delta = left + right - whole;
    // A panel that still spans several samples is never accepted on the
    // first look, so narrow features are not skipped.
    if (depth >= kMinDepth && std::abs(delta) <= 15 * tol) return left + right + delta / 15;
    if (depth >= max_depth_)
      throw Error(Errc::QuadratureDepthExceeded, "adaptive Simpson exceeded maximum depth");
    return refine(a, m, fa, flm, fm, left, tol / 2, depth + 1) +
           refine(m, b, fm, frm, fb, right, tol / 2, depth + 1);
  }

  static constexpr int kMinDepth = 2;

  F f_;
  Real tol_;
  int max_depth_;
  long evals_ = 0;
};

template <typename Real, typename F>
Real adaptive_simpson(F&& f, Real a, Real b, Real tol, int max_depth = 50) {
  AdaptiveSimpson<Real, std::decay_t<F>> q(std::forward<F>(f), tol, max_depth);
  return q.integrate(a, b);
}

}  // namespace esseen
