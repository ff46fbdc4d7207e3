#pragma once

#include <complex>
#include <span>

#include <Eigen/Core>

#include "esseen/error.hpp"

namespace esseen {

/// Samples of a function on the uniform grid x0, x0 + dx, ..., x0 + (n-1) dx.
template <typename Scalar>
struct GridFunction {
  using Values = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  double x0 = 0.0;
  double dx = 1.0;
  Values vals;

  Eigen::Index size() const noexcept { return vals.size(); }
  double x(Eigen::Index i) const noexcept { return x0 + static_cast<double>(i) * dx; }
  double x_end() const noexcept { return x(size() - 1); }
  Eigen::ArrayXd abscissae() const {
    return Eigen::ArrayXd::LinSpaced(size(), x0, x_end());
  }
};

using RealGrid = GridFunction<double>;
using ComplexGrid = GridFunction<std::complex<double>>;

/// Trapezoid-rule integral of the samples.
template <typename Scalar>
Scalar trapezoid(const GridFunction<Scalar>& g) {
  if (g.size() < 2) return Scalar(0);
  return g.dx * (g.vals.sum() - Scalar(0.5) * (g.vals[0] + g.vals[g.size() - 1]));
}

/// Uniform frequency grid t0, t0 + dt, ..., t0 + (count-1) dt.
struct FrequencyGrid {
  double t0 = 0.0;
  double dt = 1.0;
  Eigen::Index count = 0;

  static FrequencyGrid symmetric(double t_max, double dt);
};

/// Samples per unit of the fastest oscillation: max |t| dx must not exceed this.
inline constexpr double kMaxPhasePerSample = 0.25;

/// ghat(t) = sum_j w_j g(x_j) exp(-2 pi i t x_j) dx with trapezoid weights.
/// Throws `AliasRisk` if max |t| dx > 0.25.
template <typename Scalar>
ComplexGrid fourier_grid(const GridFunction<Scalar>& g, const FrequencyGrid& freqs);

/// Same transform at arbitrary frequencies.
template <typename Scalar>
Eigen::ArrayXcd fourier_at(const GridFunction<Scalar>& g, std::span<const double> freqs);

extern template ComplexGrid fourier_grid(const RealGrid&, const FrequencyGrid&);
extern template ComplexGrid fourier_grid(const ComplexGrid&, const FrequencyGrid&);
extern template Eigen::ArrayXcd fourier_at(const RealGrid&, std::span<const double>);
extern template Eigen::ArrayXcd fourier_at(const ComplexGrid&, std::span<const double>);

struct KernelSpec {
  /// Samples of the bump on [-1/4pi, 1/4pi]; odd so that 0 is a node.
  Eigen::Index psi_points = 2049;
  /// Half-width of the tabulated smoothing density.
  double extent = 256.0;
  /// Spacing of the density and of the smoothed-indicator table.
  double step = 1.0 / 1024.0;
};

inline constexpr Eigen::Index kMinPsiPoints = 2048;

/// Smoothing density phi = |psi-hat|^2 built from an even bump psi with
/// support [-1/4pi, 1/4pi] and unit L2 norm. The Fourier transform of phi is
/// psi * psi, supported in [-1/2pi, 1/2pi].
struct Kernel {
  RealGrid psi;
  RealGrid phi;
  /// f(x) = integral of phi over [x, inf), the smoothed indicator of (-inf, 0].
  RealGrid f_table;
  /// sup over T > 0 of T * P{|Y| > T} for Y with density phi.
  double c_phi_tail = 0.0;
  double mass_defect = 0.0;
  /// Mass of phi beyond the tabulated extent, integrated on a coarse outer grid.
  double outer_tail_mass = 0.0;
};

/// psi(x) = kappa exp(-1/(1 - (4 pi x)^2)) on |x| < 1/4pi with kappa fixed by
/// trapezoid quadrature so that the integral of psi^2 is one.
RealGrid bump_psi(Eigen::Index points = KernelSpec{}.psi_points);

Kernel build_kernel(const KernelSpec& spec = {});

/// Shared default kernel, built on first use.
const Kernel& default_kernel();

/// f(x) by linear interpolation of the table, clamped to [0, 1]; 1 left of the
/// table and 0 right of it.
double smoothed_indicator(const Kernel& k, double x);

struct PlancherelResult {
  double lhs = 0.0;  // integral of |g|^2
  double rhs = 0.0;  // integral of |ghat|^2
};

/// Band-limited frequency grid fine enough for exact trapezoid integration of
/// |ghat|^2 and wide up to the alias limit.
PlancherelResult plancherel_check(const RealGrid& g);

/// max over `t_grid` of |FT(g1 * g2)(t) - ghat1(t) ghat2(t)|; the grids must
/// share their spacing.
double convolution_theorem_check(const RealGrid& g1, const RealGrid& g2,
                                 std::span<const double> t_grid);

/// Discrete convolution dx * sum_j g1_j g2_{k-j} on the shared grid.
RealGrid grid_convolve(const RealGrid& g1, const RealGrid& g2);

/// max |FT(FT(g))(x) - g(-x)| over the sample points of g.
double double_transform_check(const RealGrid& g);

/// max |phi-hat(t)| over |t| in [1/2pi + margin, t_hi].
double phi_hat_outside_support(const Kernel& k, double margin = 0.01, double t_hi = 2.0,
                               double dt = 0.005);

}  // namespace esseen
