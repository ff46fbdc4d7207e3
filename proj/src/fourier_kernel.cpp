#include "esseen/fourier_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace esseen {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr Eigen::Index kBlock = 1024;
// Recurrences are re-seeded from exact sin/cos at this period so rounding
// drift stays at a few hundred ulps.
constexpr Eigen::Index kReseed = 256;

template <typename Scalar>
Eigen::ArrayXcd trapezoid_weights(const GridFunction<Scalar>& g) {
  Eigen::ArrayXcd w = g.vals.template cast<std::complex<double>>() * g.dx;
  const Eigen::Index n = g.size();
  if (n >= 2) {
    w[0] *= 0.5;
    w[n - 1] *= 0.5;
  }
  return w;
}

template <typename Scalar>
bool even_on_symmetric_grid(const GridFunction<Scalar>& g) {
  if constexpr (!std::is_same_v<Scalar, double>) {
    return false;
  } else {
    if (g.size() < 3 || g.size() % 2 == 0) return false;
    if (std::abs(g.x0 + g.x_end()) > 1e-9 * g.dx) return false;
    return (g.vals == g.vals.reverse()).all();
  }
}

void check_alias(double t_abs_max, double dx) {
  if (t_abs_max * dx > kMaxPhasePerSample)
    throw Error(Errc::AliasRisk, "max |t| dx = " + std::to_string(t_abs_max * dx) +
                                     " exceeds " + std::to_string(kMaxPhasePerSample));
}

// out[k] += sum_j w_j exp(-2 pi i t_k x_j), recurrence over k per sample block.
void accumulate_uniform(const Eigen::ArrayXcd& w, const Eigen::ArrayXd& x,
                        const FrequencyGrid& fg, Eigen::ArrayXcd& out) {
  const Eigen::Index n = w.size();
  Eigen::ArrayXcd z(kBlock), rot(kBlock);
  for (Eigen::Index b0 = 0; b0 < n; b0 += kBlock) {
    const Eigen::Index len = std::min(kBlock, n - b0);
    const auto xb = x.segment(b0, len);
    const auto wb = w.segment(b0, len);
    const Eigen::ArrayXd step_phase = -kTwoPi * fg.dt * xb;
    rot.head(len).real() = step_phase.cos();
    rot.head(len).imag() = step_phase.sin();
    for (Eigen::Index k = 0; k < fg.count; ++k) {
      if (k % kReseed == 0) {
        const Eigen::ArrayXd phase = -kTwoPi * (fg.t0 + static_cast<double>(k) * fg.dt) * xb;
        z.head(len).real() = phase.cos();
        z.head(len).imag() = phase.sin();
      }
      out[k] += (wb * z.head(len)).sum();
      z.head(len) *= rot.head(len);
    }
  }
}

std::complex<double> transform_at(const Eigen::ArrayXcd& w, double x0, double dx, double t) {
  std::complex<double> acc = 0.0;
  std::complex<double> z, step = std::polar(1.0, -kTwoPi * t * dx);
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    if (j % kReseed == 0) z = std::polar(1.0, -kTwoPi * t * (x0 + static_cast<double>(j) * dx));
    acc += w[j] * z;
    z *= step;
  }
  return acc;
}

RealGrid mirrored(const Eigen::ArrayXd& nonneg_half, double dx) {
  const Eigen::Index h = nonneg_half.size();
  RealGrid g;
  g.dx = dx;
  g.x0 = -static_cast<double>(h - 1) * dx;
  g.vals.resize(2 * h - 1);
  g.vals.tail(h) = nonneg_half;
  g.vals.head(h - 1) = nonneg_half.tail(h - 1).reverse();
  return g;
}

}  // namespace

FrequencyGrid FrequencyGrid::symmetric(double t_max, double dt) {
  if (!(dt > 0.0) || !(t_max >= 0.0)) throw Error(Errc::BadParam, "frequency grid");
  const auto half = static_cast<Eigen::Index>(std::floor(t_max / dt));
  return {-static_cast<double>(half) * dt, dt, 2 * half + 1};
}

template <typename Scalar>
ComplexGrid fourier_grid(const GridFunction<Scalar>& g, const FrequencyGrid& fg) {
  if (fg.count < 0 || !(fg.dt > 0.0)) throw Error(Errc::BadParam, "frequency grid");
  const double t_last = fg.t0 + static_cast<double>(fg.count - 1) * fg.dt;
  check_alias(std::max(std::abs(fg.t0), std::abs(t_last)), g.dx);

  ComplexGrid out;
  out.x0 = fg.t0;
  out.dx = fg.dt;
  out.vals = Eigen::ArrayXcd::Zero(fg.count);
  if (g.size() == 0 || fg.count == 0) return out;

  Eigen::ArrayXcd w = trapezoid_weights(g);
  Eigen::ArrayXd x = g.abscissae();
  if (even_on_symmetric_grid(g)) {
    // Real cosine sum over the nonnegative half with doubled weights.
    const Eigen::Index c = g.size() / 2;
    Eigen::ArrayXcd wh = w.tail(g.size() - c);
    wh.tail(wh.size() - 1) *= 2.0;
    Eigen::ArrayXd xh = x.tail(wh.size());
    accumulate_uniform(wh, xh, fg, out.vals);
    out.vals.imag().setZero();
  } else {
    accumulate_uniform(w, x, fg, out.vals);
  }
  return out;
}

template <typename Scalar>
Eigen::ArrayXcd fourier_at(const GridFunction<Scalar>& g, std::span<const double> freqs) {
  double t_abs_max = 0.0;
  for (double t : freqs) t_abs_max = std::max(t_abs_max, std::abs(t));
  check_alias(t_abs_max, g.dx);

  const Eigen::ArrayXcd w = trapezoid_weights(g);
  Eigen::ArrayXcd out(static_cast<Eigen::Index>(freqs.size()));
  for (std::size_t k = 0; k < freqs.size(); ++k)
    out[static_cast<Eigen::Index>(k)] = transform_at(w, g.x0, g.dx, freqs[k]);
  return out;
}

template ComplexGrid fourier_grid(const RealGrid&, const FrequencyGrid&);
template ComplexGrid fourier_grid(const ComplexGrid&, const FrequencyGrid&);
template Eigen::ArrayXcd fourier_at(const RealGrid&, std::span<const double>);
template Eigen::ArrayXcd fourier_at(const ComplexGrid&, std::span<const double>);

RealGrid bump_psi(Eigen::Index points) {
  if (points < kMinPsiPoints)
    throw Error(Errc::GridTooCoarse, "bump needs at least " + std::to_string(kMinPsiPoints) +
                                         " samples, got " + std::to_string(points));
  const double half_width = 1.0 / (2.0 * kTwoPi);  // 1/4pi
  RealGrid g;
  g.x0 = -half_width;
  g.dx = 2.0 * half_width / static_cast<double>(points - 1);
  g.vals.resize(points);
  for (Eigen::Index i = 0; i <= (points - 1) / 2; ++i) {
    const double u = 2.0 * kTwoPi * g.x(i);
    const double v = std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0;
    g.vals[i] = v;
    g.vals[points - 1 - i] = v;
  }
  RealGrid sq = g;
  sq.vals = g.vals.square();
  g.vals /= std::sqrt(trapezoid(sq));
  return g;
}

Kernel build_kernel(const KernelSpec& spec) {
  if (!(spec.step > 0.0) || !(spec.extent > spec.step))
    throw Error(Errc::BadParam, "kernel extent/step");
  Kernel k;
  k.psi = bump_psi(spec.psi_points);

  const auto half = static_cast<Eigen::Index>(std::llround(spec.extent / spec.step));
  const ComplexGrid psi_hat = fourier_grid(k.psi, FrequencyGrid{0.0, spec.step, half + 1});
  k.phi = mirrored(psi_hat.vals.real().square(), spec.step);

  const Eigen::Index n = k.phi.size();
  k.f_table.x0 = k.phi.x0;
  k.f_table.dx = k.phi.dx;
  k.f_table.vals.resize(n);
  k.f_table.vals[n - 1] = 0.0;
  for (Eigen::Index i = n - 2; i >= 0; --i)
    k.f_table.vals[i] = k.f_table.vals[i + 1] + 0.5 * spec.step * (k.phi.vals[i] + k.phi.vals[i + 1]);

  const double total = k.f_table.vals[0];
  k.mass_defect = std::abs(total - 1.0);

  // P{|Y| > T} = f(T) + (total - f(-T)) at grid points T = x_i > 0.
  const Eigen::Index mid = half;
  for (Eigen::Index j = 1; j <= half; ++j) {
    const double T = static_cast<double>(j) * spec.step;
    const double tail = k.f_table.vals[mid + j] + (total - k.f_table.vals[mid - j]);
    k.c_phi_tail = std::max(k.c_phi_tail, T * tail);
  }

  // Outer tail on [extent, 2 extent]: phi is band-limited, so a coarse grid suffices.
  const double outer_dt = 0.125;
  const auto outer_count = static_cast<Eigen::Index>(std::llround(spec.extent / outer_dt)) + 1;
  const ComplexGrid outer = fourier_grid(k.psi, FrequencyGrid{spec.extent, outer_dt, outer_count});
  RealGrid outer_phi{outer.x0, outer.dx, outer.vals.real().square()};
  k.outer_tail_mass = 2.0 * trapezoid(outer_phi);
  return k;
}

const Kernel& default_kernel() {
  static const Kernel kernel = build_kernel();
  return kernel;
}

double smoothed_indicator(const Kernel& k, double x) {
  const RealGrid& f = k.f_table;
  const double u = (x - f.x0) / f.dx;
  if (u < 0.0) return 1.0;
  const auto last = static_cast<double>(f.size() - 1);
  if (u >= last) return 0.0;
  const auto i = static_cast<Eigen::Index>(u);
  const double frac = u - static_cast<double>(i);
  const double v = f.vals[i] + frac * (f.vals[i + 1] - f.vals[i]);
  return std::clamp(v, 0.0, 1.0);
}

PlancherelResult plancherel_check(const RealGrid& g) {
  PlancherelResult r;
  RealGrid sq = g;
  sq.vals = g.vals.square();
  r.lhs = trapezoid(sq);
  if (r.lhs == 0.0) return r;

  // |ghat|^2 is the transform of the autocorrelation, supported on [-W, W].
  const double width = g.x_end() - g.x0;
  const double dt = 1.0 / (2.0 * width);
  const ComplexGrid ghat =
      fourier_grid(g, FrequencyGrid::symmetric(kMaxPhasePerSample / g.dx, dt));
  RealGrid power{ghat.x0, ghat.dx, ghat.vals.abs2()};
  r.rhs = trapezoid(power);
  return r;
}

RealGrid grid_convolve(const RealGrid& g1, const RealGrid& g2) {
  if (std::abs(g1.dx - g2.dx) > 1e-12 * g1.dx)
    throw Error(Errc::BadParam, "grid_convolve needs equal spacings");
  const Eigen::Index n1 = g1.size(), n2 = g2.size();
  if (n1 == 0 || n2 == 0) throw Error(Errc::EmptyGrid, "grid_convolve on an empty grid");
  RealGrid c;
  c.x0 = g1.x0 + g2.x0;
  c.dx = g1.dx;
  c.vals = Eigen::ArrayXd::Zero(n1 + n2 - 1);
  for (Eigen::Index j = 0; j < n1; ++j) c.vals.segment(j, n2) += g1.vals[j] * g2.vals;
  c.vals *= c.dx;
  return c;
}

double convolution_theorem_check(const RealGrid& g1, const RealGrid& g2,
                                 std::span<const double> t_grid) {
  const RealGrid c = grid_convolve(g1, g2);
  const Eigen::ArrayXcd lhs = fourier_at(c, t_grid);
  const Eigen::ArrayXcd rhs = fourier_at(g1, t_grid) * fourier_at(g2, t_grid);
  return t_grid.empty() ? 0.0 : (lhs - rhs).abs().maxCoeff();
}

double double_transform_check(const RealGrid& g) {
  if (g.size() < 2 || std::abs(g.x0 + g.x_end()) > 1e-9 * g.dx)
    throw Error(Errc::BadParam, "double_transform_check needs a grid symmetric about 0");
  // Images of g under the second transform repeat with period 1/dt > 2W.
  const double width = g.x_end() - g.x0;
  const ComplexGrid ghat =
      fourier_grid(g, FrequencyGrid::symmetric(kMaxPhasePerSample / g.dx, 1.0 / (4.0 * width)));
  const Eigen::ArrayXd x = g.abscissae();
  const Eigen::ArrayXcd back = fourier_at(ghat, std::span<const double>(x.data(), x.size()));
  return (back - g.vals.reverse().cast<std::complex<double>>()).abs().maxCoeff();
}

double phi_hat_outside_support(const Kernel& k, double margin, double t_hi, double dt) {
  const double lo = 1.0 / kTwoPi + margin;
  if (!(t_hi > lo)) throw Error(Errc::BadParam, "empty frequency band");
  const auto count = static_cast<Eigen::Index>(std::floor((t_hi - lo) / dt)) + 1;
  const ComplexGrid pos = fourier_grid(k.phi, FrequencyGrid{lo, dt, count});
  const ComplexGrid neg = fourier_grid(k.phi, FrequencyGrid{-lo - (count - 1) * dt, dt, count});
  return std::max(pos.vals.abs().maxCoeff(), neg.vals.abs().maxCoeff());
}

}  // namespace esseen
