#include "esseen/kolmogorov.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "esseen/quadrature.hpp"

namespace esseen {

namespace {

// Beyond this the normal density is below 1e-31.
constexpr double kNormalCutoff = 12.0;

void consider(DistanceReport& best, double value, double a, SupSide side) {
  if (value > best.distance) {
    best.distance = value;
    best.arg_sup = a;
    best.side = side;
  }
}

double normal_part(const Kernel& k, double eps, double a, double quad_tol) {
  auto integrand = [&](double g) { return smoothed_indicator(k, (g - a) / eps) * normal_pdf(g); };

  std::vector<double> breaks = {-kNormalCutoff, -4.0, -1.0, 0.0, 1.0, 4.0, kNormalCutoff};
  for (double s : {-64.0, -16.0, -4.0, -1.0, 0.0, 1.0, 4.0, 16.0, 64.0}) {
    const double b = a + eps * s;
    if (b > -kNormalCutoff && b < kNormalCutoff) breaks.push_back(b);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  try {
    AdaptiveSimpson<double, decltype(integrand)> q(integrand, quad_tol);
    // Below -cutoff f is 1 up to the normal tail mass.
    return q.integrate(std::span<const double>(breaks)) + normal_cdf(-kNormalCutoff);
  } catch (const Error& e) {
    throw Error(Errc::QuadratureFailure, e.what());
  }
}

}  // namespace

// Between consecutive atoms the discrete CDF is constant while Phi increases,
// so |F - Phi| on (x_i, x_{i+1}) is bounded by its one-sided limits
// |F(x_i) - Phi(x_i)| and |F(x_i) - Phi(x_{i+1})|. Left of the first atom the
// sup is Phi(x_0), a left limit; right of the last atom it is the pruned
// mass, covered by the error bar. Checking both sides of every atom is exact.
DistanceReport kolmogorov_vs_normal(const DiscreteDist& d) {
  DistanceReport best;
  best.error_bar = d.pruned_mass();
  const auto& x = d.points();
  const auto& p = d.probs();
  double below = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double phi = normal_cdf(x[i]);
    consider(best, std::abs(below - phi), x[i], SupSide::LeftLimit);
    below += p[i];
    consider(best, std::abs(below - phi), x[i], SupSide::AtAtom);
  }
  if (best.distance == 0.0) best.arg_sup = x[0];
  return best;
}

DistanceReport kolmogorov_discrete(const DiscreteDist& d1, const DiscreteDist& d2) {
  std::vector<double> pts(d1.points().begin(), d1.points().end());
  pts.insert(pts.end(), d2.points().begin(), d2.points().end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  DistanceReport best;
  best.error_bar = d1.pruned_mass() + d2.pruned_mass();
  best.arg_sup = pts.front();
  for (double a : pts) {
    consider(best, std::abs(d1.cdf_left(a) - d2.cdf_left(a)), a, SupSide::LeftLimit);
    consider(best, std::abs(d1.cdf(a) - d2.cdf(a)), a, SupSide::AtAtom);
  }
  return best;
}

double smoothed_discrepancy(const DiscreteDist& d, const Kernel& k, double eps, double a,
                            double quad_tol) {
  if (!(eps > 0.0)) throw Error(Errc::BadParam, "eps must be positive");
  const auto& x = d.points();
  const auto& p = d.probs();
  double discrete_part = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) discrete_part += p[i] * smoothed_indicator(k, (x[i] - a) / eps);
  return discrete_part - normal_part(k, eps, a, quad_tol);
}

SmoothedSup sup_smoothed_discrepancy(const DiscreteDist& d, const Kernel& k, double eps) {
  if (!(eps > 0.0)) throw Error(Errc::BadParam, "eps must be positive");
  const double reach = std::max(8.0, d.points().abs().maxCoeff()) + 16.0 * eps;
  const double h = std::min(0.01, eps / 20.0);
  const auto half = static_cast<long>(std::ceil(reach / h));

  auto value = [&](double a) { return std::abs(smoothed_discrepancy(d, k, eps, a)); };

  SmoothedSup best{-1.0, 0.0};
  for (long i = -half; i <= half; ++i) {
    const double a = static_cast<double>(i) * h;
    const double v = value(a);
    if (v > best.sup) best = {v, a};
  }

  // Golden-section refinement on the best cell.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = best.arg - h, hi = best.arg + h;
  double c = hi - inv_phi * (hi - lo), e = lo + inv_phi * (hi - lo);
  double fc = value(c), fe = value(e);
  while (hi - lo > 1e-6) {
    if (fc >= fe) {
      hi = e;
      e = c;
      fe = fc;
      c = hi - inv_phi * (hi - lo);
      fc = value(c);
    } else {
      lo = c;
      c = e;
      fc = fe;
      e = lo + inv_phi * (hi - lo);
      fe = value(e);
    }
  }
  const double a_ref = 0.5 * (lo + hi);
  const double v_ref = value(a_ref);
  if (v_ref > best.sup) best = {v_ref, a_ref};
  return best;
}

}  // namespace esseen
