#include "esseen/bounds.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "esseen/quadrature.hpp"

namespace esseen {

namespace {

constexpr int kCalibrationPoints = 2001;
constexpr int kLemma4Points = 2001;

struct Materialized {
  bool standard_normal = false;
  std::optional<DiscreteDist> dist;
};

Materialized materialize(const ChfExpr& e, double prune_tol) {
  const ChfNode::variant& node = e.node();
  if (std::holds_alternative<StandardNormal>(node)) return {true, {}};
  if (const auto* a = std::get_if<DiscreteAtoms>(&node)) return {false, a->dist};
  if (const auto* s = std::get_if<Scaled>(&node)) {
    Materialized inner = materialize(s->inner, prune_tol);
    if (inner.standard_normal) {
      if (std::abs(s->c) == 1.0) return inner;
      throw Error(Errc::Unsupported, "exact distance for a rescaled normal");
    }
    return {false, scale(*inner.dist, s->c)};
  }
  const auto& factors = std::get<ProductOfIndependent>(node).factors;
  if (factors.empty()) return {false, point_mass(0.0)};
  std::optional<DiscreteDist> acc;
  for (std::size_t i = 0; i < factors.size();) {
    std::size_t j = i + 1;
    while (j < factors.size() && factors[j].same_node(factors[i])) ++j;
    Materialized m = materialize(factors[i], prune_tol);
    if (m.standard_normal) {
      if (factors.size() == 1) return m;
      throw Error(Errc::Unsupported, "exact distance for a normal mixed into a sum");
    }
    DiscreteDist run = sum_iid(*m.dist, static_cast<int>(j - i), prune_tol);
    acc = acc ? convolve(*acc, run, prune_tol) : run;
    i = j;
  }
  return {false, *acc};
}

struct SumMoments {
  double variance = 0.0;
  double rho3 = 0.0;
};

SumMoments check_normalized_sum(std::span<const DiscreteDist> ds) {
  if (ds.empty()) throw Error(Errc::EmptySupport, "no summands");
  SumMoments s;
  for (const auto& d : ds) {
    const MomentSummary m = moments(d);
    if (std::abs(m.mean) > 1e-12)
      throw Error(Errc::MeanNotZero, "summand mean is " + std::to_string(m.mean));
    s.variance += m.variance;
    s.rho3 += m.abs3;
  }
  if (std::abs(s.variance - 1.0) > 1e-10)
    throw Error(Errc::VarianceNotNormalized, "total variance is " + std::to_string(s.variance));
  return s;
}

}  // namespace

double smoothing_constant(const BoundConfig& cfg, const Kernel& k) {
  return cfg.C_smooth ? *cfg.C_smooth : kSmoothingTailFactor * k.c_phi_tail;
}

double chf_integral(const ChfExpr& x, const ChfExpr& y, double eps, double quad_tol) {
  if (!(eps > 0.0)) throw Error(Errc::BadParam, "eps must be positive");
  if (!(quad_tol > 0.0)) throw Error(Errc::BadParam, "quad_tol must be positive");
  const double t_hi = 1.0 / eps;
  const double delta = std::min(kChfIntegralDelta, t_hi);

  // |(chf_x - chf_y)/t| <= |mu_x - mu_y| + |t| (E X^2 + E Y^2) / 2 near the origin.
  const RawMoments mx = raw_moments(x), my = raw_moments(y);
  const double near_zero =
      2.0 * delta * (std::abs(mx.mean - my.mean) + 0.5 * delta * (mx.second + my.second));
  if (x.same_node(y)) return 0.0;
  if (t_hi <= delta) return near_zero;

  // The integrand is even: chf(-t) is the conjugate of chf(t) for real laws.
  // Differences of chf - 1 keep the small-t integrand free of cancellation noise.
  auto integrand = [&](double t) { return std::abs(chf_minus_one(x, t) - chf_minus_one(y, t)) / t; };
  std::vector<double> breaks{delta};
  for (double b = 1.0; b < t_hi; b += 1.0) breaks.push_back(b);
  breaks.push_back(t_hi);

  AdaptiveSimpson<double, decltype(integrand)> q(integrand, 0.5 * quad_tol);
  return 2.0 * q.integrate(std::span<const double>(breaks)) + near_zero;
}

Lemma1Check lemma1_check(const DiscreteDist& d, const Kernel& k, double eps,
                         std::optional<SmoothedSup> precomputed) {
  Lemma1Check c;
  c.distance = kolmogorov_vs_normal(d).distance;
  c.sup_smoothed = (precomputed ? *precomputed : sup_smoothed_discrepancy(d, k, eps)).sup;
  c.tail_term = kSmoothingTailFactor * k.c_phi_tail * kNormalDensityBound * eps;
  c.holds = c.distance <= 2.0 * c.sup_smoothed + c.tail_term;
  return c;
}

Lemma2Check lemma2_check(const DiscreteDist& d, const Kernel& k, double eps, double quad_tol,
                         std::optional<SmoothedSup> precomputed) {
  Lemma2Check c;
  c.lhs_sup = (precomputed ? *precomputed : sup_smoothed_discrepancy(d, k, eps)).sup;
  c.rhs_integral = chf_integral(ChfExpr::atoms(d), ChfExpr::standard_normal(), eps, quad_tol);
  c.holds = c.lhs_sup <= c.rhs_integral + kLemma2Slack;
  return c;
}

BoundReport esseen_rhs(const ChfExpr& x, double density_bound, double eps, const BoundConfig& cfg) {
  if (!(density_bound > 0.0)) throw Error(Errc::BadParam, "density bound must be positive");
  if (!(eps > 0.0)) throw Error(Errc::BadParam, "eps must be positive");
  BoundReport r;
  r.eps = eps;
  r.density_bound = density_bound;
  r.C_smooth = smoothing_constant(cfg);

  const Materialized m = materialize(x, cfg.prune_tol);
  if (!m.standard_normal) {
    const DistanceReport dr = kolmogorov_vs_normal(*m.dist);
    r.lhs = dr.distance;
    r.error_bar = dr.error_bar;
  }
  r.integral_term = chf_integral(x, ChfExpr::standard_normal(), eps, cfg.quad_tol);
  r.tail_term = r.C_smooth * density_bound * eps;
  r.rhs = 2.0 * r.integral_term + r.tail_term;
  r.min_feasible_C = std::max(0.0, (r.lhs - 2.0 * r.integral_term) / (density_bound * eps));
  return r;
}

double calibrate_c_small(std::span<const DiscreteDist> ds, double c_small) {
  if (!(c_small > 0.0)) throw Error(Errc::BadParam, "c_small must be positive");
  const SumMoments s = check_normalized_sum(ds);
  const ChfExpr chf = ChfExpr::product_of(ds);
  for (int attempt = 0; attempt < 64; ++attempt, c_small *= 0.5) {
    const double window = c_small / s.rho3;
    bool ok = true;
    for (int k = 0; k < kCalibrationPoints && ok; ++k) {
      const double t = window * k / (kCalibrationPoints - 1);
      ok = std::abs(chf_eval(chf, t)) <= std::exp(-0.25 * t * t) + 1e-15;
    }
    if (ok) return c_small;
  }
  throw Error(Errc::BadParam, "no c_small satisfies the exp(-t^2/4) envelope");
}

BoundReport end_to_end_bound(std::span<const DiscreteDist> ds, const BoundConfig& cfg) {
  const SumMoments s = check_normalized_sum(ds);
  const double c_eff = calibrate_c_small(ds, cfg.c_small);
  const double eps = s.rho3 / c_eff;

  BoundReport r = esseen_rhs(ChfExpr::product_of(ds), kNormalDensityBound, eps, cfg);
  r.rho3 = s.rho3;
  r.c_small_effective = c_eff;
  r.wide_epsilon = s.rho3 >= 8.0 * c_eff;

  r.lemma4_constant = lemma4_sweep(ds, c_eff, kLemma4Points).lambda_max;
  const double window = 1.0 / eps;
  const double moment_integral = adaptive_simpson(
      [](double t) { return t * t * std::exp(-0.25 * t * t); }, -window, window, 1e-12);
  r.lemma4_majorant = r.lemma4_constant * s.rho3 * moment_integral;
  return r;
}

double berry_esseen_rhs(std::span<const DiscreteDist> ds, double C_be) {
  if (!(C_be >= 0.0)) throw Error(Errc::BadParam, "C_be must be nonnegative");
  return C_be * check_normalized_sum(ds).rho3;
}

}  // namespace esseen
