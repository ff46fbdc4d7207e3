#include "esseen/charfun.hpp"

#include <cmath>
#include <string>

namespace esseen {

namespace {

std::complex<double> ipow(std::complex<double> z, std::size_t k) {
  std::complex<double> acc = 1.0;
  while (k) {
    if (k & 1u) acc *= z;
    k >>= 1u;
    if (k) z *= z;
  }
  return acc;
}

struct Evaluator {
  double t;

  std::complex<double> operator()(const DiscreteAtoms& a) const { return chf_eval(a.dist, t); }
  std::complex<double> operator()(const StandardNormal&) const { return normal_chf(t); }
  std::complex<double> operator()(const Scaled& s) const { return chf_eval(s.inner, s.c * t); }
  std::complex<double> operator()(const ProductOfIndependent& p) const {
    std::complex<double> acc = 1.0;
    const auto& fs = p.factors;
    for (std::size_t i = 0; i < fs.size();) {
      std::size_t j = i + 1;
      while (j < fs.size() && fs[j].same_node(fs[i])) ++j;
      acc *= ipow(chf_eval(fs[i], t), j - i);
      i = j;
    }
    return acc;
  }
};

// Arithmetic on w = z - 1: (1 + a)(1 + b) - 1 = a + b + ab.
std::complex<double> mul_m1(std::complex<double> a, std::complex<double> b) { return a + b + a * b; }

std::complex<double> ipow_m1(std::complex<double> w, std::size_t k) {
  std::complex<double> acc = 0.0;
  while (k) {
    if (k & 1u) acc = mul_m1(acc, w);
    k >>= 1u;
    if (k) w = mul_m1(w, w);
  }
  return acc;
}

struct MinusOneEvaluator {
  double t;

  std::complex<double> operator()(const DiscreteAtoms& a) const { return chf_minus_one(a.dist, t); }
  std::complex<double> operator()(const StandardNormal&) const { return std::expm1(-0.5 * t * t); }
  std::complex<double> operator()(const Scaled& s) const { return chf_minus_one(s.inner, s.c * t); }
  std::complex<double> operator()(const ProductOfIndependent& p) const {
    std::complex<double> acc = 0.0;
    const auto& fs = p.factors;
    for (std::size_t i = 0; i < fs.size();) {
      std::size_t j = i + 1;
      while (j < fs.size() && fs[j].same_node(fs[i])) ++j;
      acc = mul_m1(acc, ipow_m1(chf_minus_one(fs[i], t), j - i));
      i = j;
    }
    return acc;
  }
};

struct MomentVisitor {
  RawMoments operator()(const DiscreteAtoms& a) const {
    const auto& x = a.dist.points();
    const auto& p = a.dist.probs();
    return {(p * x).sum(), (p * x.square()).sum()};
  }
  RawMoments operator()(const StandardNormal&) const { return {0.0, 1.0}; }
  RawMoments operator()(const Scaled& s) const {
    const RawMoments m = raw_moments(s.inner);
    return {s.c * m.mean, s.c * s.c * m.second};
  }
  RawMoments operator()(const ProductOfIndependent& p) const {
    double mean = 0.0, var = 0.0;
    for (const auto& f : p.factors) {
      const RawMoments m = raw_moments(f);
      mean += m.mean;
      var += m.second - m.mean * m.mean;
    }
    return {mean, var + mean * mean};
  }
};

// rho^3 |t|^3; shared by the range check and lemma3_t_max so both agree bit for bit.
double cube_term(double abs3, double t) {
  const double at = std::abs(t);
  return abs3 * (at * at * at);
}

void require_mean_zero(const MomentSummary& m) {
  const double scale = std::max(1.0, std::cbrt(m.abs3));
  if (std::abs(m.mean) > 1e-12 * scale)
    throw Error(Errc::MeanNotZero, "distribution mean is " + std::to_string(m.mean));
}

struct PreparedSum {
  ChfExpr chf;
  double rho3;
};

PreparedSum prepare_sum(std::span<const DiscreteDist> ds) {
  if (ds.empty()) throw Error(Errc::EmptySupport, "empty summand list");
  double var = 0.0, rho3 = 0.0;
  for (const auto& d : ds) {
    const MomentSummary m = moments(d);
    var += m.variance;
    rho3 += m.abs3;
  }
  if (std::abs(var - 1.0) > 1e-10)
    throw Error(Errc::VarianceNotNormalized, "total variance is " + std::to_string(var));
  return {ChfExpr::product_of(ds), rho3};
}

Lemma4Gap gap_at(const PreparedSum& s, double t) {
  Lemma4Gap g;
  g.gap = std::abs(chf_minus_one(s.chf, t) - std::expm1(-0.5 * t * t));
  if (std::abs(t) >= kLemma4MinT) g.ratio = g.gap / (cube_term(s.rho3, t) * std::exp(-0.25 * t * t));
  return g;
}

}  // namespace

ChfExpr ChfExpr::atoms(DiscreteDist d) {
  return ChfExpr(std::make_shared<const ChfNode>(DiscreteAtoms{std::move(d)}));
}

ChfExpr ChfExpr::standard_normal() {
  static const ChfExpr normal(std::make_shared<const ChfNode>(StandardNormal{}));
  return normal;
}

ChfExpr ChfExpr::scaled(double c, ChfExpr inner) {
  return ChfExpr(std::make_shared<const ChfNode>(Scaled{c, std::move(inner)}));
}

ChfExpr ChfExpr::product(std::vector<ChfExpr> factors) {
  return ChfExpr(std::make_shared<const ChfNode>(ProductOfIndependent{std::move(factors)}));
}

ChfExpr ChfExpr::product_of(std::span<const DiscreteDist> ds) {
  std::vector<ChfExpr> factors;
  factors.reserve(ds.size());
  for (std::size_t k = 0; k < ds.size(); ++k) {
    if (k > 0 && ds[k] == ds[k - 1])
      factors.push_back(factors.back());
    else
      factors.push_back(atoms(ds[k]));
  }
  return product(std::move(factors));
}

std::complex<double> chf_eval(const ChfExpr& e, double t) {
  return std::visit(Evaluator{t}, static_cast<const ChfNode::variant&>(e.node()));
}

std::complex<double> chf_eval(const DiscreteDist& d, double t) {
  if (t == 0.0) return 1.0;
  const Eigen::ArrayXd arg = t * d.points();
  return {(d.probs() * arg.cos()).sum(), (d.probs() * arg.sin()).sum()};
}

std::complex<double> chf_minus_one(const ChfExpr& e, double t) {
  if (t == 0.0) return 0.0;
  return std::visit(MinusOneEvaluator{t}, static_cast<const ChfNode::variant&>(e.node()));
}

std::complex<double> chf_minus_one(const DiscreteDist& d, double t) {
  if (t == 0.0) return 0.0;
  const Eigen::ArrayXd half = 0.5 * t * d.points();
  const auto& p = d.probs();
  // cos(tx) - 1 = -2 sin^2(tx/2); pruned mass is missing from the sum.
  const double re = -2.0 * (p * half.sin().square()).sum() - d.pruned_mass();
  const double im = (p * (2.0 * half).sin()).sum();
  return {re, im};
}

RawMoments raw_moments(const ChfExpr& e) {
  return std::visit(MomentVisitor{}, static_cast<const ChfNode::variant&>(e.node()));
}

double lemma3_t_max(const DiscreteDist& d) {
  const MomentSummary m = moments(d);
  if (!(m.abs3 > 0.0)) throw Error(Errc::ZeroVariance, "point mass at zero has no range");
  double t = 1.0 / std::cbrt(m.abs3);
  while (cube_term(m.abs3, t) > 1.0) t = std::nextafter(t, 0.0);
  return t;
}

RemainderReport lemma3_remainder(const DiscreteDist& d, double t) {
  const MomentSummary m = moments(d);
  require_mean_zero(m);
  if (!(m.variance > 0.0)) throw Error(Errc::ZeroVariance, "lemma3_remainder needs variance > 0");

  RemainderReport r;
  r.t = t;
  r.a = m.variance * t * t;
  r.b = std::copysign(cube_term(m.abs3, t), t);
  r.in_range = t != 0.0 && std::abs(r.b) <= 1.0;
  if (!r.in_range) throw Error(Errc::OutOfRange, "need 0 < |t| <= 1/rho");

  const std::complex<double> w = chf_minus_one(d, t);
  r.chf_dist_from_one = std::abs(w);
  if (r.chf_dist_from_one >= 0.999)
    throw Error(Errc::LogBranchViolation, "chf(t) too far from 1 for the principal log");
  r.log_disk_ok = r.chf_dist_from_one <= 2.0 / 3.0;

  // Principal log(1 + w) without cancellation.
  const double log_re = 0.5 * std::log1p(2.0 * w.real() + std::norm(w));
  const double log_im = std::atan2(w.imag(), 1.0 + w.real());
  const std::complex<double> remainder(log_re + 0.5 * r.a, log_im);
  r.theta_ratio = std::abs(remainder) / std::abs(r.b);
  return r;
}

bool chf_bound_check(const DiscreteDist& d, double t, double C) {
  const MomentSummary m = moments(d);
  require_mean_zero(m);
  const double rhs = std::exp(-0.5 * m.variance * t * t + C * cube_term(m.abs3, t));
  return std::abs(chf_eval(d, t)) <= rhs;
}

Lemma4Gap lemma4_gap(std::span<const DiscreteDist> ds, double t, double c_small) {
  const PreparedSum s = prepare_sum(ds);
  if (std::abs(t) > c_small / s.rho3)
    throw Error(Errc::OutOfRange, "need |t| <= c_small / rho^3");
  return gap_at(s, t);
}

Lemma3Sweep lemma3_sweep(const DiscreteDist& d, int points) {
  if (points < 1) throw Error(Errc::EmptyGrid, "lemma3_sweep needs points >= 1");
  const double t_max = lemma3_t_max(d);
  Lemma3Sweep s;
  s.points = points;
  for (int k = 1; k <= points; ++k) {
    const double t = k == points ? t_max : t_max * k / points;
    const RemainderReport r = lemma3_remainder(d, t);
    if (!(r.a * r.a <= std::abs(r.b) && std::abs(r.b) <= 1.0)) ++s.regime_violations;
    if (!r.log_disk_ok) ++s.branch_violations;
    if (r.theta_ratio > s.theta_max) {
      s.theta_max = r.theta_ratio;
      s.t_at_max = t;
    }
  }
  return s;
}

Lemma4Sweep lemma4_sweep(std::span<const DiscreteDist> ds, double c_small, int points) {
  if (points < 2) throw Error(Errc::EmptyGrid, "lemma4_sweep needs points >= 2");
  const PreparedSum s = prepare_sum(ds);
  Lemma4Sweep out;
  out.points = points;
  out.t_window = c_small / s.rho3;
  for (int k = 0; k < points; ++k) {
    const double t = -out.t_window + 2.0 * out.t_window * k / (points - 1);
    const Lemma4Gap g = gap_at(s, t);
    if (g.ratio > out.lambda_max) {
      out.lambda_max = g.ratio;
      out.t_at_max = t;
    }
  }
  return out;
}

}  // namespace esseen
