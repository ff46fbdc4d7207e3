#include "esseen/dist.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace esseen {

namespace {

bool close_points(double anchor, double x) {
  return std::abs(x - anchor) <= DiscreteDist::kMergeTol * std::max(1.0, std::abs(anchor));
}

}  // namespace

DiscreteDist DiscreteDist::from_sorted(const Eigen::ArrayXd& points, const Eigen::ArrayXd& probs,
                                       double pruned_mass, double prune_tol) {
  const Eigen::Index n = points.size();
  std::vector<double> merged_points;
  std::vector<double> merged_probs;
  merged_points.reserve(static_cast<std::size_t>(n));
  merged_probs.reserve(static_cast<std::size_t>(n));

  for (Eigen::Index i = 0; i < n; ++i) {
    if (!merged_points.empty() && close_points(merged_points.back(), points[i])) {
      merged_probs.back() += probs[i];
    } else {
      merged_points.push_back(points[i]);
      merged_probs.push_back(probs[i]);
    }
  }

  DiscreteDist d;
  d.pruned_mass_ = pruned_mass;
  std::size_t kept = 0;
  for (std::size_t i = 0; i < merged_points.size(); ++i) {
    const double p = merged_probs[i];
    if (p <= 0.0) continue;
    if (p < prune_tol) {
      d.pruned_mass_ += p;
      continue;
    }
    merged_points[kept] = merged_points[i];
    merged_probs[kept] = p;
    ++kept;
  }
  if (kept == 0) throw Error(Errc::EmptySupport, "no atoms with positive probability");

  d.points_ = Eigen::Map<const Eigen::ArrayXd>(merged_points.data(), static_cast<Eigen::Index>(kept));
  d.probs_ = Eigen::Map<const Eigen::ArrayXd>(merged_probs.data(), static_cast<Eigen::Index>(kept));
  d.cumulative_.resize(d.probs_.size());
  std::partial_sum(d.probs_.begin(), d.probs_.end(), d.cumulative_.begin());

  const double total = d.cumulative_[d.cumulative_.size() - 1] + d.pruned_mass_;
  if (std::abs(total - 1.0) > kMassTol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "probabilities plus pruned mass sum to " << total;
    throw Error(Errc::ProbSumMismatch, msg.str());
  }
  return d;
}

double DiscreteDist::cdf(double x) const {
  const auto it = std::upper_bound(points_.begin(), points_.end(), x);
  const auto k = std::distance(points_.begin(), it);
  return k == 0 ? 0.0 : cumulative_[k - 1];
}

double DiscreteDist::cdf_left(double x) const {
  const auto it = std::lower_bound(points_.begin(), points_.end(), x);
  const auto k = std::distance(points_.begin(), it);
  return k == 0 ? 0.0 : cumulative_[k - 1];
}

DiscreteDist make_discrete(std::span<const double> points, std::span<const double> probs) {
  if (points.size() != probs.size())
    throw Error(Errc::BadParam, "points and probs differ in length");
  if (points.empty()) throw Error(Errc::EmptySupport, "empty atom list");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i]) || !std::isfinite(probs[i]))
      throw Error(Errc::NonFiniteInput, "atom " + std::to_string(i) + " is not finite");
    if (probs[i] < 0.0) throw Error(Errc::BadParam, "negative probability");
  }

  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });

  Eigen::ArrayXd sorted_points(static_cast<Eigen::Index>(order.size()));
  Eigen::ArrayXd sorted_probs(static_cast<Eigen::Index>(order.size()));
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted_points[static_cast<Eigen::Index>(i)] = points[order[i]];
    sorted_probs[static_cast<Eigen::Index>(i)] = probs[order[i]];
  }
  return DiscreteDist::from_sorted(sorted_points, sorted_probs, 0.0);
}

DiscreteDist point_mass(double x) {
  const double one = 1.0;
  return make_discrete(std::span(&x, 1), std::span(&one, 1));
}

namespace {

// Shortest text that parses back to the same double.
std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string FamilySpec::name() const {
  switch (kind) {
    case FamilyKind::Rademacher: return "rademacher";
    case FamilyKind::CenteredBernoulli: return "centered_bernoulli:" + shortest(p);
    case FamilyKind::TwoPoint: return "two_point:" + shortest(x1) + ',' + shortest(x2);
    case FamilyKind::UniformLattice: return "uniform_lattice:" + std::to_string(m);
  }
  return {};
}

FamilySpec FamilySpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string args = colon == std::string::npos ? std::string{} : text.substr(colon + 1);

  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw Error(Errc::BadParam, "cannot parse number in family '" + text + "'");
    }
    if (used != s.size()) throw Error(Errc::BadParam, "trailing characters in family '" + text + "'");
    return v;
  };

  if (head == "rademacher" && args.empty()) return rademacher();
  if (head == "centered_bernoulli" && !args.empty()) return centered_bernoulli(number(args));
  if (head == "two_point") {
    const auto comma = args.find(',');
    if (comma == std::string::npos) throw Error(Errc::BadParam, "two_point needs x1,x2");
    return two_point(number(args.substr(0, comma)), number(args.substr(comma + 1)));
  }
  if (head == "uniform_lattice" && !args.empty()) {
    const double m = number(args);
    if (m != std::floor(m)) throw Error(Errc::BadParam, "uniform_lattice size must be an integer");
    return uniform_lattice(static_cast<int>(m));
  }
  throw Error(Errc::BadParam, "unknown family '" + text + "'");
}

DiscreteDist family(const FamilySpec& spec) {
  switch (spec.kind) {
    case FamilyKind::Rademacher: {
      const double pts[] = {-1.0, 1.0};
      const double prs[] = {0.5, 0.5};
      return make_discrete(pts, prs);
    }
    case FamilyKind::CenteredBernoulli: {
      const double p = spec.p;
      if (!(p > 0.0 && p < 1.0)) throw Error(Errc::BadParam, "centered_bernoulli needs p in (0,1)");
      const double pts[] = {-p, 1.0 - p};
      const double prs[] = {1.0 - p, p};
      return make_discrete(pts, prs);
    }
    case FamilyKind::TwoPoint: {
      const double x1 = spec.x1, x2 = spec.x2;
      if (!std::isfinite(x1) || !std::isfinite(x2)) throw Error(Errc::NonFiniteInput, "two_point");
      if (!(x1 < 0.0 && x2 > 0.0)) throw Error(Errc::BadParam, "two_point needs x1 < 0 < x2");
      // p1 x1 + p2 x2 = 0 with p1 + p2 = 1
      const double width = x2 - x1;
      const double pts[] = {x1, x2};
      const double prs[] = {x2 / width, -x1 / width};
      return make_discrete(pts, prs);
    }
    case FamilyKind::UniformLattice: {
      const int m = spec.m;
      if (m < 1) throw Error(Errc::BadParam, "uniform_lattice needs m >= 1");
      std::vector<double> pts(static_cast<std::size_t>(m));
      std::vector<double> prs(static_cast<std::size_t>(m), 1.0 / m);
      for (int j = 0; j < m; ++j) pts[static_cast<std::size_t>(j)] = j - 0.5 * (m - 1);
      return make_discrete(pts, prs);
    }
  }
  throw Error(Errc::BadParam, "unknown family");
}

MomentSummary moments(const DiscreteDist& d) {
  const auto& x = d.points();
  const auto& p = d.probs();
  MomentSummary m;
  m.mean = (p * x).sum();
  m.variance = (p * (x - m.mean).square()).sum();
  m.abs3 = (p * x.abs().cube()).sum();
  return m;
}

DiscreteDist scale(const DiscreteDist& d, double c) {
  if (!std::isfinite(c)) throw Error(Errc::NonFiniteInput, "scale factor");
  if (c == 0.0) throw Error(Errc::ZeroScale, "scale factor is zero");
  Eigen::ArrayXd points = c * d.points();
  Eigen::ArrayXd probs = d.probs();
  if (c < 0.0) {
    points.reverseInPlace();
    probs.reverseInPlace();
  }
  return DiscreteDist::from_sorted(points, probs, d.pruned_mass());
}

DiscreteDist standardize(const DiscreteDist& d) {
  const MomentSummary m = moments(d);
  if (!(m.variance > 0.0)) throw Error(Errc::ZeroVariance, "cannot standardize a point mass");
  const double s = 1.0 / std::sqrt(m.variance);
  Eigen::ArrayXd points = (d.points() - m.mean) * s;
  return DiscreteDist::from_sorted(points, d.probs(), d.pruned_mass());
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

double normal_pdf(double x) { return kNormalDensityBound * std::exp(-0.5 * x * x); }

double normal_chf(double t) { return std::exp(-0.5 * t * t); }

}  // namespace esseen
