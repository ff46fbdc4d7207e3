#pragma once

#include <span>
#include <string>

#include <Eigen/Core>

#include "esseen/error.hpp"

namespace esseen {

/// Finite-support probability distribution on the real line.
///
/// Atoms are kept sorted strictly increasing with positive probabilities.
/// `pruned_mass` records probability discarded by convolution pruning, so
/// `probs().sum() + pruned_mass()` is one up to rounding.
class DiscreteDist {
 public:
  /// Points closer than `kMergeTol * max(1, |x|)` are merged on construction.
  static constexpr double kMergeTol = 1e-14;
  static constexpr double kMassTol = 1e-12;

  const Eigen::ArrayXd& points() const noexcept { return points_; }
  const Eigen::ArrayXd& probs() const noexcept { return probs_; }
  double pruned_mass() const noexcept { return pruned_mass_; }
  Eigen::Index size() const noexcept { return points_.size(); }

  /// P{X <= x}.
  double cdf(double x) const;
  /// P{X < x}.
  double cdf_left(double x) const;

  /// Builds from atoms already sorted by point. Merges near-duplicates,
  /// drops atoms with probability below `prune_tol` into the pruned mass and
  /// checks the mass balance.
  static DiscreteDist from_sorted(const Eigen::ArrayXd& points, const Eigen::ArrayXd& probs,
                                  double pruned_mass, double prune_tol = 0.0);

  friend bool operator==(const DiscreteDist& a, const DiscreteDist& b) {
    return a.pruned_mass_ == b.pruned_mass_ && a.points_.size() == b.points_.size() &&
           (a.points_ == b.points_).all() && (a.probs_ == b.probs_).all();
  }

 private:
  DiscreteDist() = default;

  Eigen::ArrayXd points_;
  Eigen::ArrayXd probs_;
  Eigen::ArrayXd cumulative_;  // cumulative_[i] = probs_[0] + ... + probs_[i]
  double pruned_mass_ = 0.0;
};

struct MomentSummary {
  double mean = 0.0;
  double variance = 0.0;
  /// E|X|^3, taken about zero.
  double abs3 = 0.0;
};

DiscreteDist make_discrete(std::span<const double> points, std::span<const double> probs);
DiscreteDist point_mass(double x);

enum class FamilyKind { Rademacher, CenteredBernoulli, TwoPoint, UniformLattice };

/// Named mean-zero families. Unused parameters are ignored.
struct FamilySpec {
  FamilyKind kind = FamilyKind::Rademacher;
  double p = 0.5;    // centered_bernoulli
  double x1 = -1.0;  // two_point
  double x2 = 1.0;   // two_point
  int m = 2;         // uniform_lattice

  static FamilySpec rademacher() { return {}; }
  static FamilySpec centered_bernoulli(double p) { return {FamilyKind::CenteredBernoulli, p}; }
  static FamilySpec two_point(double x1, double x2) {
    return {FamilyKind::TwoPoint, 0.5, x1, x2};
  }
  static FamilySpec uniform_lattice(int m) { return {FamilyKind::UniformLattice, 0.5, -1, 1, m}; }

  /// Canonical textual form, e.g. `centered_bernoulli:0.3`.
  std::string name() const;
  /// Inverse of `name()`; throws `BadParam` on malformed input.
  static FamilySpec parse(const std::string& text);
};

DiscreteDist family(const FamilySpec& spec);

MomentSummary moments(const DiscreteDist& d);

DiscreteDist scale(const DiscreteDist& d, double c);
/// Shift to mean zero and rescale to unit variance.
DiscreteDist standardize(const DiscreteDist& d);

inline double cdf(const DiscreteDist& d, double x) { return d.cdf(x); }
inline double cdf_left(const DiscreteDist& d, double x) { return d.cdf_left(x); }

// Standard normal reference.

inline constexpr double kNormalDensityBound = 0.398942280401432677939946059934;  // 1/sqrt(2 pi)

double normal_cdf(double x);
double normal_pdf(double x);
/// E exp(itG) = exp(-t^2/2).
double normal_chf(double t);

}  // namespace esseen
