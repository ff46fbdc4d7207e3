#pragma once

#include <complex>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "esseen/dist.hpp"

namespace esseen {

struct ChfNode;

/// Characteristic function t -> E exp(itX) as an expression tree.
///
/// Leaves are finite atom sums or the standard normal; inner nodes are
/// rescaling (X -> cX) and products of independent factors. Nodes are shared
/// and immutable; copies of one `ChfExpr` inside a product are evaluated once.
class ChfExpr {
 public:
  static ChfExpr atoms(DiscreteDist d);
  static ChfExpr standard_normal();
  static ChfExpr scaled(double c, ChfExpr inner);
  static ChfExpr product(std::vector<ChfExpr> factors);
  /// Product of chfs of independent summands. Equal consecutive distributions
  /// share one node.
  static ChfExpr product_of(std::span<const DiscreteDist> ds);

  const ChfNode& node() const noexcept { return *node_; }
  bool same_node(const ChfExpr& other) const noexcept { return node_ == other.node_; }

 private:
  explicit ChfExpr(std::shared_ptr<const ChfNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const ChfNode> node_;
};

struct DiscreteAtoms {
  DiscreteDist dist;
};
struct StandardNormal {};
struct Scaled {
  double c;
  ChfExpr inner;
};
struct ProductOfIndependent {
  std::vector<ChfExpr> factors;
};

struct ChfNode : std::variant<DiscreteAtoms, StandardNormal, Scaled, ProductOfIndependent> {
  using variant::variant;
};

std::complex<double> chf_eval(const ChfExpr& e, double t);
std::complex<double> chf_eval(const DiscreteDist& d, double t);

/// E exp(itX) - 1, accurate for small |t| (no cancellation against 1).
std::complex<double> chf_minus_one(const DiscreteDist& d, double t);
std::complex<double> chf_minus_one(const ChfExpr& e, double t);

/// First two raw moments of the law behind `e`.
struct RawMoments {
  double mean = 0.0;
  double second = 0.0;
};
RawMoments raw_moments(const ChfExpr& e);

/// Numerical view of the remainder in log E exp(itX) = -a/2 + O(b),
/// with a = sigma^2 t^2 and b = rho^3 t^3.
struct RemainderReport {
  double t = 0.0;
  /// |log chf(t) + sigma^2 t^2 / 2| / (rho^3 |t|^3)
  double theta_ratio = 0.0;
  double a = 0.0;
  double b = 0.0;
  /// rho^3 |t|^3 <= 1
  bool in_range = false;
  /// |chf(t) - 1|; the principal logarithm is used only when this is below 2/3.
  double chf_dist_from_one = 0.0;
  bool log_disk_ok = false;
};

/// Largest t with rho^3 t^3 <= 1 in floating point.
double lemma3_t_max(const DiscreteDist& d);

/// Throws `OutOfRange` unless 0 < |t| and rho^3 |t|^3 <= 1, and
/// `LogBranchViolation` if chf(t) strays to distance 0.999 from 1.
RemainderReport lemma3_remainder(const DiscreteDist& d, double t);

/// |chf(t)| <= exp(-sigma^2 t^2 / 2 + C rho^3 |t|^3).
bool chf_bound_check(const DiscreteDist& d, double t, double C);

struct Lemma4Gap {
  double gap = 0.0;
  /// gap / (rho^3 |t|^3 exp(-t^2/4)); zero for |t| below `kLemma4MinT`.
  double ratio = 0.0;
};
inline constexpr double kLemma4MinT = 1e-6;

/// Gap between the chf of an independent sum with unit total variance and
/// exp(-t^2/2), restricted to |t| <= c_small / rho^3.
Lemma4Gap lemma4_gap(std::span<const DiscreteDist> ds, double t, double c_small);

// Grid sweeps used by the CLI and the acceptance suite.

struct Lemma3Sweep {
  double theta_max = 0.0;  // max theta_ratio over the grid
  double t_at_max = 0.0;
  long regime_violations = 0;  // points where a^2 <= |b| <= 1 fails
  long branch_violations = 0;  // points with |chf - 1| > 2/3
  int points = 0;
};
/// `points` equally spaced t in (0, lemma3_t_max(d)].
Lemma3Sweep lemma3_sweep(const DiscreteDist& d, int points);

struct Lemma4Sweep {
  double lambda_max = 0.0;
  double t_at_max = 0.0;
  double t_window = 0.0;
  int points = 0;
};
/// `points` equally spaced t in [-c_small/rho^3, c_small/rho^3].
Lemma4Sweep lemma4_sweep(std::span<const DiscreteDist> ds, double c_small, int points);

}  // namespace esseen
