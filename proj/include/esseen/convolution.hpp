#pragma once

#include <cstddef>
#include <span>

#include "esseen/dist.hpp"

namespace esseen {

inline constexpr double kDefaultPruneTol = 1e-12;
inline constexpr double kMaxPruneTol = 1e-9;
inline constexpr std::size_t kDefaultMaxAtoms = 2'000'000;

/// Distribution of X + Y for independent X ~ d1, Y ~ d2.
///
/// Atoms whose merged probability falls below `prune_tol` are dropped and
/// their mass is added to `pruned_mass`. Throws `SupportOverflow` when the
/// result would hold more than `max_atoms` atoms.
DiscreteDist convolve(const DiscreteDist& d1, const DiscreteDist& d2,
                      double prune_tol = kDefaultPruneTol,
                      std::size_t max_atoms = kDefaultMaxAtoms);

/// n-fold convolution power by square-and-multiply.
DiscreteDist sum_iid(const DiscreteDist& d, int n, double prune_tol = kDefaultPruneTol,
                     std::size_t max_atoms = kDefaultMaxAtoms);

/// Left fold of `convolve` over `ds`.
DiscreteDist sum_independent(std::span<const DiscreteDist> ds,
                             double prune_tol = kDefaultPruneTol,
                             std::size_t max_atoms = kDefaultMaxAtoms);

}  // namespace esseen
