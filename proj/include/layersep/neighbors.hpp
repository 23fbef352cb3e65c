#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "layersep/kernels.hpp"
#include "layersep/pointset.hpp"

namespace layersep {

/// Marks an absent nearhit (the point's class is a singleton).
inline constexpr std::uint32_t kNoNeighbor = UINT32_MAX;

struct NeighborResult {
  std::vector<std::uint32_t> nn_index;
  std::vector<double> nn_distance;
  std::vector<std::uint32_t> nearhit_index;
  std::vector<double> nearhit_distance;  // NaN when absent
  std::vector<std::uint32_t> nearmiss_index;
  std::vector<double> nearmiss_distance;

  bool has_nearhit(std::size_t i) const noexcept {
    return nearhit_index[i] != kNoNeighbor;
  }

  /// Indices equal and distances bitwise equal (absent nearhits compare equal).
  friend bool operator==(const NeighborResult& a, const NeighborResult& b);
};

struct NeighborOptions {
  unsigned threads = 0;  // 0 = hardware concurrency
  std::optional<kernels::Isa> isa;  // unset = detect
};

/// Squared Euclidean distance summed sequentially in index order. Both
/// neighbour paths rank candidates by exactly this value, so they agree on
/// indices even at floating-point near-ties.
double reference_squared_distance(std::span<const double> a,
                                  std::span<const double> b) noexcept;

/// Exact nearest, nearhit and nearmiss of every point. Self is excluded;
/// equal distances resolve to the smallest index. Throws EmptyClass when a
/// label has no members.
NeighborResult all_nearest(const LabeledPointSet& set,
                           const NeighborOptions& options = {});

/// O(n^2 d) double loop; the oracle for all_nearest.
NeighborResult all_nearest_reference(const LabeledPointSet& set);

}  // namespace layersep
