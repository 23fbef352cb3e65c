#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "layersep/neighbors.hpp"
#include "layersep/pointset.hpp"

namespace layersep {

enum class Measure { Csm, Si, Hm };

std::string_view to_string(Measure m);
std::optional<Measure> parse_measure(std::string_view text);

enum class MeasureFlag : std::uint8_t {
  None = 0,
  WithinScatterZero = 1u << 0,
  SingletonHitsSkipped = 1u << 1,
};

constexpr MeasureFlag operator|(MeasureFlag a, MeasureFlag b) {
  return static_cast<MeasureFlag>(static_cast<std::uint8_t>(a) |
                                  static_cast<std::uint8_t>(b));
}
constexpr bool has_flag(MeasureFlag set, MeasureFlag f) {
  return (static_cast<std::uint8_t>(set) & static_cast<std::uint8_t>(f)) != 0;
}

/// Flag names joined by '|', empty when no flag is set.
std::string flags_to_string(MeasureFlag flags);

struct MeasureValue {
  Measure measure = Measure::Csm;
  /// CSM: >= 0 or +inf (WithinScatterZero). SI: in [0,1]. HM: raw sum.
  double value = 0.0;
  MeasureFlag flags = MeasureFlag::None;
  /// HM only: value divided by the number of points that contributed.
  std::optional<double> per_point_mean;

  bool is_sentinel() const noexcept;
};

/// Trace of the between-class and within-class scatter matrices.
struct ScatterTraces {
  double between = 0.0;
  double within = 0.0;
};

ScatterTraces scatter_traces(const LabeledPointSet& set);

/// tr(S_B) / tr(S_W). Zero within-class scatter gives +inf with
/// WithinScatterZero; both traces zero throws DegenerateData.
MeasureValue csm(const LabeledPointSet& set);

/// Fraction of points whose nearest neighbour carries the same label.
MeasureValue si(const LabeledPointSet& set, const NeighborResult& neighbors);

/// Sum over points of half the gap (nearmiss distance - nearhit distance).
/// Points without a nearhit are skipped and flagged.
MeasureValue hm(const LabeledPointSet& set, const NeighborResult& neighbors);

/// Computes one measure, running the neighbour search if it needs one.
MeasureValue compute_measure(const LabeledPointSet& set, Measure m,
                             const NeighborOptions& options = {});

}  // namespace layersep
