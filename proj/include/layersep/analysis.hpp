#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "layersep/measures.hpp"
#include "layersep/pointset.hpp"

namespace layersep {

struct SampleInfo {
  double fraction = 1.0;
  std::uint64_t seed = 0;
  std::size_t sampled_n = 0;
};

struct LayerValue {
  int layer = 0;
  MeasureValue value;
};

struct SeparabilityReport {
  std::string dataset_name;
  Measure measure = Measure::Csm;
  std::vector<LayerValue> per_layer;
  std::optional<SampleInfo> sample_info;
};

struct Recommendation {
  int chosen_layer = 0;
  double winning_value = 0.0;
  std::vector<int> ties;
};

enum class AccuracyUnits { Fraction, Percent };

struct AccuracyPoint {
  int layer = 0;
  double accuracy = 0.0;
};

/// Externally measured per-layer test accuracy.
class AccuracyCurve {
 public:
  AccuracyCurve(std::vector<AccuracyPoint> points, AccuracyUnits units);

  const std::vector<AccuracyPoint>& points() const noexcept { return points_; }
  AccuracyUnits units() const noexcept { return units_; }

 private:
  std::vector<AccuracyPoint> points_;
  AccuracyUnits units_;
};

/// Parses `layer,accuracy` CSV (header line required).
AccuracyCurve read_accuracy_csv(std::istream& in, AccuracyUnits units);

/// One measure value per layer; per-layer errors carry the layer index.
SeparabilityReport sweep(const LayerStack& stack, Measure measure,
                         const NeighborOptions& options = {});

/// CSM, SI and HM per layer, sharing one neighbour search per layer.
std::vector<SeparabilityReport> sweep_all(const LayerStack& stack,
                                          std::span<const Measure> measures,
                                          const NeighborOptions& options = {});

/// Argmax over layers. +inf beats any finite value; ties go to the smallest
/// layer and are all listed.
Recommendation recommend(const SeparabilityReport& report);

/// Sample Pearson correlation between per-layer values and accuracies.
double correlate(const SeparabilityReport& report, const AccuracyCurve& acc);

/// Pearson correlation of two equal-length series (two-pass, centred).
double pearson(std::span<const double> x, std::span<const double> y);

/// Row indices (ascending) of a uniform sample without replacement of
/// ceil(fraction * n) rows containing both labels. Re-draws with seed+1 up to
/// 16 times before failing.
std::vector<std::size_t> sample_rows(std::span<const Label> labels,
                                     double fraction, std::uint64_t seed);

LabeledPointSet subsample(const LabeledPointSet& set, double fraction,
                          std::uint64_t seed);
LayerStack subsample(const LayerStack& stack, double fraction,
                     std::uint64_t seed);

}  // namespace layersep
