#include "layersep/measures.hpp"

#include <cmath>
#include <limits>

#include "layersep/error.hpp"

namespace layersep {

namespace {

struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) noexcept {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  double value() const noexcept { return sum + carry; }
};

double squared_norm_of_difference(std::span<const double> a,
                                  std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    s += diff * diff;
  }
  return s;
}

void check_neighbors(const LabeledPointSet& set, const NeighborResult& nb) {
  if (nb.nn_index.size() != set.size() || nb.nearmiss_index.size() != set.size() ||
      nb.nearhit_index.size() != set.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "neighbour result does not belong to this point set");
  }
  for (Label c = 0; c < 2; ++c) {
    if (set.class_count(c) == 0) {
      throw Error(ErrorCode::EmptyClass,
                  "class " + std::to_string(static_cast<int>(c)) +
                      " has no members");
    }
  }
}

}  // namespace

std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::Csm: return "csm";
    case Measure::Si: return "si";
    case Measure::Hm: return "hm";
  }
  return "unknown";
}

std::optional<Measure> parse_measure(std::string_view text) {
  if (text == "csm") return Measure::Csm;
  if (text == "si") return Measure::Si;
  if (text == "hm") return Measure::Hm;
  return std::nullopt;
}

std::string flags_to_string(MeasureFlag flags) {
  std::string out;
  auto append = [&](std::string_view name) {
    if (!out.empty()) out += '|';
    out += name;
  };
  if (has_flag(flags, MeasureFlag::WithinScatterZero)) append("WithinScatterZero");
  if (has_flag(flags, MeasureFlag::SingletonHitsSkipped)) append("SingletonHitsSkipped");
  return out;
}

bool MeasureValue::is_sentinel() const noexcept { return std::isinf(value); }

ScatterTraces scatter_traces(const LabeledPointSet& set) {
  const ClassStatistics stats = class_statistics(set);
  ScatterTraces t;
  for (Label c = 0; c < 2; ++c) {
    t.between += static_cast<double>(stats.class_counts[c]) *
                 squared_norm_of_difference(stats.class_means[c], stats.global_mean);
  }
  CompensatedSum within;
  for (std::size_t i = 0; i < set.size(); ++i) {
    within.add(squared_norm_of_difference(set.point(i),
                                          stats.class_means[set.label(i)]));
  }
  t.within = within.value();
  return t;
}

MeasureValue csm(const LabeledPointSet& set) {
  const ScatterTraces t = scatter_traces(set);
  MeasureValue mv;
  mv.measure = Measure::Csm;
  if (t.within == 0.0) {
    if (t.between == 0.0) {
      throw Error(ErrorCode::DegenerateData,
                  "all points coincide; between- and within-class scatter are both zero");
    }
    mv.value = std::numeric_limits<double>::infinity();
    mv.flags = MeasureFlag::WithinScatterZero;
    return mv;
  }
  mv.value = t.between / t.within;
  return mv;
}

MeasureValue si(const LabeledPointSet& set, const NeighborResult& neighbors) {
  check_neighbors(set, neighbors);
  std::size_t agree = 0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set.label(neighbors.nn_index[i]) == set.label(i)) ++agree;
  }
  MeasureValue mv;
  mv.measure = Measure::Si;
  mv.value = static_cast<double>(agree) / static_cast<double>(set.size());
  return mv;
}

MeasureValue hm(const LabeledPointSet& set, const NeighborResult& neighbors) {
  check_neighbors(set, neighbors);
  CompensatedSum sum;
  std::size_t counted = 0;
  MeasureValue mv;
  mv.measure = Measure::Hm;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (!neighbors.has_nearhit(i)) {
      mv.flags = mv.flags | MeasureFlag::SingletonHitsSkipped;
      continue;
    }
    sum.add(0.5 * (neighbors.nearmiss_distance[i] - neighbors.nearhit_distance[i]));
    ++counted;
  }
  mv.value = sum.value();
  // Only possible when both classes are singletons (n = 2).
  mv.per_point_mean = counted == 0 ? 0.0 : mv.value / static_cast<double>(counted);
  return mv;
}

MeasureValue compute_measure(const LabeledPointSet& set, Measure m,
                             const NeighborOptions& options) {
  switch (m) {
    case Measure::Csm:
      return csm(set);
    case Measure::Si:
      return si(set, all_nearest(set, options));
    case Measure::Hm:
      return hm(set, all_nearest(set, options));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown measure");
}

}  // namespace layersep
