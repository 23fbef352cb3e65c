#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "layersep/measures.hpp"
#include "support/errors.hpp"
#include "support/generators.hpp"

namespace layersep {
namespace {

using testing::code_of;

LabeledPointSet four_points() {
  return build_point_set({{0, 0}, {0, 2}, {4, 0}, {4, 2}}, {0, 0, 1, 1});
}

TEST(Csm, HandEvaluatedFourPoints) {
  const auto set = four_points();
  const auto t = scatter_traces(set);
  EXPECT_EQ(t.between, 16.0);
  EXPECT_EQ(t.within, 4.0);
  const auto v = csm(set);
  EXPECT_EQ(v.measure, Measure::Csm);
  EXPECT_NEAR(v.value, 4.0, 1e-12);
  EXPECT_EQ(v.flags, MeasureFlag::None);
}

TEST(Csm, CoincidentClassMeansGiveZero) {
  const auto set = build_point_set({{-1, 0}, {1, 0}, {0, -1}, {0, 1}}, {0, 0, 1, 1});
  EXPECT_EQ(csm(set).value, 0.0);
}

TEST(Csm, ZeroWithinScatterIsFlaggedInfinity) {
  const auto set = build_point_set({{0, 0}, {0, 0}, {1, 0}, {1, 0}}, {0, 0, 1, 1});
  const auto v = csm(set);
  EXPECT_TRUE(std::isinf(v.value));
  EXPECT_GT(v.value, 0.0);
  EXPECT_TRUE(v.is_sentinel());
  EXPECT_TRUE(has_flag(v.flags, MeasureFlag::WithinScatterZero));
}

TEST(Csm, AllPointsCoincideIsDegenerate) {
  const auto set = build_point_set({{0.3, 1}, {0.3, 1}, {0.3, 1}}, {0, 1, 0});
  EXPECT_EQ(code_of([&] { csm(set); }), ErrorCode::DegenerateData);
}

TEST(Csm, EmptyClass) {
  const auto set = build_point_set({{0}, {1}}, {1, 1});
  EXPECT_EQ(code_of([&] { csm(set); }), ErrorCode::EmptyClass);
}

TEST(Csm, TraceShortcutMatchesMaterialisedScatter) {
  testing::Rng rng(100);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 4 + rng() % 61;
    const std::size_t d = 1 + rng() % 16;
    const auto set = testing::random_set(rng, n, d, 0.7);
    const double want = testing::csm_by_scatter_matrices(set);
    EXPECT_NEAR(csm(set).value, want, 1e-9 * want);
  }
}

TEST(Csm, GrowsWithClassSeparation) {
  double prev = -1.0;
  for (double dist : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    testing::Rng rng(42);  // same noise at every separation
    const double v = csm(testing::two_gaussians(rng, 400, 8, dist)).value;
    EXPECT_GT(v, prev) << "distance " << dist;
    prev = v;
  }
}

TEST(Si, HandEvaluatedFourPoints) {
  const auto set = four_points();
  const auto v = si(set, all_nearest(set));
  EXPECT_EQ(v.value, 1.0);
  EXPECT_EQ(v.measure, Measure::Si);
}

TEST(Si, InterleavedLineIsZero) {
  const auto set = build_point_set({{0}, {1}, {2}, {3}}, {0, 1, 0, 1});
  EXPECT_EQ(si(set, all_nearest(set)).value, 0.0);
}

TEST(Si, LabelFlipLeavesValueUnchanged) {
  testing::Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const auto set = testing::random_set(rng, 60, 3, 0.8);
    const auto flipped = testing::flip_labels(set);
    EXPECT_EQ(si(set, all_nearest(set)).value, si(flipped, all_nearest(flipped)).value);
  }
}

TEST(Si, RejectsForeignNeighborResult) {
  const auto a = four_points();
  const auto b = build_point_set({{0}, {1}, {3}}, {0, 0, 1});
  EXPECT_EQ(code_of([&] { si(a, all_nearest(b)); }), ErrorCode::DimensionMismatch);
}

TEST(Hm, HandEvaluatedFourPoints) {
  const auto set = four_points();
  const auto v = hm(set, all_nearest(set));
  EXPECT_NEAR(v.value, 4.0, 1e-12);
  ASSERT_TRUE(v.per_point_mean.has_value());
  EXPECT_NEAR(*v.per_point_mean, 1.0, 1e-12);
  EXPECT_EQ(v.flags, MeasureFlag::None);
}

TEST(Hm, EqualHitAndMissDistancesCancel) {
  // Regular tetrahedron: every pairwise distance is the same.
  const auto set = build_point_set(
      {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}}, {0, 0, 1, 1});
  EXPECT_EQ(hm(set, all_nearest(set)).value, 0.0);
}

TEST(Hm, ScalesLinearly) {
  testing::Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const auto set = testing::random_set(rng, 70, 5, 0.5);
    const auto scaled = testing::transform(set, {}, {}, 3.0);
    const double a = hm(set, all_nearest(set)).value;
    const double b = hm(scaled, all_nearest(scaled)).value;
    EXPECT_NEAR(b, 3.0 * a, 1e-9 * std::abs(3.0 * a));
  }
}

TEST(Hm, SingletonClassPointsAreSkipped) {
  const auto set = build_point_set({{0}, {1}, {3}}, {0, 0, 1});
  const auto v = hm(set, all_nearest(set));
  EXPECT_TRUE(has_flag(v.flags, MeasureFlag::SingletonHitsSkipped));
  // point 0: 0.5*(3-1); point 1: 0.5*(2-1); point 2 skipped.
  EXPECT_DOUBLE_EQ(v.value, 1.5);
  EXPECT_DOUBLE_EQ(*v.per_point_mean, 0.75);
}

TEST(Measures, FlagNames) {
  EXPECT_EQ(flags_to_string(MeasureFlag::None), "");
  EXPECT_EQ(flags_to_string(MeasureFlag::WithinScatterZero |
                            MeasureFlag::SingletonHitsSkipped),
            "WithinScatterZero|SingletonHitsSkipped");
  EXPECT_EQ(parse_measure("hm"), Measure::Hm);
  EXPECT_FALSE(parse_measure("fisher").has_value());
}

TEST(Measures, ComputeMeasureDispatches) {
  const auto set = four_points();
  EXPECT_NEAR(compute_measure(set, Measure::Csm).value, 4.0, 1e-12);
  EXPECT_EQ(compute_measure(set, Measure::Si).value, 1.0);
  EXPECT_NEAR(compute_measure(set, Measure::Hm).value, 4.0, 1e-12);
}

}  // namespace
}  // namespace layersep
