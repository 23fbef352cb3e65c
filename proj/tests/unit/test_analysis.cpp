#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "layersep/analysis.hpp"
#include "support/errors.hpp"
#include "support/generators.hpp"

namespace layersep {
namespace {

using testing::code_of;

SeparabilityReport report_of(std::vector<double> values,
                             std::vector<int> layers = {}) {
  SeparabilityReport r;
  r.dataset_name = "t";
  for (std::size_t j = 0; j < values.size(); ++j) {
    MeasureValue v;
    v.value = values[j];
    r.per_layer.push_back({layers.empty() ? static_cast<int>(j + 1) : layers[j], v});
  }
  return r;
}

AccuracyCurve curve_of(std::vector<double> acc, AccuracyUnits units =
                                                    AccuracyUnits::Percent) {
  std::vector<AccuracyPoint> pts;
  for (std::size_t j = 0; j < acc.size(); ++j) {
    pts.push_back({static_cast<int>(j + 1), acc[j]});
  }
  return AccuracyCurve(std::move(pts), units);
}

TEST(Sweep, FindsTheSeparableLayer) {
  const auto stack = testing::synthetic_stack(1, 120, 16);
  const auto report = sweep(stack, Measure::Csm);
  ASSERT_EQ(report.per_layer.size(), 12u);
  EXPECT_EQ(report.dataset_name, "synthetic");
  for (std::size_t j = 0; j < 12; ++j) {
    EXPECT_EQ(report.per_layer[j].layer, static_cast<int>(j + 1));
    // Oracle value from the materialised scatter matrices.
    const double want = testing::csm_by_scatter_matrices(stack.layer(j));
    EXPECT_NEAR(report.per_layer[j].value.value, want, 1e-9 * want);
  }
  EXPECT_EQ(recommend(report).chosen_layer, 7);
}

TEST(Sweep, SingleLayerStack) {
  const auto set = build_point_set({{0, 0}, {0, 2}, {4, 0}, {4, 2}}, {0, 0, 1, 1});
  const LayerStack stack({set}, "one");
  const auto report = sweep(stack, Measure::Hm);
  ASSERT_EQ(report.per_layer.size(), 1u);
  EXPECT_NEAR(report.per_layer[0].value.value, 4.0, 1e-12);
}

TEST(Sweep, DegenerateLayerErrorNamesTheLayer) {
  const auto good = build_point_set({{0}, {1}, {5}, {6}}, {0, 0, 1, 1});
  const auto flat = build_point_set({{2}, {2}, {2}, {2}}, {0, 0, 1, 1});
  const LayerStack stack({good, good, flat}, {1, 2, 5}, "bad");
  try {
    sweep(stack, Measure::Csm);
    FAIL() << "expected DegenerateData";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateData);
    ASSERT_TRUE(e.layer().has_value());
    EXPECT_EQ(*e.layer(), 5);
    EXPECT_NE(std::string(e.what()).find("layer 5"), std::string::npos);
  }
}

TEST(Sweep, AllMeasuresShareOneNeighbourSearch) {
  const auto stack = testing::synthetic_stack(2, 60, 4, 3, 2);
  const Measure all[] = {Measure::Csm, Measure::Si, Measure::Hm};
  const auto reports = sweep_all(stack, all);
  ASSERT_EQ(reports.size(), 3u);
  for (std::size_t m = 0; m < 3; ++m) {
    const auto single = sweep(stack, all[m]);
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_EQ(reports[m].per_layer[j].value.value, single.per_layer[j].value.value);
    }
  }
}

TEST(Recommend, UniqueMaximum) {
  const auto rec = recommend(report_of({1.0, 3.5, 2.0}));
  EXPECT_EQ(rec.chosen_layer, 2);
  EXPECT_EQ(rec.winning_value, 3.5);
  EXPECT_EQ(rec.ties, (std::vector<int>{2}));
}

TEST(Recommend, TiesGoToSmallerLayer) {
  const auto rec = recommend(report_of({2.0, 2.0, 1.0}));
  EXPECT_EQ(rec.chosen_layer, 1);
  EXPECT_EQ(rec.ties, (std::vector<int>{1, 2}));
}

TEST(Recommend, SentinelBeatsFiniteValues) {
  const double inf = std::numeric_limits<double>::infinity();
  const auto rec = recommend(report_of({1e300, inf, 5.0, inf}, {3, 4, 8, 9}));
  EXPECT_EQ(rec.chosen_layer, 4);
  EXPECT_EQ(rec.ties, (std::vector<int>{4, 9}));
  EXPECT_TRUE(std::isinf(rec.winning_value));
}

TEST(Recommend, EmptyReportRejected) {
  EXPECT_EQ(code_of([] { recommend(SeparabilityReport{}); }),
            ErrorCode::InvalidArgument);
}

TEST(Correlate, PerfectAndDerivedValues) {
  EXPECT_NEAR(correlate(report_of({1, 2, 3, 4}), curve_of({10, 20, 30, 40})), 1.0, 1e-12);
  EXPECT_NEAR(correlate(report_of({1, 2, 3}), curve_of({3, 2, 1})), -1.0, 1e-12);
  // Hand evaluation: sxy = 8, sxx = syy = 10.
  EXPECT_NEAR(correlate(report_of({1, 2, 3, 4, 5}), curve_of({2, 1, 4, 3, 5})), 0.8,
              1e-12);
}

TEST(Correlate, Errors) {
  EXPECT_EQ(code_of([] { correlate(report_of({1, 2, 3}), curve_of({1, 2})); }),
            ErrorCode::LayerMismatch);
  EXPECT_EQ(code_of([] {
              correlate(report_of({1, 2}, {1, 3}), curve_of({1, 2}));
            }),
            ErrorCode::LayerMismatch);
  EXPECT_EQ(code_of([] { correlate(report_of({2, 2, 2}), curve_of({1, 2, 3})); }),
            ErrorCode::ConstantSeries);
  EXPECT_EQ(code_of([] { correlate(report_of({1, 2, 3}), curve_of({7, 7, 7})); }),
            ErrorCode::ConstantSeries);
  EXPECT_EQ(code_of([] { correlate(report_of({1}), curve_of({7})); }),
            ErrorCode::ConstantSeries);
  EXPECT_EQ(code_of([] {
              correlate(report_of({1, std::numeric_limits<double>::infinity()}),
                        curve_of({1, 2}));
            }),
            ErrorCode::SentinelPresent);
}

TEST(Correlate, SymmetricAndAffineInvariant) {
  testing::Rng rng(31);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> x(8), y(8);
    for (auto& v : x) v = g(rng);
    for (auto& v : y) v = g(rng);
    const double r = pearson(x, y);
    EXPECT_NEAR(pearson(y, x), r, 1e-12);
    const double a = scale(rng);
    const double b = 50.0 * g(rng);
    std::vector<double> xt(8);
    for (std::size_t i = 0; i < 8; ++i) xt[i] = a * x[i] + b;
    EXPECT_NEAR(pearson(xt, y), r, 1e-12);
  }
}

TEST(AccuracyCurve, ParsesCsv) {
  std::istringstream in("layer,accuracy\n1,0.5\n2, 0.75\n\n3,0.7\n");
  const auto curve = read_accuracy_csv(in, AccuracyUnits::Fraction);
  ASSERT_EQ(curve.points().size(), 3u);
  EXPECT_EQ(curve.points()[1].layer, 2);
  EXPECT_EQ(curve.points()[1].accuracy, 0.75);
}

TEST(AccuracyCurve, RejectsBadInput) {
  auto parse = [](const std::string& text, AccuracyUnits u) {
    std::istringstream in(text);
    return read_accuracy_csv(in, u);
  };
  EXPECT_EQ(code_of([&] { parse("1,0.5\n", AccuracyUnits::Fraction); }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([&] { parse("layer,accuracy\n1;0.5\n", AccuracyUnits::Fraction); }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([&] { parse("layer,accuracy\n1,85\n", AccuracyUnits::Fraction); }),
            ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { parse("layer,accuracy\n2,1\n1,2\n", AccuracyUnits::Percent); }),
            ErrorCode::InvalidArgument);
  EXPECT_NO_THROW(parse("layer,accuracy\n1,85\n", AccuracyUnits::Percent));
}

TEST(Subsample, FullFractionKeepsEveryRow) {
  testing::Rng rng(1);
  const auto set = testing::random_set(rng, 25, 3);
  EXPECT_EQ(subsample(set, 1.0, 9), set);
}

TEST(Subsample, DeterministicGivenSeed) {
  testing::Rng rng(2);
  const auto set = testing::random_set(rng, 101, 2);
  const auto a = subsample(set, 0.5, 7);
  const auto b = subsample(set, 0.5, 7);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 51u);
  EXPECT_NE(subsample(set, 0.5, 8), a);
}

TEST(Subsample, RowsComeFromInputWithTheirLabels) {
  testing::Rng rng(3);
  const auto set = testing::random_set(rng, 80, 4);
  const auto rows = sample_rows(set.labels(), 0.3, 11);
  EXPECT_EQ(rows.size(), 24u);
  EXPECT_TRUE(std::is_sorted(rows.begin(), rows.end()));
  EXPECT_EQ(std::adjacent_find(rows.begin(), rows.end()), rows.end());
  const auto sample = subsample(set, 0.3, 11);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    EXPECT_EQ(sample.label(r), set.label(rows[r]));
    EXPECT_TRUE(std::equal(sample.point(r).begin(), sample.point(r).end(),
                           set.point(rows[r]).begin()));
  }
}

TEST(Subsample, TenPercentOfBalancedHundredOverManySeeds) {
  std::vector<Label> labels(100);
  for (std::size_t i = 0; i < 100; ++i) labels[i] = static_cast<Label>(i % 2);
  std::map<std::size_t, int> first_row_hist;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto rows = sample_rows(labels, 0.1, seed);
    ASSERT_EQ(rows.size(), 10u);
    bool seen[2] = {false, false};
    for (auto r : rows) seen[labels[r]] = true;
    EXPECT_TRUE(seen[0] && seen[1]) << "seed " << seed;
    ++first_row_hist[rows.front()];
  }
  // Uniformity sanity: the smallest sampled row is spread out, not stuck.
  EXPECT_GT(first_row_hist.size(), 20u);
}

TEST(Subsample, Errors) {
  std::vector<Label> one_class(20, 0);
  one_class[19] = 1;
  EXPECT_EQ(code_of([&] { sample_rows(one_class, 0.0, 1); }), ErrorCode::InvalidFraction);
  EXPECT_EQ(code_of([&] { sample_rows(one_class, 1.5, 1); }), ErrorCode::InvalidFraction);
  EXPECT_EQ(code_of([&] { sample_rows(one_class, std::nan(""), 1); }),
            ErrorCode::InvalidFraction);
  EXPECT_EQ(code_of([&] { sample_rows(one_class, 0.05, 1); }),
            ErrorCode::EmptyClassAfterSampling);
  // 2 of 200 rows with a lone class-1 member: all 17 draws miss it.
  std::vector<Label> lone(200, 0);
  lone[0] = 1;
  EXPECT_EQ(code_of([&] { sample_rows(lone, 0.01, 1); }),
            ErrorCode::EmptyClassAfterSampling);
}

TEST(Subsample, StackSamplesTheSameRowsInEveryLayer) {
  const auto stack = testing::synthetic_stack(5, 40, 3, 3, 2);
  const auto sampled = subsample(stack, 0.5, 3);
  const auto rows = sample_rows(stack.labels(), 0.5, 3);
  ASSERT_EQ(sampled.point_count(), rows.size());
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_EQ(sampled.layer(j), select_rows(stack.layer(j), rows));
  }
}

}  // namespace
}  // namespace layersep
