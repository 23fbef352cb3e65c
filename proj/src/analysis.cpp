#include "layersep/analysis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "layersep/error.hpp"

namespace layersep {

namespace {

// Unbiased integer in [0, bound) from a 64-bit engine.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= threshold) return x % bound;
  }
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

constexpr int kMaxSamplingRetries = 16;

}  // namespace

AccuracyCurve::AccuracyCurve(std::vector<AccuracyPoint> points,
                             AccuracyUnits units)
    : points_(std::move(points)), units_(units) {
  const double hi = units_ == AccuracyUnits::Percent ? 100.0 : 1.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (!(p.accuracy >= 0.0 && p.accuracy <= hi)) {
      throw Error(ErrorCode::InvalidArgument,
                  "accuracy for layer " + std::to_string(p.layer) +
                      " outside [0, " + (units_ == AccuracyUnits::Percent ? "100" : "1") + "]");
    }
    if (i > 0 && p.layer <= points_[i - 1].layer) {
      throw Error(ErrorCode::InvalidArgument,
                  "accuracy layer indices must be strictly ascending");
    }
  }
}

AccuracyCurve read_accuracy_csv(std::istream& in, AccuracyUnits units) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<AccuracyPoint> points;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (!header_seen) {
      std::string compact;
      for (char ch : line) {
        if (!std::isspace(static_cast<unsigned char>(ch))) compact += ch;
      }
      if (compact != "layer,accuracy") {
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(line_no) +
                        ": expected header 'layer,accuracy'");
      }
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": expected two columns");
    }
    const std::string layer_txt = trim(line.substr(0, comma));
    const std::string acc_txt = trim(line.substr(comma + 1));
    AccuracyPoint p;
    try {
      std::size_t used = 0;
      p.layer = std::stoi(layer_txt, &used);
      if (used != layer_txt.size()) throw std::invalid_argument("layer");
      p.accuracy = std::stod(acc_txt, &used);
      if (used != acc_txt.size()) throw std::invalid_argument("accuracy");
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": cannot parse '" + line + "'");
    }
    points.push_back(p);
  }
  if (!header_seen) {
    throw Error(ErrorCode::ParseError, "accuracy file is empty");
  }
  return AccuracyCurve(std::move(points), units);
}

SeparabilityReport sweep(const LayerStack& stack, Measure measure,
                         const NeighborOptions& options) {
  const Measure one[] = {measure};
  return std::move(sweep_all(stack, one, options).front());
}

std::vector<SeparabilityReport> sweep_all(const LayerStack& stack,
                                          std::span<const Measure> measures,
                                          const NeighborOptions& options) {
  std::vector<SeparabilityReport> reports(measures.size());
  for (std::size_t m = 0; m < measures.size(); ++m) {
    reports[m].dataset_name = stack.dataset_name();
    reports[m].measure = measures[m];
    reports[m].per_layer.reserve(stack.layer_count());
  }
  const bool needs_neighbors =
      std::any_of(measures.begin(), measures.end(),
                  [](Measure m) { return m != Measure::Csm; });
  for (std::size_t j = 0; j < stack.layer_count(); ++j) {
    const int layer = stack.layer_indices()[j];
    const auto& set = stack.layer(j);
    try {
      std::optional<NeighborResult> nb;
      if (needs_neighbors) nb = all_nearest(set, options);
      for (std::size_t m = 0; m < measures.size(); ++m) {
        MeasureValue v;
        switch (measures[m]) {
          case Measure::Csm: v = csm(set); break;
          case Measure::Si: v = si(set, *nb); break;
          case Measure::Hm: v = hm(set, *nb); break;
        }
        reports[m].per_layer.push_back({layer, v});
      }
    } catch (const Error& e) {
      throw e.with_layer(layer);
    }
  }
  return reports;
}

Recommendation recommend(const SeparabilityReport& report) {
  if (report.per_layer.empty()) {
    throw Error(ErrorCode::InvalidArgument, "cannot recommend from an empty report");
  }
  Recommendation rec;
  rec.chosen_layer = report.per_layer.front().layer;
  rec.winning_value = report.per_layer.front().value.value;
  for (const auto& lv : report.per_layer) {
    if (lv.value.value > rec.winning_value) {
      rec.winning_value = lv.value.value;
      rec.chosen_layer = lv.layer;
    }
  }
  for (const auto& lv : report.per_layer) {
    if (lv.value.value == rec.winning_value) rec.ties.push_back(lv.layer);
  }
  rec.chosen_layer = rec.ties.front();
  return rec;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::LayerMismatch, "series lengths differ");
  }
  if (x.size() < 2) {
    throw Error(ErrorCode::ConstantSeries, "need at least two points");
  }
  const std::size_t n = x.size();
  // Offsets from the first element make a constant series exactly zero.
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i] - x[0];
    my += y[i] - y[0];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = (x[i] - x[0]) - mx;
    const double dy = (y[i] - y[0]) - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorCode::ConstantSeries, "a series is constant");
  }
  const double r = sxy / (std::sqrt(sxx) * std::sqrt(syy));
  return std::clamp(r, -1.0, 1.0);
}

double correlate(const SeparabilityReport& report, const AccuracyCurve& acc) {
  const auto& pts = acc.points();
  if (report.per_layer.size() != pts.size()) {
    throw Error(ErrorCode::LayerMismatch,
                "report has " + std::to_string(report.per_layer.size()) +
                    " layers, accuracy curve has " + std::to_string(pts.size()));
  }
  std::vector<double> values(pts.size());
  std::vector<double> accuracies(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& lv = report.per_layer[i];
    if (lv.layer != pts[i].layer) {
      throw Error(ErrorCode::LayerMismatch,
                  "layer " + std::to_string(lv.layer) + " in report vs layer " +
                      std::to_string(pts[i].layer) + " in accuracy curve");
    }
    if (lv.value.is_sentinel()) {
      throw Error(ErrorCode::SentinelPresent,
                  "infinite value cannot enter a correlation", lv.layer);
    }
    values[i] = lv.value.value;
    accuracies[i] = pts[i].accuracy;
  }
  return pearson(values, accuracies);
}

std::vector<std::size_t> sample_rows(std::span<const Label> labels,
                                     double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidFraction, "fraction must lie in (0, 1]");
  }
  const std::size_t n = labels.size();
  const double raw = std::ceil(fraction * static_cast<double>(n) - 1e-9);
  const std::size_t k = std::clamp<std::size_t>(static_cast<std::size_t>(raw), 1, n);
  if (k < 2) {
    throw Error(ErrorCode::EmptyClassAfterSampling,
                "a sample of " + std::to_string(k) + " row cannot hold both classes");
  }
  std::vector<std::size_t> perm(n);
  for (int attempt = 0; attempt <= kMaxSamplingRetries; ++attempt) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(attempt));
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + uniform_below(rng, n - i);
      std::swap(perm[i], perm[j]);
    }
    std::vector<std::size_t> chosen(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(chosen.begin(), chosen.end());
    bool seen[2] = {false, false};
    for (auto r : chosen) seen[labels[r]] = true;
    if (seen[0] && seen[1]) return chosen;
  }
  throw Error(ErrorCode::EmptyClassAfterSampling,
              "no sample contained both classes after " +
                  std::to_string(kMaxSamplingRetries) + " re-draws");
}

LabeledPointSet subsample(const LabeledPointSet& set, double fraction,
                          std::uint64_t seed) {
  const auto rows = sample_rows(set.labels(), fraction, seed);
  return select_rows(set, rows);
}

LayerStack subsample(const LayerStack& stack, double fraction,
                     std::uint64_t seed) {
  const auto rows = sample_rows(stack.labels(), fraction, seed);
  return select_rows(stack, rows);
}

}  // namespace layersep
