#include "layersep/pointset.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "layersep/error.hpp"

namespace layersep {

namespace {

// Neumaier-compensated running sum.
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

// Mean of the selected rows, computed as origin + mean(row - origin) with
// compensated column sums. Constant data yields the origin exactly.
template <typename Pred>
std::vector<double> shifted_mean(const RowMatrix& pts, std::size_t count,
                                 std::span<const double> origin, Pred select) {
  const std::size_t d = pts.cols();
  std::vector<CompensatedSum> acc(d);
  for (std::size_t i = 0; i < pts.rows(); ++i) {
    if (!select(i)) continue;
    const auto row = pts.row(i);
    for (std::size_t k = 0; k < d; ++k) acc[k].add(row[k] - origin[k]);
  }
  std::vector<double> mean(d);
  const double denom = static_cast<double>(count);
  for (std::size_t k = 0; k < d; ++k) {
    mean[k] = origin[k] + acc[k].value() / denom;
  }
  return mean;
}

}  // namespace

RowMatrix::RowMatrix(std::size_t rows, std::size_t cols,
                     std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix buffer holds " + std::to_string(data_.size()) +
                    " values, expected " + std::to_string(rows_ * cols_));
  }
}

LabeledPointSet::LabeledPointSet(RowMatrix points, std::vector<Label> labels)
    : points_(std::move(points)), labels_(std::move(labels)) {
  if (points_.rows() != labels_.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(points_.rows()) + " rows but " +
                    std::to_string(labels_.size()) + " labels");
  }
  if (points_.rows() < 2) {
    throw Error(ErrorCode::TooFewPoints,
                "need at least 2 points, got " + std::to_string(points_.rows()));
  }
  if (points_.cols() < 1) {
    throw Error(ErrorCode::DimensionMismatch, "dimension must be >= 1");
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] > 1) {
      throw Error(ErrorCode::InvalidLabel,
                  "row " + std::to_string(i) + " has label " +
                      std::to_string(static_cast<int>(labels_[i])));
    }
    ++counts_[labels_[i]];
  }
  const auto data = points_.data();
  for (std::size_t idx = 0; idx < data.size(); ++idx) {
    if (!std::isfinite(data[idx])) {
      throw Error(ErrorCode::NonFiniteValue,
                  "row " + std::to_string(idx / points_.cols()) + ", column " +
                      std::to_string(idx % points_.cols()));
    }
  }
}

LabeledPointSet build_point_set(RowMatrix points, std::vector<Label> labels) {
  return LabeledPointSet(std::move(points), std::move(labels));
}

LabeledPointSet build_point_set(const std::vector<std::vector<double>>& rows,
                                std::vector<Label> labels) {
  const std::size_t d = rows.empty() ? 0 : rows.front().size();
  std::vector<double> data;
  data.reserve(rows.size() * d);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d) {
      throw Error(ErrorCode::DimensionMismatch,
                  "row " + std::to_string(i) + " is ragged");
    }
    data.insert(data.end(), rows[i].begin(), rows[i].end());
  }
  return LabeledPointSet(RowMatrix(rows.size(), d, std::move(data)),
                         std::move(labels));
}

LabeledPointSet build_point_set(
    std::initializer_list<std::initializer_list<double>> rows,
    std::vector<Label> labels) {
  std::vector<std::vector<double>> copy;
  copy.reserve(rows.size());
  for (const auto& r : rows) copy.emplace_back(r);
  return build_point_set(copy, std::move(labels));
}

ClassStatistics class_statistics(const LabeledPointSet& set) {
  ClassStatistics stats;
  for (Label c = 0; c < 2; ++c) {
    stats.class_counts[c] = set.class_count(c);
    if (stats.class_counts[c] == 0) {
      throw Error(ErrorCode::EmptyClass,
                  "class " + std::to_string(static_cast<int>(c)) +
                      " has no members");
    }
  }
  const auto& pts = set.points();
  const auto labels = set.labels();
  for (Label c = 0; c < 2; ++c) {
    std::size_t first = 0;
    while (labels[first] != c) ++first;
    stats.class_means[c] =
        shifted_mean(pts, stats.class_counts[c], pts.row(first),
                     [&](std::size_t i) { return labels[i] == c; });
  }
  stats.global_mean = shifted_mean(pts, set.size(), pts.row(0),
                                   [](std::size_t) { return true; });
  return stats;
}

LayerStack::LayerStack(std::vector<LabeledPointSet> layers,
                       std::vector<int> layer_indices, std::string dataset_name)
    : layers_(std::move(layers)),
      indices_(std::move(layer_indices)),
      name_(std::move(dataset_name)) {
  validate();
}

LayerStack::LayerStack(std::vector<LabeledPointSet> layers,
                       std::string dataset_name)
    : layers_(std::move(layers)), name_(std::move(dataset_name)) {
  indices_.resize(layers_.size());
  for (std::size_t j = 0; j < indices_.size(); ++j) {
    indices_[j] = static_cast<int>(j + 1);
  }
  validate();
}

void LayerStack::validate() const {
  if (layers_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "a layer stack needs >= 1 layer");
  }
  if (indices_.size() != layers_.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(layers_.size()) + " layers but " +
                    std::to_string(indices_.size()) + " layer indices");
  }
  for (std::size_t j = 0; j < indices_.size(); ++j) {
    if (indices_[j] < 1 || (j > 0 && indices_[j] <= indices_[j - 1])) {
      throw Error(ErrorCode::InvalidArgument,
                  "layer indices must be positive and strictly ascending");
    }
  }
  const auto ref = layers_.front().labels();
  for (std::size_t j = 1; j < layers_.size(); ++j) {
    const auto labels = layers_[j].labels();
    if (labels.size() != ref.size() ||
        !std::equal(labels.begin(), labels.end(), ref.begin())) {
      throw Error(ErrorCode::LayerMismatch,
                  "labels differ from the first layer", indices_[j]);
    }
  }
}

LabeledPointSet select_rows(const LabeledPointSet& set,
                            std::span<const std::size_t> rows) {
  const std::size_t d = set.dim();
  RowMatrix pts(rows.size(), d);
  std::vector<Label> labels(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto src = set.point(rows[r]);
    std::copy(src.begin(), src.end(), pts.row(r).begin());
    labels[r] = set.label(rows[r]);
  }
  return LabeledPointSet(std::move(pts), std::move(labels));
}

LayerStack select_rows(const LayerStack& stack,
                       std::span<const std::size_t> rows) {
  std::vector<LabeledPointSet> layers;
  layers.reserve(stack.layer_count());
  for (const auto& layer : stack.layers()) layers.push_back(select_rows(layer, rows));
  return LayerStack(std::move(layers), stack.layer_indices(),
                    stack.dataset_name());
}

}  // namespace layersep
