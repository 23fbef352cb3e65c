#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace layersep {

using Label = std::uint8_t;

/// Dense row-major matrix of doubles.
class RowMatrix {
 public:
  RowMatrix() = default;
  RowMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  RowMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * cols_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) noexcept {
    return data_[i * cols_ + j];
  }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  friend bool operator==(const RowMatrix&, const RowMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// n points in d dimensions with binary labels. Immutable once built;
/// construction enforces n >= 2, d >= 1, finite coordinates, labels in {0,1}.
class LabeledPointSet {
 public:
  LabeledPointSet(RowMatrix points, std::vector<Label> labels);

  std::size_t size() const noexcept { return points_.rows(); }
  std::size_t dim() const noexcept { return points_.cols(); }
  const RowMatrix& points() const noexcept { return points_; }
  std::span<const Label> labels() const noexcept { return labels_; }
  std::span<const double> point(std::size_t i) const noexcept {
    return points_.row(i);
  }
  Label label(std::size_t i) const noexcept { return labels_[i]; }

  /// Number of points carrying label 0 and label 1.
  std::size_t class_count(Label c) const noexcept { return counts_[c]; }

  friend bool operator==(const LabeledPointSet& a, const LabeledPointSet& b) {
    return a.points_ == b.points_ && a.labels_ == b.labels_;
  }

 private:
  RowMatrix points_;
  std::vector<Label> labels_;
  std::size_t counts_[2] = {0, 0};
};

LabeledPointSet build_point_set(RowMatrix points, std::vector<Label> labels);

/// Convenience for small literal sets in tests and tools.
LabeledPointSet build_point_set(
    const std::vector<std::vector<double>>& rows, std::vector<Label> labels);
LabeledPointSet build_point_set(
    std::initializer_list<std::initializer_list<double>> rows,
    std::vector<Label> labels);

struct ClassStatistics {
  std::vector<double> class_means[2];
  std::vector<double> global_mean;
  std::size_t class_counts[2] = {0, 0};
};

/// Per-class and global arithmetic means. Throws EmptyClass if a label is
/// missing.
ClassStatistics class_statistics(const LabeledPointSet& set);

/// Ordered per-layer point sets over one shared label vector.
class LayerStack {
 public:
  LayerStack(std::vector<LabeledPointSet> layers, std::vector<int> layer_indices,
             std::string dataset_name);

  /// Layers numbered 1..L.
  LayerStack(std::vector<LabeledPointSet> layers, std::string dataset_name);

  std::size_t layer_count() const noexcept { return layers_.size(); }
  std::size_t point_count() const noexcept { return layers_.front().size(); }
  const LabeledPointSet& layer(std::size_t pos) const { return layers_.at(pos); }
  const std::vector<LabeledPointSet>& layers() const noexcept { return layers_; }
  const std::vector<int>& layer_indices() const noexcept { return indices_; }
  const std::string& dataset_name() const noexcept { return name_; }
  std::span<const Label> labels() const noexcept {
    return layers_.front().labels();
  }

  friend bool operator==(const LayerStack&, const LayerStack&) = default;

 private:
  void validate() const;

  std::vector<LabeledPointSet> layers_;
  std::vector<int> indices_;
  std::string name_;
};

/// Keeps the given rows (in the given order) of every layer.
LabeledPointSet select_rows(const LabeledPointSet& set,
                            std::span<const std::size_t> rows);
LayerStack select_rows(const LayerStack& stack,
                       std::span<const std::size_t> rows);

}  // namespace layersep
