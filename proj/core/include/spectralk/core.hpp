#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spectralk/error.hpp"

namespace spectralk {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return values_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {values_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * cols_, cols_};
  }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// n x d matrix of embedding vectors. Construction enforces n >= 2, d >= 1,
/// finite entries and no all-zero rows; the object is immutable afterwards.
class EmbeddingSet {
 public:
  explicit EmbeddingSet(Matrix data);

  std::size_t size() const noexcept { return data_.rows(); }
  std::size_t dim() const noexcept { return data_.cols(); }
  std::span<const double> row(std::size_t i) const noexcept { return data_.row(i); }
  const Matrix& matrix() const noexcept { return data_; }

  /// Rows in the given order (indices may repeat). Requires at least 2 rows.
  EmbeddingSet subset(std::span<const std::size_t> rows) const;

 private:
  Matrix data_;
};

/// Assignment of n items to groups 0..G-1, every group non-empty.
class Partition {
 public:
  /// Takes dense ids. Throws OutOfRange for negative ids and EmptyClass when
  /// some id below the maximum is unused.
  explicit Partition(std::vector<int> ids);
  /// Same, but with an explicit group count; ids must lie in [0, group_count).
  Partition(std::vector<int> ids, std::size_t group_count);

  std::size_t size() const noexcept { return ids_.size(); }
  std::size_t group_count() const noexcept { return sizes_.size(); }
  int operator[](std::size_t i) const noexcept { return ids_[i]; }
  std::span<const int> ids() const noexcept { return ids_; }
  std::span<const std::size_t> sizes() const noexcept { return sizes_; }

  friend bool operator==(const Partition&, const Partition&) = default;

 protected:
  Partition() = default;

 private:
  void build(std::size_t group_count);

  std::vector<int> ids_;
  std::vector<std::size_t> sizes_;
};

/// Gold-standard class ids aligned with an EmbeddingSet.
class LabelVector : public Partition {
 public:
  using Partition::Partition;

  /// Dense re-indexing of arbitrary ids in order of first appearance.
  static LabelVector from_raw(std::span<const std::int64_t> raw);
  static LabelVector from_strings(std::span<const std::string> raw);
};

/// Cluster assignment produced by an algorithm (or read from a file).
class Clustering : public Partition {
 public:
  using Partition::Partition;

  static Clustering from_raw(std::span<const std::int64_t> raw);
};

struct Dataset {
  EmbeddingSet embeddings;
  std::optional<LabelVector> labels;
  std::string name;
};

/// Scales every row to unit Euclidean norm. Throws ZeroVector if a row norm is below 1e-30.
EmbeddingSet l2_normalize(const EmbeddingSet& e);

/// Builds a Dataset from a raw matrix and optional raw labels (re-indexed densely).
/// Errors: NonFinite, ZeroVector, LengthMismatch, InvalidArgument.
Dataset validate_dataset(Matrix data, std::optional<std::span<const std::int64_t>> labels,
                         std::string name = {});

}  // namespace spectralk
