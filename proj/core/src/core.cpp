#include "spectralk/core.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace spectralk {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows * cols) {
    throw Error(Errc::LengthMismatch, "matrix storage has " + std::to_string(values_.size()) +
                                          " values, expected " + std::to_string(rows * cols));
  }
}

EmbeddingSet::EmbeddingSet(Matrix data) : data_(std::move(data)) {
  if (data_.rows() < 2) {
    throw Error(Errc::TooFewPoints, "an embedding set needs at least 2 rows");
  }
  if (data_.cols() < 1) {
    throw Error(Errc::InvalidArgument, "embedding dimension must be at least 1");
  }
  for (std::size_t i = 0; i < data_.rows(); ++i) {
    bool all_zero = true;
    for (double x : data_.row(i)) {
      if (!std::isfinite(x)) {
        throw Error(Errc::NonFinite, "non-finite value in row " + std::to_string(i));
      }
      all_zero = all_zero && x == 0.0;
    }
    if (all_zero) {
      throw Error(Errc::ZeroVector, "row " + std::to_string(i) + " is all zeros");
    }
  }
}

EmbeddingSet EmbeddingSet::subset(std::span<const std::size_t> rows) const {
  Matrix out(rows.size(), dim());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] >= size()) {
      throw Error(Errc::OutOfRange, "subset row index " + std::to_string(rows[r]));
    }
    std::ranges::copy(row(rows[r]), out.row(r).begin());
  }
  return EmbeddingSet(std::move(out));
}

Partition::Partition(std::vector<int> ids) : ids_(std::move(ids)) {
  int max_id = -1;
  for (int id : ids_) {
    if (id < 0) throw Error(Errc::OutOfRange, "negative group id " + std::to_string(id));
    max_id = std::max(max_id, id);
  }
  build(static_cast<std::size_t>(max_id + 1));
}

Partition::Partition(std::vector<int> ids, std::size_t group_count) : ids_(std::move(ids)) {
  for (int id : ids_) {
    if (id < 0 || static_cast<std::size_t>(id) >= group_count) {
      throw Error(Errc::OutOfRange, "group id " + std::to_string(id) + " outside [0, " +
                                        std::to_string(group_count) + ")");
    }
  }
  build(group_count);
}

void Partition::build(std::size_t group_count) {
  if (ids_.empty()) throw Error(Errc::InvalidArgument, "a partition needs at least one item");
  sizes_.assign(group_count, 0);
  for (int id : ids_) ++sizes_[static_cast<std::size_t>(id)];
  for (std::size_t g = 0; g < group_count; ++g) {
    if (sizes_[g] == 0) throw Error(Errc::EmptyClass, "group " + std::to_string(g) + " is empty");
  }
}

namespace {

template <typename Key>
std::vector<int> first_appearance_ids(std::span<const Key> raw) {
  std::unordered_map<Key, int> index;
  std::vector<int> ids;
  ids.reserve(raw.size());
  for (const Key& key : raw) {
    auto [it, inserted] = index.try_emplace(key, static_cast<int>(index.size()));
    ids.push_back(it->second);
  }
  return ids;
}

}  // namespace

LabelVector LabelVector::from_raw(std::span<const std::int64_t> raw) {
  return LabelVector(first_appearance_ids(raw));
}

LabelVector LabelVector::from_strings(std::span<const std::string> raw) {
  return LabelVector(first_appearance_ids(raw));
}

Clustering Clustering::from_raw(std::span<const std::int64_t> raw) {
  return Clustering(first_appearance_ids(raw));
}

EmbeddingSet l2_normalize(const EmbeddingSet& e) {
  Matrix out = e.matrix();
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto row = out.row(i);
    double sq = 0.0;
    for (double x : row) sq += x * x;
    const double norm = std::sqrt(sq);
    if (norm < 1e-30) {
      throw Error(Errc::ZeroVector, "row " + std::to_string(i) + " has norm below 1e-30");
    }
    for (double& x : row) x /= norm;
  }
  return EmbeddingSet(std::move(out));
}

Dataset validate_dataset(Matrix data, std::optional<std::span<const std::int64_t>> labels,
                         std::string name) {
  EmbeddingSet embeddings(std::move(data));
  std::optional<LabelVector> dense;
  if (labels) {
    if (labels->size() != embeddings.size()) {
      throw Error(Errc::LengthMismatch, std::to_string(labels->size()) + " labels for " +
                                            std::to_string(embeddings.size()) + " rows");
    }
    dense = LabelVector::from_raw(*labels);
  }
  return Dataset{std::move(embeddings), std::move(dense), std::move(name)};
}

}  // namespace spectralk
