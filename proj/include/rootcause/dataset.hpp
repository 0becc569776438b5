#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rootcause/errors.hpp"
#include "rootcause/graph.hpp"

namespace rootcause {

using ByteMatrix = Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// M x N table of 0/1 values with unique column labels. Column-major, so a
/// column is contiguous.
class BinaryDataset {
 public:
  BinaryDataset() = default;

  BinaryDataset(ByteMatrix values, Labels labels)
      : values_(std::move(values)), labels_(std::move(labels)) {
    if (labels_.empty()) labels_ = default_labels(static_cast<int>(values_.cols()));
    detail::check_labels(labels_, values_.cols());
    std::unordered_set<std::string> seen;
    for (const auto& label : labels_) {
      if (!seen.insert(label).second) {
        throw ParameterError("duplicate column label '" + label + "'");
      }
    }
    if ((values_ > 1).any()) throw ParameterError("dataset values must be 0 or 1");
  }

  int rows() const { return static_cast<int>(values_.rows()); }
  int cols() const { return static_cast<int>(values_.cols()); }
  const Labels& labels() const { return labels_; }
  const ByteMatrix& values() const { return values_; }

  bool operator()(int row, int col) const { return values_(row, col) != 0; }

  int column_index(const std::string& label) const {
    for (int j = 0; j < cols(); ++j) {
      if (labels_[j] == label) return j;
    }
    throw ParameterError("no column labelled '" + label + "'");
  }

  /// Copy of column j as 0/1 bytes.
  std::vector<std::uint8_t> column(int j) const {
    std::vector<std::uint8_t> out(rows());
    for (int i = 0; i < rows(); ++i) out[i] = values_(i, j);
    return out;
  }

  /// Data as a real matrix for the continuous solvers.
  Matrix to_matrix() const { return values_.cast<double>().matrix(); }

  BinaryDataset head(int m) const {
    if (m < 0 || m > rows()) throw ParameterError("row prefix out of range");
    return BinaryDataset(values_.topRows(m), labels_);
  }

  BinaryDataset select_columns(const std::vector<int>& columns) const {
    ByteMatrix out(rows(), static_cast<Eigen::Index>(columns.size()));
    Labels labels;
    for (std::size_t k = 0; k < columns.size(); ++k) {
      out.col(static_cast<Eigen::Index>(k)) = values_.col(columns[k]);
      labels.push_back(labels_[columns[k]]);
    }
    return BinaryDataset(std::move(out), std::move(labels));
  }

 private:
  ByteMatrix values_;
  Labels labels_;
};

}  // namespace rootcause
