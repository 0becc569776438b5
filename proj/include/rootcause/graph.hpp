#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rootcause/errors.hpp"

namespace rootcause {

using Matrix = Eigen::MatrixXd;
using BoolMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;
using Labels = std::vector<std::string>;

inline Labels default_labels(int d) {
  Labels out;
  out.reserve(d);
  for (int i = 0; i < d; ++i) out.push_back("X" + std::to_string(i));
  return out;
}

namespace detail {

inline void check_labels(const Labels& labels, Eigen::Index d) {
  if (static_cast<Eigen::Index>(labels.size()) != d) {
    throw ParameterError("label count " + std::to_string(labels.size()) +
                         " does not match node count " + std::to_string(d));
  }
}

}  // namespace detail

/// Real-valued adjacency matrix. Entry (i, j) is the weight of edge i -> j:
/// cause in the row, effect in the column. Zero means no edge.
class WeightedAdjacency {
 public:
  WeightedAdjacency() = default;

  explicit WeightedAdjacency(Matrix entries, Labels labels = {})
      : entries_(std::move(entries)), labels_(std::move(labels)) {
    if (entries_.rows() != entries_.cols()) {
      throw ParameterError("adjacency matrix must be square");
    }
    if (!entries_.allFinite()) {
      throw NumericError("adjacency matrix contains non-finite entries");
    }
    if (labels_.empty()) labels_ = default_labels(size());
    detail::check_labels(labels_, entries_.rows());
  }

  static WeightedAdjacency zeros(int d, Labels labels = {}) {
    return WeightedAdjacency(Matrix::Zero(d, d), std::move(labels));
  }

  int size() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }
  const Labels& labels() const { return labels_; }
  double operator()(int i, int j) const { return entries_(i, j); }

 private:
  Matrix entries_;
  Labels labels_;
};

/// Directed graph as a boolean adjacency matrix, (i, j) true iff i -> j.
class BinaryGraph {
 public:
  BinaryGraph() = default;

  explicit BinaryGraph(int d, Labels labels = {})
      : entries_(BoolMatrix::Constant(d, d, false)), labels_(std::move(labels)) {
    if (d < 0) throw ParameterError("node count must be nonnegative");
    if (labels_.empty()) labels_ = default_labels(d);
    detail::check_labels(labels_, d);
  }

  explicit BinaryGraph(BoolMatrix entries, Labels labels = {})
      : entries_(std::move(entries)), labels_(std::move(labels)) {
    if (entries_.rows() != entries_.cols()) {
      throw ParameterError("adjacency matrix must be square");
    }
    if (labels_.empty()) labels_ = default_labels(size());
    detail::check_labels(labels_, entries_.rows());
    for (int i = 0; i < size(); ++i) {
      if (entries_(i, i)) {
        throw ParameterError("self-loop on node " + std::to_string(i));
      }
    }
  }

  int size() const { return static_cast<int>(entries_.rows()); }
  const BoolMatrix& entries() const { return entries_; }
  const Labels& labels() const { return labels_; }

  bool has_edge(int from, int to) const { return entries_(from, to); }

  void set_edge(int from, int to, bool present = true) {
    if (from == to && present) {
      throw ParameterError("self-loop on node " + std::to_string(from));
    }
    entries_(from, to) = present;
  }

  int edge_count() const { return static_cast<int>(entries_.count()); }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < size(); ++i) {
      for (int j = 0; j < size(); ++j) {
        if (entries_(i, j)) out.emplace_back(i, j);
      }
    }
    return out;
  }

  std::vector<int> parents(int node) const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i) {
      if (entries_(i, node)) out.push_back(i);
    }
    return out;
  }

  friend bool operator==(const BinaryGraph& a, const BinaryGraph& b) {
    return a.labels_ == b.labels_ && a.entries_.rows() == b.entries_.rows() &&
           (a.entries_ == b.entries_).all();
  }

 private:
  BoolMatrix entries_;
  Labels labels_;
};

/// Partially directed graph. Undirected pairs are stored with the smaller
/// index first. A pair is either directed one way or undirected, never both.
class MixedGraph {
 public:
  using Edge = std::pair<int, int>;

  MixedGraph() = default;

  explicit MixedGraph(int d, Labels labels = {}) : d_(d), labels_(std::move(labels)) {
    if (labels_.empty()) labels_ = default_labels(d);
    detail::check_labels(labels_, d);
  }

  int size() const { return d_; }
  const Labels& labels() const { return labels_; }
  const std::set<Edge>& directed() const { return directed_; }
  const std::set<Edge>& undirected() const { return undirected_; }

  void add_directed(int from, int to) {
    check_pair(from, to);
    if (adjacent(from, to)) {
      throw ParameterError("pair " + pair_name(from, to) + " already has an edge");
    }
    directed_.emplace(from, to);
  }

  void add_undirected(int a, int b) {
    check_pair(a, b);
    if (adjacent(a, b)) {
      throw ParameterError("pair " + pair_name(a, b) + " already has an edge");
    }
    undirected_.emplace(std::min(a, b), std::max(a, b));
  }

  bool adjacent(int a, int b) const {
    return directed_.count({a, b}) || directed_.count({b, a}) ||
           undirected_.count({std::min(a, b), std::max(a, b)});
  }

  bool has_directed(int from, int to) const { return directed_.count({from, to}) > 0; }
  bool has_undirected(int a, int b) const {
    return undirected_.count({std::min(a, b), std::max(a, b)}) > 0;
  }

 private:
  void check_pair(int a, int b) const {
    if (a == b) throw ParameterError("self-loop on node " + std::to_string(a));
    if (a < 0 || b < 0 || a >= d_ || b >= d_) {
      throw ParameterError("edge " + pair_name(a, b) + " out of range");
    }
  }

  static std::string pair_name(int a, int b) {
    return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
  }

  int d_ = 0;
  Labels labels_;
  std::set<Edge> directed_;
  std::set<Edge> undirected_;
};

/// Kahn peeling; among ready nodes the smallest index goes first, so the
/// order is deterministic. Throws CycleError naming an edge between two
/// nodes that could not be peeled.
inline std::vector<int> topological_order(const BinaryGraph& g) {
  const int d = g.size();
  std::vector<int> indegree(d, 0);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (g.has_edge(i, j)) ++indegree[j];
    }
  }
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int i = 0; i < d; ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  std::vector<int> order;
  order.reserve(d);
  while (!ready.empty()) {
    int node = ready.top();
    ready.pop();
    order.push_back(node);
    for (int j = 0; j < d; ++j) {
      if (g.has_edge(node, j) && --indegree[j] == 0) ready.push(j);
    }
  }
  if (static_cast<int>(order.size()) == d) return order;

  // Every unpeeled node has an unpeeled parent, so walking parents from any
  // of them must revisit a node. The edge closing that walk is on a cycle.
  std::vector<bool> peeled(d, false);
  for (int v : order) peeled[v] = true;
  int start = 0;
  while (peeled[start]) ++start;
  std::vector<int> seen_at(d, -1);
  int current = start;
  for (int step = 0;; ++step) {
    seen_at[current] = step;
    int parent = -1;
    for (int i = 0; i < d; ++i) {
      if (!peeled[i] && g.has_edge(i, current)) {
        parent = i;
        break;
      }
    }
    if (seen_at[parent] >= 0) throw CycleError(parent, current);
    current = parent;
  }
}

inline bool is_acyclic(const BinaryGraph& g) {
  try {
    topological_order(g);
    return true;
  } catch (const CycleError&) {
    return false;
  }
}

/// Binarizes learned weights: edge i -> j iff |w(i, j)| >= omega.
inline BinaryGraph threshold(const WeightedAdjacency& w, double omega) {
  if (!(omega > 0.0)) throw ParameterError("threshold omega must be positive");
  const int d = w.size();
  BoolMatrix entries = w.entries().array().abs() >= omega;
  // Solvers clamp the diagonal to zero; a caller-built matrix may not.
  for (int i = 0; i < d; ++i) entries(i, i) = false;
  return BinaryGraph(std::move(entries), w.labels());
}

/// Support of a real matrix (nonzero off-diagonal entries).
inline BinaryGraph support(const Matrix& a) {
  BoolMatrix entries = a.array() != 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) entries(i, i) = false;
  return BinaryGraph(std::move(entries), default_labels(static_cast<int>(a.rows())));
}

}  // namespace rootcause
