#pragma once

#include <string>

#include "rootcause/errors.hpp"
#include "rootcause/graph.hpp"

namespace rootcause {

struct ConfusionCounts {
  long tp = 0;
  long tn = 0;
  long fp = 0;
  long fn = 0;

  long total() const { return tp + tn + fp + fn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// A ratio that falls back to 0 when its denominator is 0; `undefined`
/// records that the fallback was taken.
struct Score {
  double value = 0.0;
  bool undefined = false;
};

/// Elementwise comparison of two adjacency matrices. The diagonal is skipped
/// unless include_diagonal is set, so the counts sum to d(d-1) by default.
inline ConfusionCounts confusion(const BinaryGraph& learned, const BinaryGraph& truth,
                                 bool include_diagonal = false) {
  if (learned.size() != truth.size()) {
    throw ComparisonError("graphs have " + std::to_string(learned.size()) + " and " +
                          std::to_string(truth.size()) + " nodes");
  }
  if (learned.labels() != truth.labels()) {
    throw ComparisonError("graphs use different label orders; relabel before comparing");
  }
  ConfusionCounts c;
  const int d = truth.size();
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (i == j && !include_diagonal) continue;
      const bool l = learned.has_edge(i, j);
      const bool t = truth.has_edge(i, j);
      if (l && t) {
        ++c.tp;
      } else if (!l && !t) {
        ++c.tn;
      } else if (l) {
        ++c.fp;
      } else {
        ++c.fn;
      }
    }
  }
  return c;
}

inline long shd(const ConfusionCounts& c) { return c.fp + c.fn; }

namespace detail {
inline Score ratio(long num, long den) {
  if (den == 0) return {0.0, true};
  return {static_cast<double>(num) / static_cast<double>(den), false};
}
}  // namespace detail

inline Score precision(const ConfusionCounts& c) { return detail::ratio(c.tp, c.tp + c.fp); }
inline Score recall(const ConfusionCounts& c) { return detail::ratio(c.tp, c.tp + c.fn); }
inline Score f1(const ConfusionCounts& c) {
  return detail::ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn);
}

struct ResolvedGraph {
  BinaryGraph graph;
  int truth_resolved = 0;  // undirected edges oriented to agree with the truth
  int arbitrary = 0;       // undirected edges absent from the truth, emitted low -> high
};

/// Turns a partially directed graph into one predicted edge per adjacency so
/// it can be scored against a DAG.
inline ResolvedGraph mixed_to_binary(const MixedGraph& g, const BinaryGraph& truth) {
  if (g.size() != truth.size()) {
    throw ComparisonError("mixed graph and truth differ in node count");
  }
  ResolvedGraph out{BinaryGraph(g.size(), g.labels())};
  for (const auto& [from, to] : g.directed()) out.graph.set_edge(from, to);
  for (const auto& [a, b] : g.undirected()) {
    if (truth.has_edge(a, b)) {
      out.graph.set_edge(a, b);
      ++out.truth_resolved;
    } else if (truth.has_edge(b, a)) {
      out.graph.set_edge(b, a);
      ++out.truth_resolved;
    } else {
      out.graph.set_edge(a, b);
      ++out.arbitrary;
    }
  }
  return out;
}

}  // namespace rootcause
