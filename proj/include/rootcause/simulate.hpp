#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rootcause/dataset.hpp"
#include "rootcause/errors.hpp"
#include "rootcause/graph.hpp"
#include "rootcause/random.hpp"

namespace rootcause {

struct Tier {
  std::string name;
  int count = 1;
};

/// Layered causal structure: edges only run from a tier to a later tier.
struct TierSpec {
  std::vector<Tier> tiers = {{"FaE", 25}, {"ErPz", 8}, {"Fe", 1}};
  double edge_probability = 0.3;
  bool allow_skip_edges = false;
  double weight_low = 0.5;
  double weight_high = 2.0;
  std::uint64_t seed = 0;

  int node_count() const {
    int d = 0;
    for (const auto& t : tiers) d += t.count;
    return d;
  }

  void validate() const {
    if (tiers.empty()) throw ParameterError("tier list is empty");
    for (const auto& t : tiers) {
      if (t.count < 1) throw ParameterError("tier '" + t.name + "' needs at least one node");
    }
    if (!(edge_probability >= 0.0 && edge_probability <= 1.0)) {
      throw ParameterError("edge probability must lie in [0, 1]");
    }
    if (!(weight_low > 0.0 && weight_low <= weight_high)) {
      throw ParameterError("weight range must satisfy 0 < low <= high");
    }
  }
};

/// Generative model: a tiered DAG with a logistic-Bernoulli structural
/// equation per node.
struct GroundTruth {
  BinaryGraph graph;
  WeightedAdjacency weights;  // weight of i -> j at (i, j), zero off-support
  Eigen::VectorXd biases;
  std::vector<int> tier_of;
  std::vector<std::string> tier_names;

  int size() const { return graph.size(); }
  const Labels& labels() const { return graph.labels(); }
};

inline Labels tier_labels(const std::vector<Tier>& tiers) {
  Labels labels;
  for (const auto& t : tiers) {
    if (t.count == 1) {
      labels.push_back(t.name);
      continue;
    }
    for (int k = 1; k <= t.count; ++k) labels.push_back(t.name + "_" + std::to_string(k));
  }
  return labels;
}

inline GroundTruth generate_ground_truth(const TierSpec& spec) {
  spec.validate();
  const int d = spec.node_count();

  GroundTruth gt;
  gt.tier_of.reserve(d);
  for (int t = 0; t < static_cast<int>(spec.tiers.size()); ++t) {
    gt.tier_names.push_back(spec.tiers[t].name);
    for (int k = 0; k < spec.tiers[t].count; ++k) gt.tier_of.push_back(t);
  }
  Labels labels = tier_labels(spec.tiers);

  Rng rng(derive_seed(spec.seed, 0));
  BinaryGraph graph(d, labels);
  Matrix w = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const int gap = gt.tier_of[j] - gt.tier_of[i];
      if (gap <= 0 || (!spec.allow_skip_edges && gap != 1)) continue;
      if (!rng.bernoulli(spec.edge_probability)) continue;
      const double magnitude = rng.uniform(spec.weight_low, spec.weight_high);
      graph.set_edge(i, j);
      w(i, j) = rng.bernoulli(0.5) ? magnitude : -magnitude;
    }
  }
  gt.biases.resize(d);
  for (int i = 0; i < d; ++i) gt.biases(i) = rng.uniform(-1.0, 1.0);

  gt.graph = std::move(graph);
  gt.weights = WeightedAdjacency(std::move(w), labels);
  return gt;
}

inline double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

/// Draws m rows. Row r uses its own stream keyed by (seed, r), so the first
/// k rows of an m-row sample equal a k-row sample with the same seed.
inline BinaryDataset sample_dataset(const GroundTruth& gt, int m, std::uint64_t seed) {
  if (m < 1) throw ParameterError("sample count must be at least 1");
  const int d = gt.size();
  if (gt.biases.size() != d || gt.weights.size() != d) {
    throw ParameterError("ground truth parts disagree on node count");
  }
  const std::vector<int> order = topological_order(gt.graph);
  std::vector<std::vector<std::pair<int, double>>> parents(d);
  for (int v = 0; v < d; ++v) {
    for (int u : gt.graph.parents(v)) parents[v].emplace_back(u, gt.weights(u, v));
  }

  ByteMatrix values(m, d);
  std::vector<std::uint8_t> x(d);
  for (int r = 0; r < m; ++r) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r) + 1));
    for (int v : order) {
      double logit = gt.biases(v);
      for (const auto& [u, weight] : parents[v]) logit += weight * x[u];
      x[v] = rng.uniform() < sigmoid(logit) ? 1 : 0;
    }
    for (int v = 0; v < d; ++v) values(r, v) = x[v];
  }
  return BinaryDataset(std::move(values), gt.labels());
}

}  // namespace rootcause
