#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "rootcause/graph.hpp"
#include "rootcause/io.hpp"
#include "rootcause/random.hpp"
#include "rootcause/simulate.hpp"

using namespace rootcause;

TEST(IsAcyclic, EmptyGraph) { EXPECT_TRUE(is_acyclic(BinaryGraph(3))); }

TEST(IsAcyclic, TwoCycle) {
  BinaryGraph g(2);
  g.set_edge(0, 1);
  g.set_edge(1, 0);
  EXPECT_FALSE(is_acyclic(g));
}

TEST(IsAcyclic, SimulatedTieredGraph) {
  TierSpec spec;
  spec.seed = 7;
  const GroundTruth gt = generate_ground_truth(spec);
  ASSERT_EQ(gt.size(), 34);
  EXPECT_TRUE(is_acyclic(gt.graph));
  const auto order = topological_order(gt.graph);
  std::vector<int> pos(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = static_cast<int>(k);
  for (const auto& [i, j] : gt.graph.edges()) EXPECT_LT(pos[i], pos[j]);
}

TEST(IsAcyclic, AgreesWithDfsOracle) {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 2 + static_cast<int>(rng.below(7));
    BoolMatrix m = BoolMatrix::Constant(d, d, false);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        if (i != j && rng.bernoulli(0.25)) m(i, j) = true;
      }
    }
    const BinaryGraph g(m);
    const bool acyclic = is_acyclic(g);
    EXPECT_EQ(acyclic, !oracle::has_cycle(m));
    bool sorted = true;
    try {
      topological_order(g);
    } catch (const CycleError&) {
      sorted = false;
    }
    EXPECT_EQ(acyclic, sorted);
  }
}

TEST(TopologicalOrder, CycleErrorNamesAnEdgeOnTheCycle) {
  BinaryGraph g(4);
  g.set_edge(0, 1);
  g.set_edge(1, 2);
  g.set_edge(2, 3);
  g.set_edge(3, 1);
  try {
    topological_order(g);
    FAIL() << "expected a cycle error";
  } catch (const CycleError& e) {
    const auto [from, to] = e.edge();
    EXPECT_TRUE(g.has_edge(from, to));
    EXPECT_NE(from, 0);
  }
}

TEST(Threshold, ZeroMatrixGivesEmptyGraph) {
  EXPECT_EQ(threshold(WeightedAdjacency::zeros(4), 0.3).edge_count(), 0);
}

TEST(Threshold, StrictMagnitudeComparison) {
  Matrix w = Matrix::Zero(2, 2);
  w(0, 1) = 0.31;
  w(1, 0) = -0.29;
  const BinaryGraph g = threshold(WeightedAdjacency(w, {"a", "b"}), 0.3);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_FALSE(g.has_edge(1, 0));
  EXPECT_EQ(g.edge_count(), 1);
  EXPECT_EQ(g.labels(), (Labels{"a", "b"}));
}

TEST(Threshold, MatchesEntrywiseScan) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix w(5, 5);
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) w(i, j) = rng.uniform(-1.0, 1.0);
    }
    const double omega = rng.uniform(0.05, 0.95);
    const BinaryGraph g = threshold(WeightedAdjacency(w), omega);
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        EXPECT_EQ(g.has_edge(i, j), i != j && std::abs(w(i, j)) >= omega);
      }
    }
  }
}

TEST(Threshold, RejectsNonPositiveOmega) {
  EXPECT_THROW(threshold(WeightedAdjacency::zeros(2), 0.0), ParameterError);
  EXPECT_THROW(threshold(WeightedAdjacency::zeros(2), -1.0), ParameterError);
}

TEST(WeightedAdjacency, RejectsNonSquareAndNonFinite) {
  EXPECT_THROW(WeightedAdjacency(Matrix::Zero(2, 3)), ParameterError);
  Matrix w = Matrix::Zero(2, 2);
  w(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(WeightedAdjacency{w}, NumericError);
  w(0, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(WeightedAdjacency{w}, NumericError);
}

TEST(BinaryGraph, RejectsSelfLoops) {
  BinaryGraph g(3);
  EXPECT_THROW(g.set_edge(1, 1), ParameterError);
  BoolMatrix m = BoolMatrix::Constant(2, 2, false);
  m(0, 0) = true;
  EXPECT_THROW(BinaryGraph{m}, ParameterError);
}

TEST(MixedGraph, DirectedAndUndirectedStayDisjoint) {
  MixedGraph g(3);
  g.add_directed(0, 1);
  EXPECT_THROW(g.add_undirected(1, 0), ParameterError);
  g.add_undirected(2, 1);
  EXPECT_TRUE(g.has_undirected(1, 2));
  EXPECT_THROW(g.add_directed(1, 2), ParameterError);
  EXPECT_THROW(g.add_undirected(0, 0), ParameterError);
}

TEST(AdjacencyCsv, BinaryRoundTripIsLossless) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const BinaryGraph g(oracle::random_dag(7, 0.4, rng));
    std::stringstream ss;
    io::write_adjacency(ss, g);
    EXPECT_EQ(io::read_binary_graph(ss), g);
  }
}

TEST(AdjacencyCsv, WeightedRoundTripIsLossless) {
  Rng rng(4);
  Matrix w(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) w(i, j) = rng.uniform(-3.0, 3.0) * std::pow(10.0, rng.uniform(-8, 8));
  }
  std::stringstream ss;
  io::write_adjacency(ss, WeightedAdjacency(w, {"a", "b,c", "d", "e"}));
  const WeightedAdjacency back = io::read_weighted_adjacency(ss);
  EXPECT_EQ(back.entries(), w);
  EXPECT_EQ(back.labels()[1], "b,c");
}

TEST(AdjacencyCsv, MixedGraphWritesBothDirectionsForUndirected) {
  MixedGraph g(3, {"x", "y", "z"});
  g.add_directed(0, 2);
  g.add_undirected(1, 2);
  std::stringstream ss;
  io::write_adjacency(ss, g);
  EXPECT_EQ(ss.str(), "x,y,z\n0,0,1\n0,0,1\n0,1,0\n");
  const MixedGraph back = io::read_mixed_graph(ss);
  EXPECT_EQ(back.directed(), g.directed());
  EXPECT_EQ(back.undirected(), g.undirected());
}

TEST(AdjacencyCsv, RejectsMalformedInput) {
  std::stringstream ragged("a,b\n0,1\n0\n");
  EXPECT_THROW(io::read_binary_graph(ragged), FormatError);
  std::stringstream short_rows("a,b\n0,1\n");
  EXPECT_THROW(io::read_binary_graph(short_rows), FormatError);
  std::stringstream not_bit("a,b\n0,2\n0,0\n");
  EXPECT_THROW(io::read_binary_graph(not_bit), FormatError);
}
