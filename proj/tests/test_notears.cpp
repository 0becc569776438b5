#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rootcause/acyclicity.hpp"
#include "rootcause/expm.hpp"
#include "rootcause/lbfgsb.hpp"
#include "rootcause/loss.hpp"
#include "rootcause/metrics.hpp"
#include "rootcause/notears.hpp"
#include "rootcause/simulate.hpp"

using namespace rootcause;

namespace {

Matrix random_matrix(int d, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Matrix a(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) a(i, j) = rng.uniform(lo, hi);
  }
  return a;
}

BinaryDataset copy_data(int m, std::uint64_t seed) {
  Rng rng(seed);
  ByteMatrix v(m, 2);
  for (int r = 0; r < m; ++r) v(r, 0) = v(r, 1) = rng.bernoulli(0.5);
  return BinaryDataset(v, {"x", "y"});
}

}  // namespace

TEST(Expm, ZeroAndDiagonal) {
  EXPECT_TRUE(expm(Matrix::Zero(3, 3)).isApprox(Matrix::Identity(3, 3)));
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -2.0;
  const Matrix e = expm(d);
  EXPECT_NEAR(e(0, 0), std::exp(1.0), 1e-14);
  EXPECT_NEAR(e(1, 1), std::exp(-2.0), 1e-15);
  EXPECT_EQ(e(0, 1), 0.0);
}

TEST(Expm, MatchesTaylorOracleAcrossNorms) {
  Rng rng(9);
  for (double scale : {1e-3, 0.1, 0.5, 1.5, 4.0, 12.0}) {
    for (int trial = 0; trial < 5; ++trial) {
      const Matrix a = random_matrix(6, rng) * scale;
      const Matrix e = expm(a);
      const Matrix o = oracle::expm_taylor(a);
      EXPECT_LT((e - o).norm() / o.norm(), 1e-12) << "scale " << scale;
    }
  }
}

TEST(Expm, OverflowReportsNumericError) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 1) = a(1, 0) = 1e6;
  EXPECT_THROW(expm(a), NumericError);
}

TEST(HTrexp, ZeroMatrix) {
  const Acyclicity h = h_trexp(Matrix::Zero(4, 4));
  EXPECT_EQ(h.value, 0.0);
  EXPECT_EQ(h.gradient, Matrix::Zero(4, 4));
}

TEST(HTrexp, TwoCycleClosedForm) {
  Matrix a(2, 2);
  a << 0, 1, 1, 0;
  const double expected = 2 * std::cosh(1.0) - 2;
  EXPECT_NEAR(h_trexp(a).value, expected, 1e-14);
  EXPECT_NEAR(h_trexp(a).value, 1.0861, 1e-4);
  EXPECT_NEAR(oracle::expm_taylor(a.cwiseProduct(a)).trace() - 2, expected, 1e-14);
}

TEST(HTrexp, UpperTriangularIsZero) {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix a = random_matrix(8, rng, -2.0, 2.0).triangularView<Eigen::StrictlyUpper>();
    EXPECT_LE(h_trexp(a).value, 1e-9);
  }
}

TEST(HTrexp, PositiveExactlyOnCycles) {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const BoolMatrix dag = oracle::random_dag(10, 0.3, rng);
    Matrix a = Matrix::Zero(10, 10);
    for (int i = 0; i < 10; ++i) {
      for (int j = 0; j < 10; ++j) {
        if (dag(i, j)) a(i, j) = rng.uniform(0.5, 2.0) * (rng.bernoulli(0.5) ? 1 : -1);
      }
    }
    EXPECT_LE(std::abs(h_trexp(a).value), 1e-9);
    // Plant a two-cycle by adding the reverse of an existing edge.
    int from = -1, to = -1;
    for (int i = 0; i < 10 && from < 0; ++i) {
      for (int j = 0; j < 10; ++j) {
        if (dag(i, j)) {
          from = i;
          to = j;
          break;
        }
      }
    }
    if (from < 0) continue;
    Matrix c = a;
    c(to, from) = 0.7;
    EXPECT_GT(h_trexp(c).value, 1e-6);
    EXPECT_FALSE(is_acyclic(threshold(WeightedAdjacency(c), 1e-12)));
  }
}

TEST(HTrexp, GradientMatchesFiniteDifferences) {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix a = random_matrix(5, rng);
    a.diagonal().setZero();
    const Matrix fd = oracle::finite_difference([](const Matrix& x) { return h_trexp(x).value; }, a);
    EXPECT_LT(oracle::max_rel_error(h_trexp(a).gradient, fd), 1e-5);
  }
}

TEST(LossLs, ZeroAdjacency) {
  Rng rng(4);
  Matrix x(50, 3);
  for (int r = 0; r < 50; ++r) {
    for (int c = 0; c < 3; ++c) x(r, c) = rng.bernoulli(0.4);
  }
  const LossValue l = loss_ls(Matrix::Zero(3, 3), x);
  EXPECT_NEAR(l.value, x.squaredNorm() / 100.0, 1e-14);
  EXPECT_TRUE(l.gradient.isApprox(-(x.transpose() * x) / 50.0));
}

TEST(LossLs, ExactLinearFitHasZeroLoss) {
  // Column 1 copies column 0; A* reproduces both (column 0 through the
  // diagonal, which loss_ls itself does not forbid).
  Matrix x(4, 2);
  x << 1, 1, 0, 0, 1, 1, 0, 0;
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 1.0;
  a(0, 1) = 1.0;
  const LossValue l = loss_ls(a, x);
  EXPECT_EQ(l.value, 0.0);
  EXPECT_EQ(l.gradient, Matrix::Zero(2, 2));
}

TEST(LossLs, GradientMatchesFiniteDifferences) {
  Rng rng(5);
  Matrix x(200, 5);
  for (int r = 0; r < 200; ++r) {
    for (int c = 0; c < 5; ++c) x(r, c) = rng.bernoulli(0.5);
  }
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = random_matrix(5, rng);
    const Matrix fd = oracle::finite_difference([&](const Matrix& m) { return loss_ls(m, x).value; }, a);
    EXPECT_LT(oracle::max_rel_error(loss_ls(a, x).gradient, fd), 1e-5);
  }
}

TEST(LossLs, GramFormAgreesWithDirectForm) {
  Rng rng(6);
  Matrix x(300, 4);
  for (int r = 0; r < 300; ++r) {
    for (int c = 0; c < 4; ++c) x(r, c) = rng.bernoulli(0.3);
  }
  const LeastSquaresLoss gram(x);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = random_matrix(4, rng);
    Matrix g;
    const double v = gram.evaluate(a, g);
    const LossValue direct = loss_ls(a, x);
    EXPECT_NEAR(v, direct.value, 1e-12 * std::max(1.0, direct.value));
    EXPECT_LT((g - direct.gradient).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(LogisticLoss, GradientMatchesFiniteDifferences) {
  Rng rng(7);
  Matrix x(100, 3);
  for (int r = 0; r < 100; ++r) {
    for (int c = 0; c < 3; ++c) x(r, c) = rng.bernoulli(0.5);
  }
  const LogisticLoss loss(x);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix a = random_matrix(3, rng);
    Matrix g;
    loss.evaluate(a, g);
    const Matrix fd = oracle::finite_difference(
        [&](const Matrix& m) {
          Matrix unused;
          return loss.evaluate(m, unused);
        },
        a);
    EXPECT_LT(oracle::max_rel_error(g, fd), 1e-5);
  }
}

TEST(BoundedLbfgs, ActiveBoundsOnAQuadratic) {
  // min sum_i (x_i - c_i)^2 over [0, 1]^4.
  Eigen::VectorXd c(4);
  c << -1.0, 0.25, 0.75, 3.0;
  auto fg = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    g = 2.0 * (x - c);
    return (x - c).squaredNorm();
  };
  const auto r = minimize_bounded(fg, Eigen::VectorXd::Constant(4, 0.5), Eigen::VectorXd::Zero(4),
                                  Eigen::VectorXd::Ones(4));
  EXPECT_TRUE(r.converged) << r.stop_reason;
  EXPECT_NEAR(r.x(0), 0.0, 1e-8);
  EXPECT_NEAR(r.x(1), 0.25, 1e-6);
  EXPECT_NEAR(r.x(2), 0.75, 1e-6);
  EXPECT_NEAR(r.x(3), 1.0, 1e-8);
}

TEST(BoundedLbfgs, RosenbrockUnbounded) {
  auto fg = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    const double a = 1 - x(0), b = x(1) - x(0) * x(0);
    g.resize(2);
    g(0) = -2 * a - 400 * x(0) * b;
    g(1) = 200 * b;
    return a * a + 100 * b * b;
  };
  const double inf = std::numeric_limits<double>::infinity();
  BoundedLbfgsOptions opt;
  opt.pg_tolerance = 1e-8;
  opt.f_tolerance = 0.0;
  const auto r = minimize_bounded(fg, Eigen::Vector2d(-1.2, 1.0), Eigen::VectorXd::Constant(2, -inf),
                                  Eigen::VectorXd::Constant(2, inf), opt);
  EXPECT_NEAR(r.x(0), 1.0, 1e-5);
  EXPECT_NEAR(r.x(1), 1.0, 1e-5);
}

TEST(Notears, CopiedPairGivesOneEdge) {
  const ContinuousResult r = notears(copy_data(5000, 1));
  EXPECT_EQ(threshold(r.weights, 0.3).edge_count(), 1);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.h, 1e-8);
}

TEST(Notears, StrongFiveNodeDag) {
  TierSpec spec;
  spec.tiers = {{"a", 2}, {"b", 2}, {"c", 1}};
  spec.edge_probability = 0.6;
  spec.weight_low = 3.0;
  spec.weight_high = 4.0;
  spec.seed = 5;
  const GroundTruth gt = generate_ground_truth(spec);
  ASSERT_GT(gt.graph.edge_count(), 0);
  const ContinuousResult r = notears(sample_dataset(gt, 10000, 5));
  const BinaryGraph learned = threshold(r.weights, 0.3);
  EXPECT_GE(f1(confusion(learned, gt.graph)).value, 0.6);
  EXPECT_TRUE(is_acyclic(learned));
}

TEST(Notears, IndependentColumnsStaySparse) {
  int spurious = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    ByteMatrix v(10000, 5);
    for (int r = 0; r < v.rows(); ++r) {
      for (int c = 0; c < v.cols(); ++c) v(r, c) = rng.bernoulli(0.5);
    }
    const ContinuousResult res = notears(BinaryDataset(v, {}));
    spurious += threshold(res.weights, 0.3).edge_count();
  }
  EXPECT_LE(spurious / 10.0, 1.0);
}

TEST(Notears, DeterministicAndDiagonalFree) {
  TierSpec spec;
  spec.tiers = {{"a", 3}, {"b", 2}, {"c", 1}};
  spec.seed = 2;
  const BinaryDataset data = sample_dataset(generate_ground_truth(spec), 2000, 2);
  const ContinuousResult a = notears(data);
  const ContinuousResult b = notears(data);
  EXPECT_EQ(a.weights.entries(), b.weights.entries());
  EXPECT_TRUE((a.weights.entries().diagonal().array() == 0.0).all());
  if (a.converged) EXPECT_LE(a.h, NotearsConfig{}.h_tol);
}

TEST(Notears, ConfigValidation) {
  NotearsConfig cfg;
  cfg.h_tol = 0.0;
  EXPECT_THROW(cfg.validate(), ParameterError);
  cfg = {};
  cfg.rho_max = 1.0;
  EXPECT_THROW(cfg.validate(), ParameterError);
  EXPECT_THROW(notears(copy_data(1, 1)), ParameterError);
  EXPECT_EQ(parse_score_type("logistic"), ScoreType::kLogistic);
  EXPECT_THROW(parse_score_type("huber"), ParameterError);
}
