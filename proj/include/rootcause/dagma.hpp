#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "rootcause/acyclicity.hpp"
#include "rootcause/dataset.hpp"
#include "rootcause/errors.hpp"
#include "rootcause/graph.hpp"
#include "rootcause/log.hpp"
#include "rootcause/loss.hpp"
#include "rootcause/notears.hpp"

namespace rootcause {

struct DagmaConfig {
  double s = 1.0;
  std::vector<double> mu_schedule = {1.0, 0.1, 0.01, 0.001};
  double lambda1 = 0.1;
  /// Iteration cap for the last central-path stage.
  int max_inner_iter = 60000;
  /// Iteration cap for every earlier stage.
  int warm_inner_iter = 30000;
  double lr = 3e-4;
  double beta1 = 0.99;
  double beta2 = 0.999;
  int checkpoint = 1000;
  /// Stage ends when the objective changes by less than this (relative)
  /// between two checkpoints.
  double tol = 1e-6;
  double omega = 0.3;
  ScoreType loss = ScoreType::kLeastSquares;
  /// Centre columns before the least-squares fit (a free intercept per node).
  bool center = false;
  /// Initial value of every entry above the diagonal, as in NotearsConfig.
  double tie_break = 1e-8;

  void validate() const {
    if (!(s > 0.0)) throw ParameterError("s must be positive");
    if (mu_schedule.empty()) throw ParameterError("mu schedule is empty");
    for (std::size_t i = 0; i < mu_schedule.size(); ++i) {
      if (!(mu_schedule[i] > 0.0)) throw ParameterError("mu values must be positive");
      if (i > 0 && !(mu_schedule[i] < mu_schedule[i - 1])) {
        throw ParameterError("mu schedule must be strictly decreasing");
      }
    }
    if (!(lambda1 >= 0.0)) throw ParameterError("lambda1 must be nonnegative");
    if (max_inner_iter < 1 || warm_inner_iter < 1) {
      throw ParameterError("inner iteration caps must be positive");
    }
    if (!(lr > 0.0)) throw ParameterError("lr must be positive");
    if (checkpoint < 1) throw ParameterError("checkpoint must be positive");
    if (!(omega > 0.0)) throw ParameterError("omega must be positive");
    if (!(tie_break >= 0.0)) throw ParameterError("tie_break must be nonnegative");
  }
};

namespace detail {

struct DagmaStage {
  int iterations = 0;
  int rejected = 0;
  bool reached_tolerance = false;
};

/// Adam on mu (score + lambda1 |A|_1) + h_logdet(A, s). A candidate that
/// leaves the M-matrix domain is discarded and the step is retried at half
/// the learning rate; an objective increase between checkpoints also halves
/// the learning rate.
template <typename Score>
DagmaStage dagma_stage(const Score& score, Matrix& a, double mu, const DagmaConfig& cfg,
                       int max_iter, int max_rejections) {
  const Eigen::Index d = a.rows();
  DagmaStage stage;
  Matrix first(d, d);
  Matrix second(d, d);
  first.setZero();
  second.setZero();
  Matrix loss_grad(d, d);
  double lr = cfg.lr;
  double previous = std::numeric_limits<double>::infinity();
  double beta1_power = 1.0;
  double beta2_power = 1.0;

  for (int iter = 1; iter <= max_iter; ++iter) {
    const double loss = score.evaluate(a, loss_grad);
    const Acyclicity h = h_logdet(a, cfg.s);
    Matrix grad = mu * (loss_grad + cfg.lambda1 * a.cwiseSign()) + h.gradient;
    grad.diagonal().setZero();

    if (iter % cfg.checkpoint == 0 || iter == max_iter) {
      const double objective = mu * (loss + cfg.lambda1 * a.cwiseAbs().sum()) + h.value;
      if (std::isfinite(previous) &&
          std::abs(previous - objective) <= cfg.tol * std::abs(previous)) {
        stage.iterations = iter;
        stage.reached_tolerance = true;
        return stage;
      }
      if (objective > previous) lr *= 0.5;
      previous = objective;
    }

    beta1_power *= cfg.beta1;
    beta2_power *= cfg.beta2;
    first = cfg.beta1 * first + (1.0 - cfg.beta1) * grad;
    second = cfg.beta2 * second + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
    const Matrix step = (first / (1.0 - beta1_power)).array() /
                        ((second / (1.0 - beta2_power)).array().sqrt() + 1e-8);
    for (;;) {
      Matrix candidate = a - lr * step;
      if (in_logdet_domain(candidate, cfg.s)) {
        a = std::move(candidate);
        break;
      }
      ++stage.rejected;
      lr *= 0.5;
      if (stage.rejected > max_rejections) {
        throw DomainError("DAGMA: iterate left the M-matrix domain " +
                          std::to_string(stage.rejected) + " times (mu = " + std::to_string(mu) +
                          ", lr = " + std::to_string(lr) + ")");
      }
    }
    stage.iterations = iter;
  }
  return stage;
}

}  // namespace detail

/// DAGMA: follows the central path over mu_schedule, each stage minimising
/// mu (score + lambda1 |A|_1) + h_logdet(A, s) from the previous stage's
/// solution, starting at A = 0. `converged` means the last stage met its
/// tolerance before the iteration cap.
inline ContinuousResult dagma(const BinaryDataset& data, const DagmaConfig& cfg = {}) {
  cfg.validate();
  if (data.rows() < 2) throw ParameterError("DAGMA needs at least two samples");
  const int d = data.cols();
  const auto score = make_score(data, cfg.loss, cfg.center);

  ContinuousResult result;
  Matrix a = Matrix::Zero(d, d);
  a.triangularView<Eigen::StrictlyUpper>().setConstant(cfg.tie_break);
  bool last_reached = false;
  for (std::size_t k = 0; k < cfg.mu_schedule.size(); ++k) {
    const bool last = k + 1 == cfg.mu_schedule.size();
    const int cap = last ? cfg.max_inner_iter : cfg.warm_inner_iter;
    const detail::DagmaStage stage = std::visit(
        [&](const auto& s) {
          return detail::dagma_stage(s, a, cfg.mu_schedule[k], cfg, cap, cfg.max_inner_iter);
        },
        score);
    result.inner_iterations += stage.iterations;
    result.evaluations += stage.iterations;
    result.rejected_steps += stage.rejected;
    result.outer_iterations = static_cast<int>(k) + 1;
    last_reached = stage.reached_tolerance;
    log::debug("dagma stage " + std::to_string(k) + ": " + std::to_string(stage.iterations) +
               " iterations, " + std::to_string(stage.rejected) + " rejected steps");
  }
  a.diagonal().setZero();
  result.h = h_logdet(a, cfg.s).value;
  result.converged = last_reached;
  if (!result.converged) log::info("dagma: last stage hit its iteration cap");
  result.weights = WeightedAdjacency(std::move(a), data.labels());
  return result;
}

}  // namespace rootcause
