#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "rootcause/acyclicity.hpp"
#include "rootcause/dataset.hpp"
#include "rootcause/errors.hpp"
#include "rootcause/graph.hpp"
#include "rootcause/lbfgsb.hpp"
#include "rootcause/log.hpp"
#include "rootcause/loss.hpp"

namespace rootcause {

enum class ScoreType { kLeastSquares, kLogistic };

inline ScoreType parse_score_type(const std::string& name) {
  if (name == "l2" || name == "ls" || name == "least-squares") return ScoreType::kLeastSquares;
  if (name == "logistic") return ScoreType::kLogistic;
  throw ParameterError("unknown loss '" + name + "' (expected l2 or logistic)");
}

inline const char* to_string(ScoreType t) {
  return t == ScoreType::kLogistic ? "logistic" : "l2";
}

/// Builds the score shared by the continuous solvers. Least squares works on
/// column-centred data when `center` is set; the logistic score always sees
/// the raw 0/1 values.
inline std::variant<LeastSquaresLoss, LogisticLoss> make_score(const BinaryDataset& data,
                                                               ScoreType type, bool center) {
  Matrix x = data.to_matrix();
  if (type == ScoreType::kLogistic) return LogisticLoss(std::move(x));
  if (center) x.rowwise() -= x.colwise().mean();
  return LeastSquaresLoss(x);
}

struct NotearsConfig {
  double lambda1 = 0.1;
  int max_outer_iter = 100;
  double h_tol = 1e-8;
  double rho_max = 1e16;
  double omega = 0.3;
  ScoreType loss = ScoreType::kLeastSquares;
  /// Centre columns before the least-squares fit (a free intercept per node).
  bool center = false;
  /// Initial value of every entry above the diagonal. Exactly tied pairs
  /// (duplicate columns) otherwise stay on the symmetric saddle and vanish.
  double tie_break = 1e-8;
  BoundedLbfgsOptions inner;

  void validate() const {
    if (!(lambda1 >= 0.0)) throw ParameterError("lambda1 must be nonnegative");
    if (max_outer_iter < 1) throw ParameterError("max_outer_iter must be positive");
    if (!(h_tol > 0.0)) throw ParameterError("h_tol must be positive");
    if (!(rho_max > 1.0)) throw ParameterError("rho_max must exceed 1");
    if (!(omega > 0.0)) throw ParameterError("omega must be positive");
    if (!(tie_break >= 0.0)) throw ParameterError("tie_break must be nonnegative");
  }
};

struct ContinuousResult {
  WeightedAdjacency weights;
  double h = 0.0;
  int outer_iterations = 0;
  int inner_iterations = 0;
  int evaluations = 0;
  bool converged = false;
  double rho = 0.0;  // NOTEARS: final penalty; DAGMA: unused
  int rejected_steps = 0;  // DAGMA: iterates rejected by the domain check
};

/// NOTEARS: minimise score(A) + lambda1 |A|_1 subject to h_trexp(A) = 0 with
/// an augmented Lagrangian. Each subproblem splits A = P - N, P, N >= 0 and
/// is solved by bounded L-BFGS with the diagonal pinned to zero. Starts from
/// A = 0. Returns the weighted matrix; thresholding is left to the caller.
inline ContinuousResult notears(const BinaryDataset& data, const NotearsConfig& cfg = {}) {
  cfg.validate();
  if (data.rows() < 2) throw ParameterError("NOTEARS needs at least two samples");
  const int d = data.cols();
  const Eigen::Index dd = static_cast<Eigen::Index>(d) * d;
  const auto score = make_score(data, cfg.loss, cfg.center);

  ContinuousResult result;
  double rho = 1.0;
  double alpha = 0.0;
  double h = std::numeric_limits<double>::infinity();

  Eigen::VectorXd lower = Eigen::VectorXd::Zero(2 * dd);
  Eigen::VectorXd upper =
      Eigen::VectorXd::Constant(2 * dd, std::numeric_limits<double>::infinity());
  for (int i = 0; i < d; ++i) {
    upper(i + static_cast<Eigen::Index>(i) * d) = 0.0;
    upper(dd + i + static_cast<Eigen::Index>(i) * d) = 0.0;
  }

  auto to_matrix = [&](const Eigen::VectorXd& pn) -> Matrix {
    return Eigen::Map<const Matrix>(pn.data(), d, d) -
           Eigen::Map<const Matrix>(pn.data() + dd, d, d);
  };

  Eigen::VectorXd pn = Eigen::VectorXd::Zero(2 * dd);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < j; ++i) pn(i + static_cast<Eigen::Index>(j) * d) = cfg.tie_break;
  }
  Matrix loss_grad(d, d);
  for (int outer = 0; outer < cfg.max_outer_iter; ++outer) {
    Eigen::VectorXd pn_new = pn;
    double h_new = h;
    while (rho < cfg.rho_max) {
      auto objective = [&](const Eigen::VectorXd& v, Eigen::VectorXd& grad) -> double {
        const Matrix a = to_matrix(v);
        const double loss =
            std::visit([&](const auto& s) { return s.evaluate(a, loss_grad); }, score);
        Acyclicity hv;
        try {
          hv = h_trexp(a);
        } catch (const NumericError&) {
          // Trial point far outside any sensible region; the line search backtracks.
          return std::numeric_limits<double>::infinity();
        }
        const Matrix smooth = loss_grad + (rho * hv.value + alpha) * hv.gradient;
        Eigen::Map<Matrix>(grad.data(), d, d) = smooth.array() + cfg.lambda1;
        Eigen::Map<Matrix>(grad.data() + dd, d, d) = -smooth.array() + cfg.lambda1;
        return loss + 0.5 * rho * hv.value * hv.value + alpha * hv.value +
               cfg.lambda1 * v.sum();
      };
      const BoundedLbfgsResult inner = minimize_bounded(objective, pn, lower, upper, cfg.inner);
      result.inner_iterations += inner.iterations;
      result.evaluations += inner.evaluations;
      pn_new = inner.x;
      h_new = h_trexp(to_matrix(pn_new)).value;
      if (h_new > 0.25 * h) {
        rho *= 10.0;
      } else {
        break;
      }
    }
    pn = pn_new;
    h = h_new;
    alpha += rho * h;
    result.outer_iterations = outer + 1;
    log::debug("notears outer " + std::to_string(outer + 1) + ": h=" + std::to_string(h) +
               " rho=" + std::to_string(rho));
    if (h <= cfg.h_tol || rho >= cfg.rho_max) break;
  }

  Matrix a = to_matrix(pn);
  a.diagonal().setZero();
  result.h = h;
  result.rho = rho;
  result.converged = h <= cfg.h_tol;
  if (!result.converged) {
    log::warn("notears stopped with h=" + std::to_string(h) + " above h_tol");
  }
  result.weights = WeightedAdjacency(std::move(a), data.labels());
  return result;
}

}  // namespace rootcause
