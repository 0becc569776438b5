#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rootcause/errors.hpp"

namespace rootcause {

struct BoundedLbfgsOptions {
  int memory = 10;
  int max_iterations = 15000;
  /// Stop when the infinity norm of the projected gradient falls below this.
  double pg_tolerance = 1e-5;
  /// Stop when (f_k - f_{k+1}) / max(|f_k|, |f_{k+1}|, 1) falls below this.
  double f_tolerance = 2.220446049250313e-09;
  int max_line_search = 40;
  double armijo = 1e-4;
};

struct BoundedLbfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::string stop_reason;
};

/// Projected limited-memory BFGS for min f(x) subject to lower <= x <= upper.
///
/// Variables pinned at a bound with the gradient pointing outward form the
/// active set. The two-loop recursion runs on the remaining free
/// coordinates, and a backtracking Armijo search follows the projected
/// path. `fg(x, grad)` returns f(x) and writes the gradient.
template <typename Objective>
BoundedLbfgsResult minimize_bounded(Objective&& fg, Eigen::VectorXd x0,
                                    const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                                    const BoundedLbfgsOptions& options = {}) {
  using Eigen::VectorXd;
  const Eigen::Index n = x0.size();
  if (lower.size() != n || upper.size() != n) {
    throw ParameterError("bound vectors must match the variable count");
  }
  if ((lower.array() > upper.array()).any()) throw ParameterError("lower bound above upper bound");

  auto project = [&](const VectorXd& v) -> VectorXd {
    return v.cwiseMax(lower).cwiseMin(upper);
  };

  BoundedLbfgsResult result;
  VectorXd x = project(x0);
  VectorXd g(n);
  double f = fg(x, g);
  ++result.evaluations;
  if (!std::isfinite(f)) throw NumericError("objective is not finite at the starting point");

  struct Pair {
    VectorXd s;
    VectorXd y;
  };
  std::deque<Pair> history;
  VectorXd free_mask(n);
  VectorXd direction(n);
  VectorXd g_new(n);
  std::vector<double> alpha(options.memory);

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    result.iterations = iter;
    const VectorXd pg = project(x - g) - x;
    if (pg.lpNorm<Eigen::Infinity>() <= options.pg_tolerance) {
      result.converged = true;
      result.stop_reason = "projected gradient below tolerance";
      break;
    }

    for (Eigen::Index i = 0; i < n; ++i) {
      const bool pinned = lower(i) == upper(i) || (x(i) <= lower(i) && g(i) > 0.0) ||
                          (x(i) >= upper(i) && g(i) < 0.0);
      free_mask(i) = pinned ? 0.0 : 1.0;
    }

    // Two-loop recursion restricted to the free coordinates.
    VectorXd q = g.cwiseProduct(free_mask);
    const int k = static_cast<int>(history.size());
    std::vector<double> rho(k, 0.0);
    double gamma = 1.0;
    bool have_scale = false;
    for (int j = k - 1; j >= 0; --j) {
      const double sy = history[j].s.cwiseProduct(free_mask).dot(history[j].y);
      if (sy <= 1e-12) continue;
      rho[j] = 1.0 / sy;
      if (!have_scale) {
        const double yy = history[j].y.cwiseProduct(free_mask).squaredNorm();
        if (yy > 0) gamma = sy / yy;
        have_scale = true;
      }
      alpha[j] = rho[j] * history[j].s.cwiseProduct(free_mask).dot(q);
      q -= alpha[j] * history[j].y.cwiseProduct(free_mask);
    }
    q *= gamma;
    for (int j = 0; j < k; ++j) {
      if (rho[j] == 0.0) continue;
      const double beta = rho[j] * history[j].y.cwiseProduct(free_mask).dot(q);
      q += (alpha[j] - beta) * history[j].s.cwiseProduct(free_mask);
    }
    direction = -q.cwiseProduct(free_mask);

    double slope = g.dot(direction);
    double step = 1.0;
    if (!(slope < 0.0) || !have_scale) {
      direction = -g.cwiseProduct(free_mask);
      slope = g.dot(direction);
      history.clear();
      step = std::min(1.0, 1.0 / std::max(direction.lpNorm<Eigen::Infinity>(), 1e-300));
    }
    if (!(slope < 0.0)) {
      result.converged = true;
      result.stop_reason = "no descent direction on the free coordinates";
      break;
    }

    VectorXd x_new(n);
    double f_new = f;
    bool accepted = false;
    for (int ls = 0; ls < options.max_line_search; ++ls) {
      x_new = project(x + step * direction);
      f_new = fg(x_new, g_new);
      ++result.evaluations;
      if (std::isfinite(f_new) && f_new <= f + options.armijo * g.dot(x_new - x)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      result.stop_reason = "line search failed";
      break;
    }

    Pair pair{x_new - x, g_new - g};
    const double f_old = f;
    x = std::move(x_new);
    g = g_new;
    f = f_new;
    if (pair.s.dot(pair.y) > 1e-10 * pair.y.squaredNorm()) {
      history.push_back(std::move(pair));
      if (static_cast<int>(history.size()) > options.memory) history.pop_front();
    }
    if (f_old - f <= options.f_tolerance * std::max({std::abs(f_old), std::abs(f), 1.0})) {
      result.converged = true;
      result.iterations = iter + 1;
      result.stop_reason = "relative reduction below tolerance";
      break;
    }
    result.iterations = iter + 1;
  }
  if (result.stop_reason.empty()) result.stop_reason = "iteration limit";
  result.x = std::move(x);
  result.value = f;
  return result;
}

}  // namespace rootcause
