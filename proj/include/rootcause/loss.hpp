#pragma once

#include <cmath>
#include <utility>

#include <Eigen/Dense>

#include "rootcause/dataset.hpp"
#include "rootcause/errors.hpp"
#include "rootcause/graph.hpp"

namespace rootcause {

struct LossValue {
  double value = 0.0;
  Matrix gradient;
};

/// Least-squares score 1/(2M) ||X - XA||_F^2 and its gradient
/// -(1/M) X^T (X - XA), evaluated directly on the data matrix.
inline LossValue loss_ls(const Matrix& a, const Matrix& x) {
  if (a.rows() != x.cols() || a.cols() != x.cols()) {
    throw ParameterError("adjacency and data dimensions disagree");
  }
  const double m = static_cast<double>(x.rows());
  const Matrix residual = x - x * a;
  return {0.5 / m * residual.squaredNorm(), -(x.transpose() * residual) / m};
}

inline LossValue loss_ls(const WeightedAdjacency& a, const BinaryDataset& data) {
  return loss_ls(a.entries(), data.to_matrix());
}

/// Same score as loss_ls, evaluated from the sufficient statistic
/// C = X^T X / M:  1/2 tr((I - A)^T C (I - A)),  gradient -C (I - A).
/// One evaluation costs O(d^3) regardless of M.
class LeastSquaresLoss {
 public:
  explicit LeastSquaresLoss(const Matrix& x)
      : gram_(x.transpose() * x / static_cast<double>(x.rows())) {
    if (x.rows() < 1) throw ParameterError("loss needs at least one sample");
  }

  int size() const { return static_cast<int>(gram_.rows()); }
  const Matrix& gram() const { return gram_; }

  double evaluate(const Matrix& a, Matrix& gradient) const {
    Matrix complement = -a;
    complement.diagonal().array() += 1.0;
    gradient.noalias() = gram_ * complement;
    const double value = 0.5 * complement.cwiseProduct(gradient).sum();
    gradient = -gradient;
    return value;
  }

 private:
  Matrix gram_;
};

/// Logistic score for 0/1 data: (1/M) sum(log(1 + exp(XA)) - X o XA),
/// gradient (1/M) X^T (sigmoid(XA) - X).
class LogisticLoss {
 public:
  explicit LogisticLoss(Matrix x) : x_(std::move(x)) {
    if (x_.rows() < 1) throw ParameterError("loss needs at least one sample");
  }

  int size() const { return static_cast<int>(x_.cols()); }

  double evaluate(const Matrix& a, Matrix& gradient) const {
    const double m = static_cast<double>(x_.rows());
    const Matrix z = x_ * a;
    // log(1 + e^z) = max(z, 0) + log1p(e^{-|z|})
    const Eigen::ArrayXXd softplus =
        z.array().max(0.0) + (-z.array().abs()).exp().log1p();
    const double value = (softplus - x_.array() * z.array()).sum() / m;
    const Matrix prob = (1.0 / (1.0 + (-z.array()).exp())).matrix();
    gradient.noalias() = x_.transpose() * (prob - x_) / m;
    return value;
  }

 private:
  Matrix x_;
};

}  // namespace rootcause
