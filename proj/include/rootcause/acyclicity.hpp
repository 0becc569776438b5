#pragma once

#include <cmath>
#include <optional>
#include <sstream>

#include <Eigen/Dense>

#include "rootcause/errors.hpp"
#include "rootcause/expm.hpp"
#include "rootcause/graph.hpp"

namespace rootcause {

/// Value and gradient of a smooth acyclicity function. Both vanish exactly
/// when the support of the argument is a DAG.
struct Acyclicity {
  double value = 0.0;
  Matrix gradient;
};

/// Trace-exponential constraint h(A) = tr(exp(A o A)) - d with gradient
/// exp(A o A)^T o 2A.
inline Acyclicity h_trexp(const Matrix& a) {
  if (a.rows() != a.cols()) throw ParameterError("h_trexp needs a square matrix");
  if (!a.allFinite()) throw NumericError("h_trexp input has non-finite entries");
  const Matrix e = expm(a.cwiseProduct(a));
  Acyclicity out;
  out.value = e.trace() - static_cast<double>(a.rows());
  out.gradient = e.transpose().cwiseProduct(2.0 * a);
  return out;
}

inline Acyclicity h_trexp(const WeightedAdjacency& a) { return h_trexp(a.entries()); }

/// LU factorization of sI - A o A without pivoting. For a Z-matrix this
/// succeeds with all pivots positive exactly when every leading principal
/// minor is positive, i.e. when it is a nonsingular M-matrix.
class MMatrixFactor {
 public:
  MMatrixFactor(const Matrix& a, double s) {
    if (!(s > 0.0)) throw ParameterError("log-det parameter s must be positive");
    const Eigen::Index d = a.rows();
    lu_ = -a.cwiseProduct(a);
    lu_.diagonal().array() += s;
    // Pivots below this slack are treated as a domain exit.
    const double slack = 1e-12 * s;
    for (Eigen::Index k = 0; k < d; ++k) {
      const double pivot = lu_(k, k);
      if (!(pivot > slack)) {
        failed_pivot_ = k;
        return;
      }
      log_det_ += std::log(pivot);
      const Eigen::Index rest = d - k - 1;
      if (rest == 0) continue;
      lu_.col(k).tail(rest) /= pivot;
      lu_.bottomRightCorner(rest, rest).noalias() -=
          lu_.col(k).tail(rest) * lu_.row(k).tail(rest);
    }
  }

  bool in_domain() const { return !failed_pivot_.has_value(); }
  std::optional<Eigen::Index> failed_pivot() const { return failed_pivot_; }
  double log_det() const { return log_det_; }

  Matrix inverse() const {
    Matrix inv = Matrix::Identity(lu_.rows(), lu_.cols());
    lu_.triangularView<Eigen::UnitLower>().solveInPlace(inv);
    lu_.triangularView<Eigen::Upper>().solveInPlace(inv);
    return inv;
  }

 private:
  Matrix lu_;
  double log_det_ = 0.0;
  std::optional<Eigen::Index> failed_pivot_;
};

inline bool in_logdet_domain(const Matrix& a, double s) {
  return MMatrixFactor(a, s).in_domain();
}

/// Log-determinant constraint h(A) = -log det(sI - A o A) + d log s with
/// gradient 2 (sI - A o A)^{-T} o A. Throws DomainError outside the
/// M-matrix domain.
inline Acyclicity h_logdet(const Matrix& a, double s) {
  if (a.rows() != a.cols()) throw ParameterError("h_logdet needs a square matrix");
  if (!a.allFinite()) throw NumericError("h_logdet input has non-finite entries");
  MMatrixFactor factor(a, s);
  if (!factor.in_domain()) {
    std::ostringstream msg;
    msg << "sI - A o A is not an M-matrix (s = " << s << ", pivot "
        << *factor.failed_pivot() << " not positive)";
    throw DomainError(msg.str());
  }
  Acyclicity out;
  out.value = -factor.log_det() + static_cast<double>(a.rows()) * std::log(s);
  out.gradient = 2.0 * factor.inverse().transpose().cwiseProduct(a);
  return out;
}

inline Acyclicity h_logdet(const WeightedAdjacency& a, double s) {
  return h_logdet(a.entries(), s);
}

}  // namespace rootcause
