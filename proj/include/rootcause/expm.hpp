#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "rootcause/errors.hpp"

namespace rootcause {

namespace detail {

// Degree m Pade approximant r_m(A) = q_m(A)^{-1} p_m(A), with
// p_m(A) = U + V and q_m(A) = V - U. U holds the odd powers.
template <std::size_t N>
void pade_uv(const Eigen::MatrixXd& a, const std::array<double, N>& b, Eigen::MatrixXd& u,
             Eigen::MatrixXd& v) {
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd a2 = a * a;
  Eigen::MatrixXd power = ident;
  Eigen::MatrixXd odd = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd even = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; 2 * k < N; ++k) {
    even += b[2 * k] * power;
    if (2 * k + 1 < N) odd += b[2 * k + 1] * power;
    if (2 * k + 2 < N) power = power * a2;
  }
  u.noalias() = a * odd;
  v = even;
}

inline void pade13_uv(const Eigen::MatrixXd& a, Eigen::MatrixXd& u, Eigen::MatrixXd& v) {
  static constexpr double b[] = {64764752532480000.0,
                                 32382376266240000.0,
                                 7771770303897600.0,
                                 1187353796428800.0,
                                 129060195264000.0,
                                 10559470521600.0,
                                 670442572800.0,
                                 33522128640.0,
                                 1323241920.0,
                                 40840800.0,
                                 960960.0,
                                 16380.0,
                                 182.0,
                                 1.0};
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd a2 = a * a;
  const Eigen::MatrixXd a4 = a2 * a2;
  const Eigen::MatrixXd a6 = a4 * a2;
  Eigen::MatrixXd tmp = b[13] * a6 + b[11] * a4 + b[9] * a2;
  Eigen::MatrixXd odd = a6 * tmp;
  odd += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident;
  u.noalias() = a * odd;
  tmp = b[12] * a6 + b[10] * a4 + b[8] * a2;
  v.noalias() = a6 * tmp;
  v += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
}

}  // namespace detail

/// Matrix exponential by scaling and squaring with a diagonal Pade
/// approximant of degree 3, 5, 7, 9 or 13, chosen from the 1-norm so the
/// backward error stays at double precision unit roundoff.
inline Eigen::MatrixXd expm(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw ParameterError("expm needs a square matrix");
  const Eigen::Index n = a.rows();
  if (n == 0) return a;
  if (!a.allFinite()) throw NumericError("expm input has non-finite entries");

  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  Eigen::MatrixXd u(n, n);
  Eigen::MatrixXd v(n, n);
  int squarings = 0;
  if (norm1 <= 1.495585217958292e-2) {
    detail::pade_uv(a, std::array<double, 4>{120.0, 60.0, 12.0, 1.0}, u, v);
  } else if (norm1 <= 2.539398330063230e-1) {
    detail::pade_uv(a, std::array<double, 6>{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0}, u, v);
  } else if (norm1 <= 9.504178996162932e-1) {
    detail::pade_uv(a,
                    std::array<double, 8>{17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0,
                                          1512.0, 56.0, 1.0},
                    u, v);
  } else if (norm1 <= 2.097847961257068e0) {
    detail::pade_uv(a,
                    std::array<double, 10>{17643225600.0, 8821612800.0, 2075673600.0,
                                           302702400.0, 30270240.0, 2162160.0, 110880.0,
                                           3960.0, 90.0, 1.0},
                    u, v);
  } else {
    constexpr double theta13 = 5.371920351148152e0;
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / theta13))));
    if (squarings > 1000) {
      std::ostringstream msg;
      msg << "expm overflow: 1-norm " << norm1 << ", max |entry| " << a.cwiseAbs().maxCoeff();
      throw NumericError(msg.str());
    }
    detail::pade13_uv(a * std::ldexp(1.0, -squarings), u, v);
  }

  Eigen::MatrixXd result = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) result = result * result;
  if (!result.allFinite()) {
    std::ostringstream msg;
    msg << "expm overflow: max |entry| of argument is " << a.cwiseAbs().maxCoeff();
    throw NumericError(msg.str());
  }
  return result;
}

}  // namespace rootcause
