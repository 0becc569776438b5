#pragma once

// Reference computations used only by the tests. Each one is deliberately
// naive so it shares no code path with the library.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rootcause/graph.hpp"
#include "rootcause/metrics.hpp"
#include "rootcause/random.hpp"

namespace oracle {

using rootcause::BinaryGraph;
using rootcause::BoolMatrix;
using rootcause::Matrix;

/// exp(A) by a truncated Taylor series in long double after halving A until
/// its norm is below 1/2.
inline Matrix expm_taylor(const Matrix& a) {
  using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  LMatrix x = a.cast<long double>();
  int squarings = 0;
  long double norm = x.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.5L) {
    x /= 2.0L;
    norm /= 2.0L;
    ++squarings;
  }
  const auto n = a.rows();
  LMatrix sum = LMatrix::Identity(n, n);
  LMatrix term = LMatrix::Identity(n, n);
  for (int k = 1; k <= 30; ++k) {
    term = term * x / static_cast<long double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum.cast<double>();
}

/// Central differences of a scalar function of a matrix.
inline Matrix finite_difference(const std::function<double(const Matrix&)>& f, const Matrix& a,
                                double h = 1e-6) {
  Matrix g(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      Matrix p = a;
      Matrix q = a;
      p(i, j) += h;
      q(i, j) -= h;
      g(i, j) = (f(p) - f(q)) / (2 * h);
    }
  }
  return g;
}

/// max |x - y| / max(|y|, floor) over entries.
inline double max_rel_error(const Matrix& x, const Matrix& y, double floor = 1e-3) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      worst = std::max(worst, std::abs(x(i, j) - y(i, j)) / std::max(std::abs(y(i, j)), floor));
    }
  }
  return worst;
}

struct Counts {
  long tp = 0, tn = 0, fp = 0, fn = 0;
};

inline Counts brute_confusion(const BoolMatrix& learned, const BoolMatrix& truth) {
  Counts c;
  for (Eigen::Index i = 0; i < truth.rows(); ++i) {
    for (Eigen::Index j = 0; j < truth.cols(); ++j) {
      if (i == j) continue;
      if (learned(i, j) && truth(i, j)) ++c.tp;
      if (!learned(i, j) && !truth(i, j)) ++c.tn;
      if (learned(i, j) && !truth(i, j)) ++c.fp;
      if (!learned(i, j) && truth(i, j)) ++c.fn;
    }
  }
  return c;
}

/// Random DAG over a random permutation, each pair an edge with probability p.
inline BoolMatrix random_dag(int d, double p, rootcause::Rng& rng) {
  std::vector<int> perm(d);
  for (int i = 0; i < d; ++i) perm[i] = i;
  for (int i = d - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
  BoolMatrix g = BoolMatrix::Constant(d, d, false);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      if (rng.bernoulli(p)) g(perm[i], perm[j]) = true;
    }
  }
  return g;
}

/// DFS cycle check, independent of the library's Kahn peeling.
inline bool has_cycle(const BoolMatrix& g) {
  const int d = static_cast<int>(g.rows());
  std::vector<int> state(d, 0);
  std::function<bool(int)> visit = [&](int v) {
    state[v] = 1;
    for (int w = 0; w < d; ++w) {
      if (!g(v, w)) continue;
      if (state[w] == 1) return true;
      if (state[w] == 0 && visit(w)) return true;
    }
    state[v] = 2;
    return false;
  };
  for (int v = 0; v < d; ++v) {
    if (state[v] == 0 && visit(v)) return true;
  }
  return false;
}

/// d-separation of x and y given z via the moralised ancestral graph.
inline bool d_separated(const BoolMatrix& dag, int x, int y, const std::vector<int>& z) {
  const int d = static_cast<int>(dag.rows());
  std::vector<bool> keep(d, false);
  std::vector<int> stack = {x, y};
  stack.insert(stack.end(), z.begin(), z.end());
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    if (keep[v]) continue;
    keep[v] = true;
    for (int u = 0; u < d; ++u) {
      if (dag(u, v)) stack.push_back(u);
    }
  }
  BoolMatrix moral = BoolMatrix::Constant(d, d, false);
  for (int v = 0; v < d; ++v) {
    if (!keep[v]) continue;
    std::vector<int> parents;
    for (int u = 0; u < d; ++u) {
      if (keep[u] && dag(u, v)) {
        parents.push_back(u);
        moral(u, v) = moral(v, u) = true;
      }
    }
    for (std::size_t a = 0; a < parents.size(); ++a) {
      for (std::size_t b = a + 1; b < parents.size(); ++b) {
        moral(parents[a], parents[b]) = moral(parents[b], parents[a]) = true;
      }
    }
  }
  std::vector<bool> blocked(d, false);
  for (int v : z) blocked[v] = true;
  std::vector<bool> seen(d, false);
  stack = {x};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    if (v == y) return false;
    if (seen[v]) continue;
    seen[v] = true;
    for (int w = 0; w < d; ++w) {
      if (keep[w] && moral(v, w) && !blocked[w] && !seen[w]) stack.push_back(w);
    }
  }
  return true;
}

/// Every d-separation statement of a DAG, as a sorted list of
/// (x, y, z-bitmask) with x < y.
inline std::vector<std::uint64_t> independence_signature(const BoolMatrix& dag) {
  const int d = static_cast<int>(dag.rows());
  std::vector<std::uint64_t> sig;
  for (int x = 0; x < d; ++x) {
    for (int y = x + 1; y < d; ++y) {
      for (std::uint32_t mask = 0; mask < (1U << d); ++mask) {
        if ((mask >> x) & 1U || (mask >> y) & 1U) continue;
        std::vector<int> z;
        for (int k = 0; k < d; ++k) {
          if ((mask >> k) & 1U) z.push_back(k);
        }
        if (d_separated(dag, x, y, z)) {
          sig.push_back((static_cast<std::uint64_t>(x) << 40) |
                        (static_cast<std::uint64_t>(y) << 32) | mask);
        }
      }
    }
  }
  return sig;
}

/// All DAGs on d nodes (d <= 5 keeps this fast).
inline std::vector<BoolMatrix> all_dags(int d) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) pairs.emplace_back(i, j);
  }
  std::vector<BoolMatrix> out;
  std::uint64_t combos = 1;
  for (std::size_t k = 0; k < pairs.size(); ++k) combos *= 3;
  for (std::uint64_t code = 0; code < combos; ++code) {
    BoolMatrix g = BoolMatrix::Constant(d, d, false);
    std::uint64_t c = code;
    for (const auto& [i, j] : pairs) {
      const int state = static_cast<int>(c % 3);
      c /= 3;
      if (state == 1) g(i, j) = true;
      if (state == 2) g(j, i) = true;
    }
    if (!has_cycle(g)) out.push_back(std::move(g));
  }
  return out;
}

/// CPDAG of `dag` found by enumeration: the DAGs with exactly the same
/// d-separation statements form its equivalence class. An edge is directed
/// when every member agrees on its direction. Returned as an entry
/// pattern: (i,j) && (j,i) undirected, (i,j) alone directed.
inline BoolMatrix cpdag_by_enumeration(const BoolMatrix& dag) {
  const int d = static_cast<int>(dag.rows());
  const auto target = independence_signature(dag);
  BoolMatrix out = BoolMatrix::Constant(d, d, false);
  static std::map<int, std::vector<BoolMatrix>> cache;
  if (!cache.count(d)) cache[d] = all_dags(d);
  const BoolMatrix skeleton = dag || dag.transpose();
  for (const auto& g : cache[d]) {
    // Adjacent pairs are never separated, so a different skeleton cannot
    // give the same signature; skip those without computing it.
    if (((g || g.transpose()) != skeleton).any()) continue;
    if (independence_signature(g) != target) continue;
    out = out || g;
  }
  return out;
}

}  // namespace oracle
