#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "rootcause/dataset.hpp"
#include "rootcause/errors.hpp"
#include "rootcause/graph.hpp"
#include "rootcause/log.hpp"

namespace rootcause {

enum class CiStatistic { kG2, kPearson };

struct PcConfig {
  double alpha = 0.05;
  std::optional<int> max_cond_set = 3;
  bool stable = true;
  CiStatistic statistic = CiStatistic::kG2;
  /// A test is underpowered when M < min_samples_per_dof * 2^|z|.
  double min_samples_per_dof = 5.0;
  /// Underpowered tests report independence (true) or keep the edge (false).
  bool lowpower_delete = true;

  void validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
    if (max_cond_set && *max_cond_set < 0) {
      throw ParameterError("max conditioning set size must be nonnegative");
    }
    if (!(min_samples_per_dof >= 0.0)) throw ParameterError("min_samples_per_dof must be >= 0");
  }
};

struct CiTestResult {
  double statistic = 0.0;
  int dof = 1;
  double p_value = 1.0;
  bool independent = true;
  bool low_power = false;
};

/// Upper tail of the chi-square distribution.
inline double chi2_survival(double statistic, int dof) {
  if (dof <= 0 || statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

/// Conditional independence tests for 0/1 columns. Columns are packed into
/// 64-bit words so every contingency count is a popcount.
class BinaryCiTester {
 public:
  explicit BinaryCiTester(const BinaryDataset& data, const PcConfig& cfg = {})
      : m_(data.rows()), words_((data.rows() + 63) / 64), cfg_(cfg) {
    cfg_.validate();
    bits_.resize(static_cast<std::size_t>(data.cols()));
    for (int j = 0; j < data.cols(); ++j) {
      auto& col = bits_[j];
      col.assign(words_, 0);
      for (int i = 0; i < m_; ++i) {
        if (data(i, j)) col[i / 64] |= std::uint64_t{1} << (i % 64);
      }
    }
    tail_mask_ = (m_ % 64 == 0) ? ~std::uint64_t{0} : (std::uint64_t{1} << (m_ % 64)) - 1;
  }

  int variables() const { return static_cast<int>(bits_.size()); }
  int samples() const { return m_; }

  CiTestResult test(int x, int y, std::span<const int> z) const {
    const int nv = variables();
    if (x == y) throw ParameterError("CI test needs two distinct variables");
    if (x < 0 || y < 0 || x >= nv || y >= nv) throw ParameterError("CI test variable out of range");
    for (int c : z) {
      if (c == x || c == y) throw ParameterError("conditioning set contains a tested variable");
      if (c < 0 || c >= nv) throw ParameterError("conditioning variable out of range");
    }
    CiTestResult r;
    const double nominal_dof = std::ldexp(1.0, static_cast<int>(z.size()));
    if (static_cast<double>(m_) < cfg_.min_samples_per_dof * nominal_dof) {
      r.low_power = true;
      r.independent = cfg_.lowpower_delete;
      r.p_value = 1.0;
      r.dof = static_cast<int>(nominal_dof);
      return r;
    }

    const auto& bx = bits_[x];
    const auto& by = bits_[y];
    const std::size_t strata = std::size_t{1} << z.size();
    double statistic = 0.0;
    int dof = 0;
    for (std::size_t s = 0; s < strata; ++s) {
      long n = 0;
      long n_x = 0;
      long n_y = 0;
      long n_xy = 0;
      for (std::size_t w = 0; w < words_; ++w) {
        std::uint64_t mask = (w + 1 == words_) ? tail_mask_ : ~std::uint64_t{0};
        for (std::size_t k = 0; k < z.size(); ++k) {
          const std::uint64_t col = bits_[z[k]][w];
          mask &= ((s >> k) & 1U) ? col : ~col;
        }
        n += std::popcount(mask);
        n_x += std::popcount(mask & bx[w]);
        n_y += std::popcount(mask & by[w]);
        n_xy += std::popcount(mask & bx[w] & by[w]);
      }
      // Strata where x or y does not vary carry no degrees of freedom.
      if (n == 0 || n_x == 0 || n_x == n || n_y == 0 || n_y == n) continue;
      ++dof;
      const long cells[2][2] = {{n - n_x - n_y + n_xy, n_y - n_xy}, {n_x - n_xy, n_xy}};
      const double row[2] = {static_cast<double>(n - n_x), static_cast<double>(n_x)};
      const double col[2] = {static_cast<double>(n - n_y), static_cast<double>(n_y)};
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const double expected = row[a] * col[b] / static_cast<double>(n);
          const double observed = static_cast<double>(cells[a][b]);
          if (cfg_.statistic == CiStatistic::kG2) {
            if (observed > 0) statistic += 2.0 * observed * std::log(observed / expected);
          } else {
            statistic += (observed - expected) * (observed - expected) / expected;
          }
        }
      }
    }
    r.statistic = std::max(statistic, 0.0);
    r.dof = std::max(dof, 1);
    r.p_value = dof == 0 ? 1.0 : chi2_survival(r.statistic, dof);
    r.independent = r.p_value > cfg_.alpha;
    return r;
  }

 private:
  int m_;
  std::size_t words_;
  PcConfig cfg_;
  std::vector<std::vector<std::uint64_t>> bits_;
  std::uint64_t tail_mask_ = 0;
};

/// G^2 test of x _||_ y | z on a dataset.
inline CiTestResult ci_test_g2(const BinaryDataset& data, int x, int y, const std::vector<int>& z,
                               const PcConfig& cfg = {}) {
  PcConfig g2 = cfg;
  g2.statistic = CiStatistic::kG2;
  return BinaryCiTester(data, g2).test(x, y, z);
}

using SepSets = std::map<std::pair<int, int>, std::vector<int>>;

inline std::pair<int, int> unordered(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

struct Skeleton {
  BoolMatrix adjacent;  // symmetric
  SepSets sepsets;      // keyed by (min, max)
  long tests = 0;
  long low_power_tests = 0;

  int size() const { return static_cast<int>(adjacent.rows()); }
  int edge_count() const { return static_cast<int>(adjacent.count() / 2); }
};

namespace detail {

/// Calls visit(subset) for every size-k subset of items in lexicographic
/// order of positions; stops early when visit returns true.
template <typename Visit>
bool for_each_subset(const std::vector<int>& items, int k, Visit&& visit) {
  const int n = static_cast<int>(items.size());
  if (k > n) return false;
  std::vector<int> pos(k);
  for (int i = 0; i < k; ++i) pos[i] = i;
  std::vector<int> subset(k);
  for (;;) {
    for (int i = 0; i < k; ++i) subset[i] = items[pos[i]];
    if (visit(std::as_const(subset))) return true;
    int i = k - 1;
    while (i >= 0 && pos[i] == n - k + i) --i;
    if (i < 0) return false;
    ++pos[i];
    for (int j = i + 1; j < k; ++j) pos[j] = pos[j - 1] + 1;
  }
}

}  // namespace detail

/// Adjacency search from the complete graph. `test(x, y, z)` returns a
/// CiTestResult. Conditioning sets grow one level at a time and are drawn
/// from the current neighbours of x (minus y). In stable mode the
/// neighbourhoods are frozen at the start of each level, so the result does
/// not depend on the order in which pairs are visited.
template <typename Test>
Skeleton learn_skeleton(int d, Test&& test, const PcConfig& cfg = {}) {
  cfg.validate();
  if (d < 2) throw ParameterError("skeleton search needs at least two variables");
  Skeleton sk;
  sk.adjacent = BoolMatrix::Constant(d, d, true);
  for (int i = 0; i < d; ++i) sk.adjacent(i, i) = false;

  for (int level = 0;; ++level) {
    if (cfg.max_cond_set && level > *cfg.max_cond_set) break;
    const BoolMatrix frozen = sk.adjacent;
    const BoolMatrix& neighbourhood = cfg.stable ? frozen : sk.adjacent;
    bool any_candidate = false;
    for (int x = 0; x < d; ++x) {
      for (int y = 0; y < d; ++y) {
        if (x == y || !sk.adjacent(x, y)) continue;
        std::vector<int> nbrs;
        for (int k = 0; k < d; ++k) {
          if (k != y && neighbourhood(x, k)) nbrs.push_back(k);
        }
        if (static_cast<int>(nbrs.size()) < level) continue;
        any_candidate = true;
        detail::for_each_subset(nbrs, level, [&](const std::vector<int>& z) {
          const CiTestResult r = test(x, y, std::span<const int>(z));
          ++sk.tests;
          if (r.low_power) ++sk.low_power_tests;
          if (!r.independent) return false;
          sk.adjacent(x, y) = false;
          sk.adjacent(y, x) = false;
          sk.sepsets[unordered(x, y)] = z;
          return true;
        });
      }
    }
    if (!any_candidate) break;
  }
  return sk;
}

inline Skeleton learn_skeleton(const BinaryDataset& data, const PcConfig& cfg = {}) {
  if (data.cols() < 2) throw ParameterError("skeleton search needs at least two columns");
  const BinaryCiTester tester(data, cfg);
  return learn_skeleton(
      data.cols(), [&](int x, int y, std::span<const int> z) { return tester.test(x, y, z); },
      cfg);
}

struct Orientation {
  MixedGraph graph;
  int conflicts = 0;
};

namespace detail {

// g(i, j) && g(j, i): undirected; g(i, j) only: i -> j.
class Pdag {
 public:
  explicit Pdag(const BoolMatrix& adjacent) : g_(adjacent) {}

  int size() const { return static_cast<int>(g_.rows()); }
  bool adjacent(int a, int b) const { return g_(a, b) || g_(b, a); }
  bool undirected(int a, int b) const { return g_(a, b) && g_(b, a); }
  bool directed(int a, int b) const { return g_(a, b) && !g_(b, a); }
  void orient(int from, int to) { g_(to, from) = false; }

 private:
  BoolMatrix g_;
};

inline bool meek_pass(Pdag& g) {
  const int d = g.size();
  bool changed = false;
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      if (a == b || !g.undirected(a, b)) continue;
      bool orient = false;
      // R1: c -> a - b, c and b not adjacent.
      for (int c = 0; c < d && !orient; ++c) {
        if (c != b && g.directed(c, a) && !g.adjacent(c, b)) orient = true;
      }
      // R2: a -> c -> b.
      for (int c = 0; c < d && !orient; ++c) {
        if (g.directed(a, c) && g.directed(c, b)) orient = true;
      }
      // R3: a - c -> b, a - e -> b, c and e not adjacent.
      for (int c = 0; c < d && !orient; ++c) {
        if (!(g.undirected(a, c) && g.directed(c, b))) continue;
        for (int e = c + 1; e < d && !orient; ++e) {
          if (g.undirected(a, e) && g.directed(e, b) && !g.adjacent(c, e)) orient = true;
        }
      }
      // R4: a - e, e -> c -> b, a adjacent to c, e and b not adjacent.
      for (int c = 0; c < d && !orient; ++c) {
        if (c == b || !(g.directed(c, b) && g.adjacent(a, c))) continue;
        for (int e = 0; e < d && !orient; ++e) {
          if (e != b && g.undirected(a, e) && g.directed(e, c) && !g.adjacent(e, b)) {
            orient = true;
          }
        }
      }
      if (orient) {
        g.orient(a, b);
        changed = true;
      }
    }
  }
  return changed;
}

}  // namespace detail

/// Orients a skeleton: unshielded colliders x -> z <- y where z is not in
/// sepset(x, y), then Meek rules 1-4 to closure. A collider that would
/// reverse an earlier orientation is dropped (first one wins) and counted.
inline Orientation orient(const Skeleton& sk, const Labels& labels = {}) {
  const int d = sk.size();
  detail::Pdag g(sk.adjacent);
  Orientation out;
  for (int z = 0; z < d; ++z) {
    for (int x = 0; x < d; ++x) {
      if (x == z || !sk.adjacent(x, z)) continue;
      for (int y = x + 1; y < d; ++y) {
        if (y == z || !sk.adjacent(y, z) || sk.adjacent(x, y)) continue;
        const auto it = sk.sepsets.find(unordered(x, y));
        const bool in_sepset = it != sk.sepsets.end() &&
                               std::find(it->second.begin(), it->second.end(), z) !=
                                   it->second.end();
        if (in_sepset) continue;
        // Both edges must still accept the collider orientation.
        if (g.directed(z, x) || g.directed(z, y)) {
          ++out.conflicts;
          log::info("pc: collider " + std::to_string(x) + "->" + std::to_string(z) + "<-" +
                    std::to_string(y) + " conflicts with an earlier orientation; kept first");
          continue;
        }
        g.orient(x, z);
        g.orient(y, z);
      }
    }
  }
  while (detail::meek_pass(g)) {
  }

  out.graph = MixedGraph(d, labels.empty() ? default_labels(d) : labels);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (g.directed(i, j)) {
        out.graph.add_directed(i, j);
      } else if (i < j && g.undirected(i, j)) {
        out.graph.add_undirected(i, j);
      }
    }
  }
  return out;
}

struct PcResult {
  MixedGraph graph;
  Skeleton skeleton;
  int conflicts = 0;
};

/// Skeleton search followed by orientation. Deterministic for fixed data,
/// configuration and column order.
inline PcResult pc(const BinaryDataset& data, const PcConfig& cfg = {}) {
  Skeleton sk = learn_skeleton(data, cfg);
  Orientation o = orient(sk, data.labels());
  if (sk.low_power_tests > 0) {
    log::info("pc: " + std::to_string(sk.low_power_tests) + " underpowered tests");
  }
  return {std::move(o.graph), std::move(sk), o.conflicts};
}

}  // namespace rootcause
