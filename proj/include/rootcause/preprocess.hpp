#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rootcause/dataset.hpp"
#include "rootcause/errors.hpp"
#include "rootcause/log.hpp"

namespace rootcause {

struct VehicleRecord {
  std::string id;
  std::set<std::string> properties;
  bool fault = false;

  void validate() const {
    if (properties.empty()) throw ParameterError("vehicle '" + id + "' has no properties");
  }
};

struct SubOpRecord {
  std::string id;
  std::set<std::string> properties;  // empty: applies to every vehicle
  double ergonomics = 1.0;
  double plan_time = 1.0;

  void validate() const {
    if (!(ergonomics > 0.0) || !std::isfinite(ergonomics)) {
      throw ParameterError("sub-operation '" + id + "' needs a positive ergonomics value");
    }
    if (!(plan_time > 0.0) || !std::isfinite(plan_time)) {
      throw ParameterError("sub-operation '" + id + "' needs a positive plan time");
    }
  }
};

/// Sub-operations whose property set is contained in the vehicle's.
inline std::vector<SubOpRecord> match_subops(const VehicleRecord& v,
                                             const std::vector<SubOpRecord>& subops) {
  std::vector<SubOpRecord> out;
  for (const auto& op : subops) {
    if (std::includes(v.properties.begin(), v.properties.end(), op.properties.begin(),
                      op.properties.end())) {
      out.push_back(op);
    }
  }
  return out;
}

inline double aggregate_ergonomics(const std::vector<SubOpRecord>& matched) {
  if (matched.empty()) throw AggregationError("no matched sub-operations to average");
  double sum = 0.0;
  for (const auto& op : matched) sum += op.ergonomics;
  return sum / static_cast<double>(matched.size());
}

inline double aggregate_plan_time(const std::vector<SubOpRecord>& matched) {
  if (matched.empty()) throw AggregationError("no matched sub-operations to sum");
  double sum = 0.0;
  for (const auto& op : matched) sum += op.plan_time;
  return sum;
}

struct Binning {
  std::vector<double> boundaries;  // k + 1 edges, first = min, last = max
  std::vector<int> bin;            // bin index per input value
  bool degenerate = false;         // min == max, everything in bin 0

  int bins() const { return static_cast<int>(boundaries.size()) - 1; }

  /// k 0/1 columns per value, exactly one set per row.
  ByteMatrix one_hot() const {
    ByteMatrix out = ByteMatrix::Zero(static_cast<Eigen::Index>(bin.size()), bins());
    for (std::size_t i = 0; i < bin.size(); ++i) out(static_cast<Eigen::Index>(i), bin[i]) = 1;
    return out;
  }
};

/// Equal-width intervals over [min, max]. Intervals are closed on the left;
/// the last one is closed on both ends so the maximum stays in range.
inline Binning bin_equal_width(std::span<const double> values, int k) {
  if (values.empty()) throw ParameterError("cannot bin an empty list");
  if (k < 1) throw ParameterError("bin count must be at least 1");
  for (double v : values) {
    if (!std::isfinite(v)) throw ParameterError("cannot bin non-finite values");
  }
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;

  Binning out;
  out.boundaries.resize(k + 1);
  out.bin.assign(values.size(), 0);
  if (lo == hi) {
    out.degenerate = true;
    std::fill(out.boundaries.begin(), out.boundaries.end(), lo);
    log::warn("binning: all values equal " + std::to_string(lo) + ", assigned to bin 0");
    return out;
  }
  const double width = (hi - lo) / k;
  for (int i = 0; i < k; ++i) out.boundaries[i] = lo + i * width;
  out.boundaries[k] = hi;
  const auto inner_begin = out.boundaries.begin() + 1;
  const auto inner_end = out.boundaries.end() - 1;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.bin[i] = static_cast<int>(std::upper_bound(inner_begin, inner_end, values[i]) - inner_begin);
  }
  return out;
}

struct Contingency {
  long n00 = 0;
  long n01 = 0;
  long n10 = 0;
  long n11 = 0;
};

inline Contingency contingency(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y) {
  if (x.size() != y.size()) throw ParameterError("columns differ in length");
  Contingency c;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int cell = (x[i] ? 2 : 0) + (y[i] ? 1 : 0);
    switch (cell) {
      case 0: ++c.n00; break;
      case 1: ++c.n01; break;
      case 2: ++c.n10; break;
      default: ++c.n11; break;
    }
  }
  return c;
}

/// Phi coefficient from a 2x2 table, normalised by the product of the four
/// marginals.
inline double phi_coefficient(const Contingency& c) {
  const double x1 = static_cast<double>(c.n10 + c.n11);
  const double x0 = static_cast<double>(c.n00 + c.n01);
  const double y1 = static_cast<double>(c.n01 + c.n11);
  const double y0 = static_cast<double>(c.n00 + c.n10);
  if (x1 == 0 || x0 == 0 || y1 == 0 || y0 == 0) {
    throw UndefinedCorrelationError("phi is undefined for a constant column");
  }
  const double num = static_cast<double>(c.n11) * static_cast<double>(c.n00) -
                     static_cast<double>(c.n10) * static_cast<double>(c.n01);
  const double phi = num / std::sqrt(x1 * x0 * y1 * y0);
  return std::clamp(phi, -1.0, 1.0);
}

inline double phi_coefficient(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y) {
  return phi_coefficient(contingency(x, y));
}

struct FeatureScore {
  std::string label;
  double max_abs_phi = 0.0;
  bool constant = false;
};

struct FilterResult {
  BinaryDataset data;
  std::vector<FeatureScore> scores;  // one per feature, input order
  std::vector<std::string> kept;
  std::vector<std::string> dropped;
};

/// Keeps a feature column when its largest |phi| against any target reaches
/// `cutoff`. Columns not listed as features pass through untouched, and the
/// column order is preserved.
inline FilterResult filter_attributes(const BinaryDataset& data,
                                      const std::vector<std::string>& feature_labels,
                                      const std::vector<std::string>& target_labels,
                                      double cutoff) {
  if (!(cutoff > 0.0 && cutoff < 1.0)) throw ParameterError("phi cutoff must lie in (0, 1)");
  if (target_labels.empty()) throw ParameterError("no target columns given");

  std::vector<std::vector<std::uint8_t>> targets;
  for (const auto& t : target_labels) targets.push_back(data.column(data.column_index(t)));

  FilterResult out;
  std::set<int> drop;
  for (const auto& label : feature_labels) {
    const int j = data.column_index(label);
    const auto column = data.column(j);
    FeatureScore score{label};
    for (std::size_t t = 0; t < targets.size(); ++t) {
      try {
        score.max_abs_phi = std::max(score.max_abs_phi, std::abs(phi_coefficient(column, targets[t])));
      } catch (const UndefinedCorrelationError&) {
        score.constant = true;
        log::warn("phi(" + label + ", " + target_labels[t] + ") undefined, treated as 0");
      }
    }
    if (score.max_abs_phi >= cutoff) {
      out.kept.push_back(label);
    } else {
      out.dropped.push_back(label);
      drop.insert(j);
    }
    out.scores.push_back(std::move(score));
  }
  std::vector<int> keep_columns;
  for (int j = 0; j < data.cols(); ++j) {
    if (!drop.count(j)) keep_columns.push_back(j);
  }
  out.data = data.select_columns(keep_columns);
  log::info("phi filter: kept " + std::to_string(out.kept.size()) + ", dropped " +
            std::to_string(out.dropped.size()) + " of " + std::to_string(feature_labels.size()) +
            " features");
  return out;
}

namespace detail {

inline bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

/// Numeric identifiers sort by value and come before non-numeric ones.
inline bool property_less(const std::string& a, const std::string& b) {
  const bool na = all_digits(a);
  const bool nb = all_digits(b);
  if (na != nb) return na;
  if (na) {
    const auto strip = [](const std::string& s) {
      const auto p = s.find_first_not_of('0');
      return p == std::string::npos ? std::string("0") : s.substr(p);
    };
    const std::string sa = strip(a);
    const std::string sb = strip(b);
    if (sa.size() != sb.size()) return sa.size() < sb.size();
    if (sa != sb) return sa < sb;
  }
  return a < b;
}

}  // namespace detail

struct BinaryTable {
  BinaryDataset data;
  std::vector<std::string> feature_labels;  // FaE_<id>
  std::vector<std::string> target_labels;   // Er_1..k, Pz_1..k
  std::string fault_label = "Fe";
  std::vector<std::string> excluded_vehicles;
  Binning ergonomics_bins;
  Binning plan_time_bins;
};

/// Vehicle and sub-operation tables to one 0/1 row per vehicle: property
/// indicators, one-hot bins of mean ergonomics and total plan time, fault.
inline BinaryTable build_binary_table(const std::vector<VehicleRecord>& vehicles,
                                      const std::vector<SubOpRecord>& subops, int k_bins) {
  if (vehicles.empty()) throw ParameterError("no vehicles given");
  if (subops.empty()) throw ParameterError("no sub-operations given");
  if (k_bins < 1) throw ParameterError("bin count must be at least 1");
  for (const auto& v : vehicles) v.validate();
  for (const auto& op : subops) op.validate();

  BinaryTable out;
  std::vector<const VehicleRecord*> included;
  std::vector<double> er;
  std::vector<double> pz;
  for (const auto& v : vehicles) {
    const auto matched = match_subops(v, subops);
    if (matched.empty()) {
      out.excluded_vehicles.push_back(v.id);
      continue;
    }
    included.push_back(&v);
    er.push_back(aggregate_ergonomics(matched));
    pz.push_back(aggregate_plan_time(matched));
  }
  if (!out.excluded_vehicles.empty()) {
    log::warn("preprocess: excluded " + std::to_string(out.excluded_vehicles.size()) +
              " vehicle(s) without matching sub-operations");
  }
  if (included.empty()) throw AggregationError("no vehicle matched any sub-operation");

  std::vector<std::string> props;
  {
    std::set<std::string> seen;
    for (const auto* v : included) seen.insert(v->properties.begin(), v->properties.end());
    props.assign(seen.begin(), seen.end());
    std::sort(props.begin(), props.end(), detail::property_less);
  }
  std::map<std::string, int> prop_column;
  for (std::size_t p = 0; p < props.size(); ++p) {
    prop_column[props[p]] = static_cast<int>(p);
    out.feature_labels.push_back("FaE_" + props[p]);
  }

  out.ergonomics_bins = bin_equal_width(er, k_bins);
  out.plan_time_bins = bin_equal_width(pz, k_bins);

  const int n_props = static_cast<int>(props.size());
  const int d = n_props + 2 * k_bins + 1;
  const auto m = static_cast<Eigen::Index>(included.size());
  ByteMatrix values = ByteMatrix::Zero(m, d);
  for (Eigen::Index r = 0; r < m; ++r) {
    for (const auto& p : included[r]->properties) values(r, prop_column.at(p)) = 1;
    values(r, n_props + out.ergonomics_bins.bin[r]) = 1;
    values(r, n_props + k_bins + out.plan_time_bins.bin[r]) = 1;
    values(r, d - 1) = included[r]->fault ? 1 : 0;
  }

  Labels labels = out.feature_labels;
  for (int b = 1; b <= k_bins; ++b) out.target_labels.push_back("Er_" + std::to_string(b));
  for (int b = 1; b <= k_bins; ++b) out.target_labels.push_back("Pz_" + std::to_string(b));
  labels.insert(labels.end(), out.target_labels.begin(), out.target_labels.end());
  labels.push_back(out.fault_label);
  out.data = BinaryDataset(std::move(values), std::move(labels));
  return out;
}

}  // namespace rootcause
