#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rootcause/dataset.hpp"
#include "rootcause/errors.hpp"
#include "rootcause/graph.hpp"
#include "rootcause/preprocess.hpp"
#include "rootcause/simulate.hpp"

// Adjacency files put the cause in the row and the effect in the column:
// entry (i, j) is the edge i -> j.

namespace rootcause::io {

using json = nlohmann::json;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

/// One CSV record. Double quotes group fields and "" is a literal quote.
inline std::vector<std::string> split_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? field : trim(field));
      field.clear();
      was_quoted = false;
    } else {
      field += c;
    }
  }
  if (quoted) throw FormatError("unterminated quote in CSV record");
  fields.push_back(was_quoted ? field : trim(field));
  return fields;
}

inline std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline double parse_double(const std::string& s, std::string_view what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw FormatError("cannot parse '" + s + "' as a number in " + std::string(what));
  }
  return v;
}

inline std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

inline bool parse_bit(const std::string& s, std::string_view what) {
  if (s == "0") return false;
  if (s == "1") return true;
  throw FormatError("expected 0 or 1 in " + std::string(what) + ", got '" + s + "'");
}

}  // namespace detail

/// Header line plus records; blank lines are skipped and every record must
/// have as many fields as the header.
inline CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  bool have_header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    auto fields = detail::split_record(line);
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw FormatError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(table.header.size()) + " fields, got " +
                        std::to_string(fields.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (!have_header) throw FormatError("CSV input is empty");
  return table;
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "' for reading");
  return in;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  return out;
}

inline void write_header(std::ostream& out, const Labels& labels) {
  for (std::size_t j = 0; j < labels.size(); ++j) {
    if (j) out << ',';
    out << detail::quote(labels[j]);
  }
  out << '\n';
}

inline void write_adjacency(std::ostream& out, const WeightedAdjacency& w) {
  write_header(out, w.labels());
  for (int i = 0; i < w.size(); ++i) {
    for (int j = 0; j < w.size(); ++j) {
      if (j) out << ',';
      out << detail::format_double(w(i, j));
    }
    out << '\n';
  }
}

inline void write_adjacency(std::ostream& out, const BinaryGraph& g) {
  write_header(out, g.labels());
  for (int i = 0; i < g.size(); ++i) {
    for (int j = 0; j < g.size(); ++j) {
      if (j) out << ',';
      out << (g.has_edge(i, j) ? '1' : '0');
    }
    out << '\n';
  }
}

/// Undirected {i, j} is written as 1 at both (i, j) and (j, i).
inline void write_adjacency(std::ostream& out, const MixedGraph& g) {
  BoolMatrix m = BoolMatrix::Constant(g.size(), g.size(), false);
  for (const auto& [a, b] : g.directed()) m(a, b) = true;
  for (const auto& [a, b] : g.undirected()) m(a, b) = m(b, a) = true;
  write_adjacency(out, BinaryGraph(m, g.labels()));
}

namespace detail {

inline CsvTable read_square(std::istream& in) {
  CsvTable t = read_csv(in);
  if (t.rows.size() != t.header.size()) {
    throw FormatError("adjacency has " + std::to_string(t.header.size()) + " labels but " +
                      std::to_string(t.rows.size()) + " rows");
  }
  return t;
}

}  // namespace detail

inline WeightedAdjacency read_weighted_adjacency(std::istream& in) {
  const CsvTable t = detail::read_square(in);
  const auto d = static_cast<Eigen::Index>(t.header.size());
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = detail::parse_double(t.rows[i][j], "adjacency");
  }
  return WeightedAdjacency(std::move(m), t.header);
}

/// Raw 0/1 adjacency. Symmetric pairs are kept as two entries; use
/// read_mixed_graph to read them as undirected edges.
inline BoolMatrix read_bool_adjacency(std::istream& in, Labels* labels) {
  const CsvTable t = detail::read_square(in);
  const auto d = static_cast<Eigen::Index>(t.header.size());
  BoolMatrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = detail::parse_bit(t.rows[i][j], "adjacency");
  }
  if (labels) *labels = t.header;
  return m;
}

inline BinaryGraph read_binary_graph(std::istream& in) {
  Labels labels;
  BoolMatrix m = read_bool_adjacency(in, &labels);
  return BinaryGraph(std::move(m), std::move(labels));
}

/// Symmetric 1s become an undirected edge, one-sided 1s a directed edge.
inline MixedGraph read_mixed_graph(std::istream& in) {
  Labels labels;
  const BoolMatrix m = read_bool_adjacency(in, &labels);
  const int d = static_cast<int>(m.rows());
  MixedGraph g(d, labels);
  for (int i = 0; i < d; ++i) {
    if (m(i, i)) throw FormatError("adjacency has a self-loop at '" + labels[i] + "'");
    for (int j = i + 1; j < d; ++j) {
      if (m(i, j) && m(j, i)) {
        g.add_undirected(i, j);
      } else if (m(i, j)) {
        g.add_directed(i, j);
      } else if (m(j, i)) {
        g.add_directed(j, i);
      }
    }
  }
  return g;
}

inline json mixed_graph_json(const MixedGraph& g) {
  json j;
  j["labels"] = g.labels();
  j["directed"] = json::array();
  for (const auto& [a, b] : g.directed()) {
    j["directed"].push_back({g.labels()[a], g.labels()[b]});
  }
  j["undirected"] = json::array();
  for (const auto& [a, b] : g.undirected()) {
    j["undirected"].push_back({g.labels()[a], g.labels()[b]});
  }
  return j;
}

inline void write_dataset(std::ostream& out, const BinaryDataset& data) {
  write_header(out, data.labels());
  const auto& v = data.values();
  std::string line;
  for (int r = 0; r < data.rows(); ++r) {
    line.clear();
    for (int c = 0; c < data.cols(); ++c) {
      if (c) line += ',';
      line += v(r, c) ? '1' : '0';
    }
    line += '\n';
    out << line;
  }
}

inline BinaryDataset read_dataset(std::istream& in) {
  const CsvTable t = read_csv(in);
  ByteMatrix values(static_cast<Eigen::Index>(t.rows.size()),
                    static_cast<Eigen::Index>(t.header.size()));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (std::size_t c = 0; c < t.header.size(); ++c) {
      values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          detail::parse_bit(t.rows[r][c], "dataset row " + std::to_string(r + 1)) ? 1 : 0;
    }
  }
  return BinaryDataset(std::move(values), t.header);
}

/// Weights, biases and tier membership of a simulated model. The weight
/// matrix uses the same row-to-column convention as the adjacency files.
inline json ground_truth_json(const GroundTruth& gt) {
  json j;
  j["labels"] = gt.labels();
  j["tiers"] = json::array();
  for (std::size_t t = 0; t < gt.tier_names.size(); ++t) {
    json members = json::array();
    for (int v = 0; v < gt.size(); ++v) {
      if (gt.tier_of[v] == static_cast<int>(t)) members.push_back(gt.labels()[v]);
    }
    j["tiers"].push_back({{"name", gt.tier_names[t]}, {"nodes", members}});
  }
  j["biases"] = json::object();
  for (int v = 0; v < gt.size(); ++v) j["biases"][gt.labels()[v]] = gt.biases(v);
  j["edges"] = json::array();
  for (const auto& [from, to] : gt.graph.edges()) {
    j["edges"].push_back(
        {{"from", gt.labels()[from]}, {"to", gt.labels()[to]}, {"weight", gt.weights(from, to)}});
  }
  return j;
}

namespace detail {

inline std::set<std::string> parse_properties(const std::string& field) {
  std::set<std::string> out;
  std::stringstream ss(field);
  std::string item;
  while (std::getline(ss, item, ';')) {
    item = trim(item);
    if (!item.empty()) out.insert(item);
  }
  return out;
}

inline std::size_t require_column(const CsvTable& t, const std::string& name) {
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (t.header[c] == name) return c;
  }
  throw FormatError("missing column '" + name + "'");
}

}  // namespace detail

/// Columns: vehicle_id, properties (';'-separated), fault (0/1).
inline std::vector<VehicleRecord> read_vehicles(std::istream& in) {
  const CsvTable t = read_csv(in);
  const auto id = detail::require_column(t, "vehicle_id");
  const auto props = detail::require_column(t, "properties");
  const auto fault = detail::require_column(t, "fault");
  std::vector<VehicleRecord> out;
  for (const auto& row : t.rows) {
    VehicleRecord v{row[id], detail::parse_properties(row[props]),
                    detail::parse_bit(row[fault], "vehicle fault")};
    v.validate();
    out.push_back(std::move(v));
  }
  return out;
}

/// Columns: subop_id, properties (';'-separated, may be empty), ergonomics,
/// plan_time.
inline std::vector<SubOpRecord> read_subops(std::istream& in) {
  const CsvTable t = read_csv(in);
  const auto id = detail::require_column(t, "subop_id");
  const auto props = detail::require_column(t, "properties");
  const auto er = detail::require_column(t, "ergonomics");
  const auto pz = detail::require_column(t, "plan_time");
  std::vector<SubOpRecord> out;
  for (const auto& row : t.rows) {
    SubOpRecord op{row[id], detail::parse_properties(row[props]),
                   detail::parse_double(row[er], "ergonomics"),
                   detail::parse_double(row[pz], "plan_time")};
    op.validate();
    out.push_back(std::move(op));
  }
  return out;
}

}  // namespace rootcause::io
