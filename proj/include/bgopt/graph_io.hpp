#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bgopt/graph.hpp"

namespace bgopt {

// Shortest round-trip formatting; files reread bit-exactly.
inline std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::runtime_error(where + ": bad number '" + s + "'");
  }
  return v;
}

inline long parse_long(const std::string& s, const std::string& where) {
  long v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::runtime_error(where + ": bad integer '" + s + "'");
  }
  return v;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// nodes.csv: id, F feature columns, label. edges.csv: i, j, weight with i < j
// only (the graph is undirected, so the upper triangle is the whole story).
inline void write_graph(const std::string& dir, const Graph& g) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    std::ofstream nodes(fs::path(dir) / "nodes.csv");
    if (!nodes) throw std::runtime_error("write_graph: cannot open " + dir + "/nodes.csv");
    nodes << "id";
    for (int f = 0; f < g.feature_dim(); ++f) nodes << ",f" << f;
    nodes << ",label\n";
    for (int i = 0; i < g.num_nodes(); ++i) {
      nodes << i;
      for (int f = 0; f < g.feature_dim(); ++f) nodes << "," << format_double(g.features(i, f));
      nodes << "," << g.labels[static_cast<size_t>(i)] << "\n";
    }
  }
  {
    std::ofstream edges(fs::path(dir) / "edges.csv");
    if (!edges) throw std::runtime_error("write_graph: cannot open " + dir + "/edges.csv");
    edges << "i,j,weight\n";
    for (int i = 0; i < g.num_nodes(); ++i) {
      for (int j = i + 1; j < g.num_nodes(); ++j) {
        if (g.adjacency(i, j) != 0.0) {
          edges << i << "," << j << "," << format_double(g.adjacency(i, j)) << "\n";
        }
      }
    }
  }
}

inline Graph read_graph(const std::string& dir) {
  namespace fs = std::filesystem;
  const std::string nodes_path = (fs::path(dir) / "nodes.csv").string();
  const std::string edges_path = (fs::path(dir) / "edges.csv").string();

  std::ifstream nodes(nodes_path);
  if (!nodes) throw std::runtime_error("read_graph: cannot open " + nodes_path);
  std::string line;
  if (!std::getline(nodes, line)) throw std::runtime_error(nodes_path + ":1: missing header");
  auto header = split_csv_line(line);
  if (header.size() < 3 || header.front() != "id" || header.back() != "label") {
    throw std::runtime_error(nodes_path + ":1: expected header 'id,<features>,label'");
  }
  const int feat_dim = static_cast<int>(header.size()) - 2;

  std::vector<std::vector<double>> feats;
  std::vector<int> labels;
  long lineno = 1;
  while (std::getline(nodes, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = nodes_path + ":" + std::to_string(lineno);
    auto cols = split_csv_line(line);
    if (static_cast<int>(cols.size()) != feat_dim + 2) {
      throw std::runtime_error(where + ": expected " + std::to_string(feat_dim + 2) +
                               " columns, got " + std::to_string(cols.size()));
    }
    const long id = parse_long(cols[0], where);
    if (id != static_cast<long>(feats.size())) {
      throw std::runtime_error(where + ": node id " + std::to_string(id) + " out of order");
    }
    std::vector<double> row(static_cast<size_t>(feat_dim));
    for (int f = 0; f < feat_dim; ++f) row[static_cast<size_t>(f)] = parse_double(cols[static_cast<size_t>(f) + 1], where);
    const long label = parse_long(cols.back(), where);
    if (label < 0 || label > 31) {
      throw std::runtime_error(where + ": label " + std::to_string(label) + " out of range 0..31");
    }
    feats.push_back(std::move(row));
    labels.push_back(static_cast<int>(label));
  }
  const long n = static_cast<long>(feats.size());
  if (n == 0) throw std::runtime_error(nodes_path + ": no nodes");

  Graph g;
  g.features = Matrix::Zero(n, feat_dim);
  for (long i = 0; i < n; ++i)
    for (int f = 0; f < feat_dim; ++f) g.features(i, f) = feats[static_cast<size_t>(i)][static_cast<size_t>(f)];
  g.labels = std::move(labels);
  g.adjacency = Matrix::Zero(n, n);

  std::ifstream edges(edges_path);
  if (!edges) throw std::runtime_error("read_graph: cannot open " + edges_path);
  if (!std::getline(edges, line)) throw std::runtime_error(edges_path + ":1: missing header");
  if (split_csv_line(line) != std::vector<std::string>{"i", "j", "weight"}) {
    throw std::runtime_error(edges_path + ":1: expected header 'i,j,weight'");
  }
  lineno = 1;
  while (std::getline(edges, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = edges_path + ":" + std::to_string(lineno);
    auto cols = split_csv_line(line);
    if (cols.size() != 3) {
      throw std::runtime_error(where + ": expected 3 columns, got " + std::to_string(cols.size()));
    }
    const long i = parse_long(cols[0], where);
    const long j = parse_long(cols[1], where);
    const double w = parse_double(cols[2], where);
    if (i < 0 || j < 0 || i >= n || j >= n) {
      throw std::runtime_error(where + ": edge endpoint out of range");
    }
    if (i >= j) {
      throw std::runtime_error(where + ": edge (" + std::to_string(i) + "," + std::to_string(j) +
                               ") violates i < j");
    }
    if (!(w >= 0.0 && w <= 1.0)) {
      throw std::runtime_error(where + ": weight " + cols[2] + " out of [0,1]");
    }
    if (g.adjacency(i, j) != 0.0) {
      throw std::runtime_error(where + ": duplicate edge (" + std::to_string(i) + "," +
                               std::to_string(j) + ")");
    }
    g.adjacency(i, j) = w;
    g.adjacency(j, i) = w;
  }
  return g;
}

}  // namespace bgopt
