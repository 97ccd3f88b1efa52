#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "bgopt/matrix.hpp"

namespace bgopt {

constexpr double kSymmetryTol = 1e-12;

// Weighted undirected patient-similarity graph. Immutable by convention after
// construction; every pipeline stage produces a fresh one.
struct Graph {
  Matrix adjacency;         // n x n, symmetric, zero diagonal, weights in [0, 1]
  Matrix features;          // n x F
  std::vector<int> labels;  // class per node, 0..31

  int num_nodes() const { return static_cast<int>(adjacency.rows()); }
  int feature_dim() const { return static_cast<int>(features.cols()); }
};

// (M + M^T)/2, clipped to [0, 1], diagonal forced to zero.
inline Matrix sanitize(const Matrix& raw) {
  if (raw.rows() != raw.cols()) {
    throw std::invalid_argument("sanitize: matrix " + shape_str(raw) + " is not square");
  }
  Matrix a = 0.5 * (raw + Matrix(raw.transpose()));
  a = a.cwiseMax(0.0).cwiseMin(1.0);
  a.diagonal().setZero();
  return a;
}

inline void require_graph_invariants(const Graph& g, const std::string& where) {
  const Matrix& a = g.adjacency;
  if (a.rows() != a.cols()) throw std::runtime_error(where + ": adjacency not square");
  if (g.features.rows() != a.rows()) {
    throw std::runtime_error(where + ": features rows " + std::to_string(g.features.rows()) +
                             " != node count " + std::to_string(a.rows()));
  }
  if (static_cast<Eigen::Index>(g.labels.size()) != a.rows()) {
    throw std::runtime_error(where + ": label count mismatch");
  }
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    if (a(i, i) != 0.0) throw std::runtime_error(where + ": nonzero diagonal");
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double v = a(i, j);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        throw std::runtime_error(where + ": weight out of [0,1] at (" + std::to_string(i) + "," +
                                 std::to_string(j) + ")");
      }
      if (std::abs(v - a(j, i)) > kSymmetryTol) {
        throw std::runtime_error(where + ": asymmetric at (" + std::to_string(i) + "," +
                                 std::to_string(j) + ")");
      }
    }
  }
}

// Fully connected unit-weight graph over the given feature rows.
inline Graph complete_graph(Matrix features, std::vector<int> labels) {
  const Eigen::Index n = features.rows();
  if (n < 2) throw std::invalid_argument("complete_graph: need at least 2 nodes");
  if (static_cast<Eigen::Index>(labels.size()) != n) {
    throw std::invalid_argument("complete_graph: " + std::to_string(labels.size()) +
                                " labels for " + std::to_string(n) + " nodes");
  }
  Graph g;
  g.adjacency = Matrix::Ones(n, n);
  g.adjacency.diagonal().setZero();
  g.features = std::move(features);
  g.labels = std::move(labels);
  return g;
}

struct LaplacianPair {
  Matrix degree;     // diagonal, D[i][i] = sum_j A[i][j]
  Matrix laplacian;  // L = D - A; rows and columns sum to zero
};

inline LaplacianPair build_laplacian(const Graph& g) {
  const Matrix& a = g.adjacency;
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("build_laplacian: adjacency " + shape_str(a) + " is not square");
  }
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < a.cols(); ++j) {
      if (std::abs(a(i, j) - a(j, i)) > kSymmetryTol) {
        throw std::invalid_argument("build_laplacian: adjacency asymmetric at (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
  LaplacianPair lp;
  lp.degree = Matrix::Zero(a.rows(), a.cols());
  lp.degree.diagonal() = a.rowwise().sum();
  lp.laplacian = lp.degree - a;
  return lp;
}

// Symmetric renormalization with self-loops: D~^{-1/2} (A + I) D~^{-1/2}.
// Degrees of A + I are >= 1, so this is defined for every valid graph.
inline Matrix normalize_adjacency(const Graph& g) {
  const Eigen::Index n = g.adjacency.rows();
  Matrix with_loops = g.adjacency + Matrix::Identity(n, n);
  Vector inv_sqrt_deg = with_loops.rowwise().sum().array().sqrt().inverse();
  return inv_sqrt_deg.asDiagonal() * with_loops * inv_sqrt_deg.asDiagonal();
}

}  // namespace bgopt
