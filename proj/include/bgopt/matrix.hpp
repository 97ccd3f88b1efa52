#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace bgopt {

// Row-major double matrices everywhere; the graphs are small enough that a
// dense representation is the honest one.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

enum class Activation { identity, relu, sigmoid, softplus };

inline std::string shape_str(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline double softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

inline void apply_activation_inplace(Matrix& m, Activation act) {
  switch (act) {
    case Activation::identity:
      return;
    case Activation::relu:
      m = m.cwiseMax(0.0);
      return;
    case Activation::sigmoid:
      m = m.unaryExpr([](double v) { return sigmoid(v); });
      return;
    case Activation::softplus:
      m = m.unaryExpr([](double v) { return softplus(v); });
      return;
  }
}

// out[i][j] = act(sum_k input[i][k] * weights[k][j] + bias[j]); bias is 1 x cols.
inline Matrix dense_forward(const Matrix& input, const Matrix& weights, const Matrix& bias,
                            Activation act) {
  if (input.cols() != weights.rows()) {
    throw std::invalid_argument("dense_forward: input " + shape_str(input) +
                                " incompatible with weights " + shape_str(weights));
  }
  if (bias.rows() != 1 || bias.cols() != weights.cols()) {
    throw std::invalid_argument("dense_forward: bias " + shape_str(bias) +
                                " incompatible with weights " + shape_str(weights));
  }
  Matrix out = input * weights;
  out.rowwise() += bias.row(0);
  apply_activation_inplace(out, act);
  return out;
}

// Numerically stable row-wise softmax.
inline Matrix softmax_rows(const Matrix& logits) {
  Matrix p(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double m = logits.row(i).maxCoeff();
    p.row(i) = (logits.row(i).array() - m).exp();
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

struct CrossEntropyResult {
  double loss = 0.0;
  Matrix grad;  // zero on unmasked rows
};

// Mean negative log-likelihood over masked rows; gradient is (softmax - onehot) / n_masked.
inline CrossEntropyResult softmax_cross_entropy(const Matrix& logits,
                                                const std::vector<int>& labels,
                                                const std::vector<bool>& mask) {
  if (static_cast<Eigen::Index>(labels.size()) != logits.rows() ||
      static_cast<Eigen::Index>(mask.size()) != logits.rows()) {
    throw std::invalid_argument("softmax_cross_entropy: logits " + shape_str(logits) + " vs " +
                                std::to_string(labels.size()) + " labels, " +
                                std::to_string(mask.size()) + " mask entries");
  }
  long n_masked = 0;
  for (bool b : mask) n_masked += b ? 1 : 0;
  if (n_masked == 0) throw std::invalid_argument("softmax_cross_entropy: no training nodes");

  CrossEntropyResult res;
  res.grad = Matrix::Zero(logits.rows(), logits.cols());
  double total = 0.0;
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    if (!mask[static_cast<size_t>(i)]) continue;
    const int y = labels[static_cast<size_t>(i)];
    if (y < 0 || y >= logits.cols()) {
      throw std::invalid_argument("softmax_cross_entropy: label " + std::to_string(y) +
                                  " out of range for " + std::to_string(logits.cols()) +
                                  " classes (row " + std::to_string(i) + ")");
    }
    const double m = logits.row(i).maxCoeff();
    const double lse = m + std::log((logits.row(i).array() - m).exp().sum());
    total += lse - logits(i, y);
    Eigen::ArrayXd p = (logits.row(i).array() - lse).exp();
    res.grad.row(i) = p.matrix().transpose() / static_cast<double>(n_masked);
    res.grad(i, y) -= 1.0 / static_cast<double>(n_masked);
  }
  res.loss = total / static_cast<double>(n_masked);
  return res;
}

}  // namespace bgopt
