#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "bgopt/matrix.hpp"

namespace bgopt {

// Central-difference gradients: (f(p+h) - f(p-h)) / 2h per parameter entry.
// The oracle every hand-derived backward pass in this repo is checked against.
inline std::vector<Matrix> finite_diff_grad(
    const std::function<double(const std::vector<Matrix>&)>& loss_fn, std::vector<Matrix> params,
    double h) {
  if (h <= 0.0) throw std::invalid_argument("finite_diff_grad: h must be positive");
  std::vector<Matrix> grads;
  grads.reserve(params.size());
  for (const Matrix& p : params) grads.push_back(Matrix::Zero(p.rows(), p.cols()));

  for (size_t k = 0; k < params.size(); ++k) {
    for (Eigen::Index i = 0; i < params[k].rows(); ++i) {
      for (Eigen::Index j = 0; j < params[k].cols(); ++j) {
        const double saved = params[k](i, j);
        params[k](i, j) = saved + h;
        const double up = loss_fn(params);
        params[k](i, j) = saved - h;
        const double down = loss_fn(params);
        params[k](i, j) = saved;
        if (!std::isfinite(up) || !std::isfinite(down)) {
          throw std::runtime_error("finite_diff_grad: non-finite loss at param " +
                                   std::to_string(k) + " entry (" + std::to_string(i) + "," +
                                   std::to_string(j) + ")");
        }
        grads[k](i, j) = (up - down) / (2.0 * h);
      }
    }
  }
  return grads;
}

// max over entries of |a - f| / max(floor, |a| + |f|)
inline double max_relative_gradient_error(const std::vector<Matrix>& analytic,
                                          const std::vector<Matrix>& numeric,
                                          double floor = 1e-6) {
  double worst = 0.0;
  for (size_t k = 0; k < analytic.size(); ++k) {
    for (Eigen::Index i = 0; i < analytic[k].rows(); ++i) {
      for (Eigen::Index j = 0; j < analytic[k].cols(); ++j) {
        const double a = analytic[k](i, j);
        const double f = numeric[k](i, j);
        const double rel = std::abs(a - f) / std::max(floor, std::abs(a) + std::abs(f));
        worst = std::max(worst, rel);
      }
    }
  }
  return worst;
}

}  // namespace bgopt
