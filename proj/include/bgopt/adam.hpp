#pragma once

#include <stdexcept>
#include <vector>

#include "bgopt/matrix.hpp"

namespace bgopt {

// Bias-corrected adaptive-moment optimizer state. Moments are shape-aligned
// with the parameter list they were built from.
struct AdamState {
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  long step = 0;
  std::vector<Matrix> first_moment;
  std::vector<Matrix> second_moment;

  AdamState() = default;
  explicit AdamState(const std::vector<Matrix>& params, double lr = 0.01) : learning_rate(lr) {
    first_moment.reserve(params.size());
    second_moment.reserve(params.size());
    for (const Matrix& p : params) {
      first_moment.push_back(Matrix::Zero(p.rows(), p.cols()));
      second_moment.push_back(Matrix::Zero(p.rows(), p.cols()));
    }
  }
};

inline void adam_update(std::vector<Matrix>& params, const std::vector<Matrix>& grads,
                        AdamState& state) {
  if (params.size() != grads.size() || params.size() != state.first_moment.size()) {
    throw std::invalid_argument("adam_update: " + std::to_string(params.size()) + " params, " +
                                std::to_string(grads.size()) + " grads, " +
                                std::to_string(state.first_moment.size()) + " moment slots");
  }
  ++state.step;
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (size_t i = 0; i < params.size(); ++i) {
    if (params[i].rows() != grads[i].rows() || params[i].cols() != grads[i].cols()) {
      throw std::invalid_argument("adam_update: param " + std::to_string(i) + " is " +
                                  shape_str(params[i]) + " but grad is " + shape_str(grads[i]));
    }
    Matrix& m = state.first_moment[i];
    Matrix& v = state.second_moment[i];
    m = state.beta1 * m + (1.0 - state.beta1) * grads[i];
    v = state.beta2 * v.array().matrix() + (1.0 - state.beta2) * grads[i].array().square().matrix();
    params[i].array() -=
        state.learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + state.epsilon);
  }
}

}  // namespace bgopt
