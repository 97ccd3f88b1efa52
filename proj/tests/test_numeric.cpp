#include <catch2/catch_amalgamated.hpp>

#include "bgopt/adam.hpp"
#include "bgopt/gradcheck.hpp"
#include "bgopt/matrix.hpp"
#include "bgopt/rng.hpp"

using namespace bgopt;

namespace {

Matrix row1(std::initializer_list<double> vals) {
  Matrix m(1, static_cast<Eigen::Index>(vals.size()));
  Eigen::Index j = 0;
  for (double v : vals) m(0, j++) = v;
  return m;
}

}  // namespace

TEST_CASE("dense_forward matches hand computations", "[numeric]") {
  SECTION("zero input through identity weights") {
    Matrix in = row1({0.0});
    Matrix w = Matrix::Identity(1, 1);
    Matrix b = Matrix::Zero(1, 1);
    Matrix out = dense_forward(in, w, b, Activation::relu);
    REQUIRE(out(0, 0) == 0.0);
  }
  SECTION("sigmoid fixed point at zero pre-activation") {
    Matrix in = row1({2.0});
    Matrix w = row1({3.0}).transpose();
    Matrix b = row1({-6.0});
    Matrix out = dense_forward(in, w, b, Activation::sigmoid);
    REQUIRE_THAT(out(0, 0), Catch::Matchers::WithinAbs(0.5, 1e-15));
  }
  SECTION("hand matrix product") {
    Matrix in = row1({1.0, 2.0});
    Matrix w(2, 1);
    w << 1.0, 1.0;
    Matrix b = Matrix::Zero(1, 1);
    Matrix out = dense_forward(in, w, b, Activation::relu);
    REQUIRE(out(0, 0) == 3.0);
  }
}

TEST_CASE("dense_forward with identity weights is the identity map", "[numeric]") {
  Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 2 + rng.uniform_int(5);
    const int d = 1 + rng.uniform_int(6);
    Matrix in(n, d);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j) in(i, j) = rng.normal();
    Matrix out = dense_forward(in, Matrix::Identity(d, d), Matrix::Zero(1, d),
                               Activation::identity);
    REQUIRE(out == in);
  }
}

TEST_CASE("dense_forward names both shapes on mismatch", "[numeric]") {
  Matrix in = Matrix::Zero(2, 3);
  Matrix w = Matrix::Zero(4, 1);
  REQUIRE_THROWS_WITH(dense_forward(in, w, Matrix::Zero(1, 1), Activation::identity),
                      Catch::Matchers::ContainsSubstring("2x3") &&
                          Catch::Matchers::ContainsSubstring("4x1"));
}

TEST_CASE("softmax cross entropy scalar cases", "[numeric]") {
  std::vector<bool> mask = {true};
  SECTION("uniform logits") {
    auto res = softmax_cross_entropy(row1({0.0, 0.0}), {0}, mask);
    REQUIRE_THAT(res.loss, Catch::Matchers::WithinAbs(std::log(2.0), 1e-12));
  }
  SECTION("saturated correct logit") {
    auto res = softmax_cross_entropy(row1({1000.0, 0.0}), {0}, mask);
    REQUIRE_THAT(res.loss, Catch::Matchers::WithinAbs(0.0, 1e-12));
  }
  SECTION("logits [1,2]") {
    // -log softmax([1,2])[k]: 0.3133 for the larger logit, 1.3133 for the smaller
    auto larger = softmax_cross_entropy(row1({1.0, 2.0}), {1}, mask);
    REQUIRE_THAT(larger.loss, Catch::Matchers::WithinAbs(std::log(1.0 + std::exp(1.0)) - 1.0, 1e-12));
    auto smaller = softmax_cross_entropy(row1({1.0, 2.0}), {0}, mask);
    REQUIRE_THAT(smaller.loss, Catch::Matchers::WithinAbs(std::log(1.0 + std::exp(1.0)), 1e-12));
  }
}

TEST_CASE("softmax cross entropy mask and gradient discipline", "[numeric]") {
  Matrix logits(3, 4);
  logits << 0.3, -1.2, 0.7, 0.1, 2.0, 0.0, -0.5, 1.1, -0.4, 0.9, 0.2, -2.0;
  std::vector<int> labels = {2, 0, 1};
  std::vector<bool> mask = {true, false, true};

  auto res = softmax_cross_entropy(logits, labels, mask);
  REQUIRE(res.grad.row(1).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE_THAT(res.grad.row(0).sum(), Catch::Matchers::WithinAbs(0.0, 1e-14));
  REQUIRE_THAT(res.grad.row(2).sum(), Catch::Matchers::WithinAbs(0.0, 1e-14));

  REQUIRE_THROWS_WITH(softmax_cross_entropy(logits, labels, {false, false, false}),
                      Catch::Matchers::ContainsSubstring("no training nodes"));

  // analytic gradient vs central differences, logits treated as the parameter
  auto loss_of = [&](const std::vector<Matrix>& p) {
    return softmax_cross_entropy(p[0], labels, mask).loss;
  };
  auto numeric = finite_diff_grad(loss_of, {logits}, 1e-6);
  REQUIRE(max_relative_gradient_error({res.grad}, numeric) < 1e-4);
}

TEST_CASE("adaptive moment update", "[numeric]") {
  SECTION("zero gradient leaves params unchanged") {
    std::vector<Matrix> params = {row1({1.5, -2.0})};
    std::vector<Matrix> grads = {Matrix::Zero(1, 2)};
    AdamState st(params, 0.05);
    Matrix before = params[0];
    adam_update(params, grads, st);
    REQUIRE(params[0] == before);
    REQUIRE(st.step == 1);
  }
  SECTION("first step moves by about lr * sign(grad)") {
    std::vector<Matrix> params = {row1({0.0, 0.0})};
    std::vector<Matrix> grads = {row1({2.0, -0.3})};
    const double lr = 0.01;
    AdamState st(params, lr);
    adam_update(params, grads, st);
    REQUIRE_THAT(params[0](0, 0), Catch::Matchers::WithinAbs(-lr, lr * 1e-6));
    REQUIRE_THAT(params[0](0, 1), Catch::Matchers::WithinAbs(lr, lr * 1e-6));
  }
  SECTION("deterministic given cloned state") {
    std::vector<Matrix> params_a = {row1({0.4, -0.7, 1.2})};
    std::vector<Matrix> grads = {row1({0.3, 0.1, -0.9})};
    AdamState st_a(params_a, 0.01);
    std::vector<Matrix> params_b = params_a;
    AdamState st_b = st_a;
    for (int i = 0; i < 5; ++i) {
      adam_update(params_a, grads, st_a);
      adam_update(params_b, grads, st_b);
    }
    REQUIRE(std::memcmp(params_a[0].data(), params_b[0].data(), 3 * sizeof(double)) == 0);
  }
  SECTION("shape mismatch throws") {
    std::vector<Matrix> params = {Matrix::Zero(2, 2)};
    std::vector<Matrix> grads = {Matrix::Zero(2, 3)};
    AdamState st(params);
    REQUIRE_THROWS_AS(adam_update(params, grads, st), std::invalid_argument);
  }
}

TEST_CASE("finite difference gradients", "[numeric]") {
  SECTION("quadratic") {
    auto f = [](const std::vector<Matrix>& p) { return p[0](0, 0) * p[0](0, 0); };
    auto g = finite_diff_grad(f, {row1({3.0})}, 1e-5);
    REQUIRE_THAT(g[0](0, 0), Catch::Matchers::WithinAbs(6.0, 1e-6));
  }
  SECTION("constant") {
    auto f = [](const std::vector<Matrix>&) { return 42.0; };
    auto g = finite_diff_grad(f, {Matrix::Zero(2, 3)}, 1e-5);
    REQUIRE(g[0].cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("sigmoid slope at zero") {
    auto f = [](const std::vector<Matrix>& p) { return sigmoid(p[0](0, 0)); };
    auto g = finite_diff_grad(f, {row1({0.0})}, 1e-5);
    REQUIRE_THAT(g[0](0, 0), Catch::Matchers::WithinAbs(0.25, 1e-6));
  }
  SECTION("non-finite loss is rejected") {
    auto f = [](const std::vector<Matrix>& p) { return std::log(p[0](0, 0)); };
    REQUIRE_THROWS_AS(finite_diff_grad(f, {row1({0.0})}, 1e-3), std::runtime_error);
  }
}

TEST_CASE("rng determinism and distribution sanity", "[numeric]") {
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) REQUIRE(a.uniform() == b.uniform());

  Rng n(99);
  double sum = 0.0, sumsq = 0.0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const double z = n.normal();
    sum += z;
    sumsq += z * z;
  }
  REQUIRE_THAT(sum / draws, Catch::Matchers::WithinAbs(0.0, 0.02));
  REQUIRE_THAT(sumsq / draws, Catch::Matchers::WithinAbs(1.0, 0.03));

  Rng u(5);
  std::vector<int> counts(4, 0);
  for (int i = 0; i < 40000; ++i) counts[static_cast<size_t>(u.uniform_int(4))]++;
  for (int c : counts) REQUIRE_THAT(c / 40000.0, Catch::Matchers::WithinAbs(0.25, 0.02));
}
