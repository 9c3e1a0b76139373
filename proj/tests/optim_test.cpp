#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "fairkg/autodiff.hpp"
#include "fairkg/error.hpp"
#include "fairkg/optim.hpp"

namespace fairkg {
namespace {

TEST(Adam, ZeroGradientLeavesParametersUnchanged) {
  std::vector<Tensor> params{Tensor::vector({1.0, -2.0})};
  const std::vector<Tensor> grads{Tensor::vector({0.0, 0.0})};
  AdamState state;
  adam_step(params, grads, state);
  EXPECT_EQ(params[0], Tensor::vector({1.0, -2.0}));
}

TEST(Adam, FirstStepMovesByLearningRate) {
  // m = 0.1, v = 0.001, both bias corrections give 1, so the step is
  // lr * 1 / (1 + eps).
  AdamOptions o;
  o.learning_rate = 0.1;
  AdamState state(o);
  std::vector<Tensor> params{Tensor::scalar(1.0)};
  const std::vector<Tensor> grads{Tensor::scalar(1.0)};
  adam_step(params, grads, state);
  EXPECT_NEAR(params[0].item(), 1.0 - 0.1 / (1.0 + 1e-8), 1e-15);
  EXPECT_NEAR(params[0].item(), 0.9, 1e-8);
}

TEST(Adam, TwoStepsFollowMomentRecursion) {
  AdamOptions o;
  o.learning_rate = 0.1;
  AdamState state(o);
  std::vector<Tensor> params{Tensor::scalar(1.0)};
  const std::vector<Tensor> grads{Tensor::scalar(1.0)};
  adam_step(params, grads, state);
  adam_step(params, grads, state);
  EXPECT_EQ(state.step, 2u);
  // With a constant gradient g: m_t = g (1 - b1^t), v_t = g^2 (1 - b2^t).
  EXPECT_NEAR(state.first_moment[0].item(), 1.0 - 0.9 * 0.9, 1e-15);
  EXPECT_NEAR(state.second_moment[0].item(), 1.0 - 0.999 * 0.999, 1e-15);
  EXPECT_NEAR(params[0].item(), 1.0 - 2.0 * 0.1 / (1.0 + 1e-8), 1e-12);
}

TEST(Adam, DecoupledWeightDecayScalesBeforeUpdate) {
  AdamOptions o;
  o.learning_rate = 0.1;
  o.weight_decay = 0.5;
  AdamState state(o);
  std::vector<Tensor> params{Tensor::scalar(2.0)};
  const std::vector<Tensor> grads{Tensor::scalar(0.0)};
  adam_step(params, grads, state);
  EXPECT_NEAR(params[0].item(), 2.0 * (1.0 - 0.1 * 0.5), 1e-15);
}

TEST(Adam, NonFiniteGradientNamesParameter) {
  AdamState state;
  std::vector<Tensor> params{Tensor::scalar(1.0), Tensor::scalar(2.0)};
  const std::vector<Tensor> grads{Tensor::scalar(0.5), Tensor::scalar(std::numeric_limits<double>::quiet_NaN())};
  const std::vector<std::string> names{"alpha", "beta"};
  try {
    adam_step(params, grads, state, names);
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("beta"), std::string::npos);
  }
  EXPECT_EQ(params[0].item(), 1.0);
  EXPECT_EQ(state.step, 0u);
}

TEST(Adam, MismatchedShapesRejected) {
  AdamState state;
  std::vector<Tensor> params{Tensor::vector({1, 2})};
  const std::vector<Tensor> grads{Tensor::vector({1, 2, 3})};
  EXPECT_THROW(adam_step(params, grads, state), ShapeError);
}

TEST(Adam, StepCounterIncreases) {
  AdamState state;
  std::vector<Tensor> params{Tensor::scalar(1.0)};
  const std::vector<Tensor> grads{Tensor::scalar(0.3)};
  for (std::uint64_t i = 1; i <= 5; ++i) {
    adam_step(params, grads, state);
    EXPECT_EQ(state.step, i);
    EXPECT_EQ(state.first_moment[0].shape(), params[0].shape());
  }
}

TEST(FiniteDiff, SumOfSquares) {
  const Tensor g = finite_diff_grad(
      [](const Tensor& x) {
        double acc = 0.0;
        for (double v : x.values()) acc += v * v;
        return acc;
      },
      Tensor::vector({1, 2}), 1e-5);
  EXPECT_NEAR(g[0], 2.0, 1e-8);
  EXPECT_NEAR(g[1], 4.0, 1e-8);
}

TEST(FiniteDiff, SigmoidSlopeAtZero) {
  const Tensor g = finite_diff_grad([](const Tensor& x) { return sigmoid(x[0]); }, Tensor::vector({0.0}));
  EXPECT_NEAR(g[0], 0.25, 1e-8);
}

TEST(FiniteDiff, RejectsNonPositiveStep) {
  EXPECT_THROW(finite_diff_grad([](const Tensor&) { return 0.0; }, Tensor::vector({1}), 0.0), Error);
}

}  // namespace
}  // namespace fairkg
