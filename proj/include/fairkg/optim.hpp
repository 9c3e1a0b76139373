#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fairkg/tensor.hpp"

namespace fairkg {

struct AdamOptions {
  double learning_rate = 0.005;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  /// Decoupled decay: every step first scales parameters by (1 - lr * wd).
  double weight_decay = 0.0;
};

/// Moment buffers for one parameter list.
struct AdamState {
  AdamOptions options;
  std::uint64_t step = 0;
  std::vector<Tensor> first_moment;
  std::vector<Tensor> second_moment;

  AdamState() = default;
  explicit AdamState(AdamOptions opts) : options(opts) {}
};

/// One bias-corrected Adam update of `params` in place. Moment buffers are
/// created on the first call. `names` labels parameters in error messages and
/// may be empty. Throws NumericError on a non-finite gradient, leaving every
/// parameter untouched.
void adam_step(std::span<Tensor> params, std::span<const Tensor> grads, AdamState& state,
               std::span<const std::string> names = {});

/// Central differences (f(x + eps e_i) - f(x - eps e_i)) / 2 eps per element.
Tensor finite_diff_grad(const std::function<double(const Tensor&)>& f, const Tensor& x,
                        double eps = 1e-6);

}  // namespace fairkg
