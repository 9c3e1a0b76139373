#include "fairkg/optim.hpp"

#include <cmath>

#include "fairkg/error.hpp"

namespace fairkg {

void adam_step(std::span<Tensor> params, std::span<const Tensor> grads, AdamState& state,
               std::span<const std::string> names) {
  if (params.size() != grads.size()) throw ShapeError("adam_step: parameter/gradient count mismatch");
  for (std::size_t p = 0; p < params.size(); ++p) {
    require_same_shape(params[p], grads[p], "adam_step");
    if (!grads[p].all_finite()) {
      const std::string name = p < names.size() ? names[p] : "#" + std::to_string(p);
      throw NumericError("adam_step: non-finite gradient for parameter " + name);
    }
  }
  if (state.first_moment.empty()) {
    for (const Tensor& t : params) {
      state.first_moment.push_back(Tensor::zeros_like(t));
      state.second_moment.push_back(Tensor::zeros_like(t));
    }
  } else if (state.first_moment.size() != params.size()) {
    throw ShapeError("adam_step: state was built for a different parameter list");
  }

  const AdamOptions& o = state.options;
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double bias1 = 1.0 - std::pow(o.beta1, t);
  const double bias2 = 1.0 - std::pow(o.beta2, t);
  const double decay = 1.0 - o.learning_rate * o.weight_decay;

  for (std::size_t p = 0; p < params.size(); ++p) {
    Tensor& param = params[p];
    const Tensor& grad = grads[p];
    Tensor& m = state.first_moment[p];
    Tensor& v = state.second_moment[p];
    require_same_shape(param, m, "adam_step");
    for (std::size_t i = 0; i < param.size(); ++i) {
      const double g = grad[i];
      m[i] = o.beta1 * m[i] + (1.0 - o.beta1) * g;
      v[i] = o.beta2 * v[i] + (1.0 - o.beta2) * g * g;
      const double m_hat = m[i] / bias1;
      const double v_hat = v[i] / bias2;
      if (o.weight_decay != 0.0) param[i] *= decay;
      param[i] -= o.learning_rate * m_hat / (std::sqrt(v_hat) + o.epsilon);
    }
  }
}

Tensor finite_diff_grad(const std::function<double(const Tensor&)>& f, const Tensor& x, double eps) {
  if (!(eps > 0.0)) throw Error("finite_diff_grad: step must be positive");
  Tensor grad = Tensor::zeros_like(x);
  Tensor probe = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = probe[i];
    probe[i] = orig + eps;
    const double up = f(probe);
    probe[i] = orig - eps;
    const double down = f(probe);
    probe[i] = orig;
    grad[i] = (up - down) / (2.0 * eps);
  }
  return grad;
}

}  // namespace fairkg
