#pragma once

// Reverse-mode differentiation over whole tensors.
//
// A Tape owns every intermediate value of one forward pass. Nodes are
// appended in evaluation order, so walking the node list backwards is a
// reverse topological traversal. Nodes that do not depend on any leaf carry
// no backward closure, which makes a tape built only from constants a plain
// (non-recording) evaluator.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "fairkg/tensor.hpp"

namespace fairkg {

class Tape;

/// Handle to a node on a Tape.
class Var {
 public:
  Var() = default;

  Tape& tape() const { return *tape_; }
  std::size_t id() const noexcept { return id_; }
  bool valid() const noexcept { return tape_ != nullptr; }
  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = std::numeric_limits<std::size_t>::max();
};

class Tape {
 public:
  /// Receives the node value and the gradient flowing into it, and pushes
  /// contributions to its parents through Tape::grad_buffer.
  using BackwardFn = std::function<void(Tape&, const Tensor& out_value, const Tensor& out_grad)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Gradient-tracked input.
  Var leaf(Tensor value);
  /// Untracked input.
  Var constant(Tensor value);

  /// Appends an operation result. `fn` is dropped when no parent is tracked.
  Var record(Tensor value, std::span<const Var> parents, BackwardFn fn);

  const Tensor& value(Var v) const { return nodes_[v.id()].value; }
  bool requires_grad(Var v) const { return nodes_[v.id()].requires_grad; }

  /// Runs reverse accumulation from a one-element loss. A tape may be
  /// differentiated once; call reset() before recording a new pass.
  void backward(Var loss);

  /// Gradient of the last backward() with respect to `v`; zeros when `v`
  /// was not reached from the loss.
  Tensor grad(Var v) const;

  /// Accumulator for node `id`, allocated on first use. Only valid during
  /// backward().
  Tensor& grad_buffer(Var v);

  bool backward_done() const noexcept { return backward_done_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  void reset();

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    bool requires_grad = false;
    bool has_grad = false;
    BackwardFn backward;
  };

  std::vector<Node> nodes_;
  bool backward_done_ = false;
};

// ---------------------------------------------------------------------------
// Differentiable operations. All operands must live on the same tape.

Var add(Var a, Var b);
Var sub(Var a, Var b);
/// Sum of equally shaped operands.
Var add_n(std::span<const Var> terms);
Var scale(Var a, double factor);
/// Elementwise product; shapes must match.
Var hadamard(Var a, Var b);
/// Sum of all elements, as a scalar.
Var sum(Var a);
Var mean(Var a);

/// Maps every row x of `x` to W x. `x` is (n, d_in) or (d_in), `weight` is
/// (d_out, d_in).
Var linear(Var x, Var weight);

/// Rows of a matrix picked by index; result is (indices.size(), cols).
Var gather_rows(Var x, std::span<const std::uint32_t> indices);

/// out[dst[e]] += coef[e] * x[e] over all rows e of x; result is (n_rows, cols).
/// An empty `coef` means every coefficient is 1.
Var scatter_rows(Var x, std::span<const std::uint32_t> dst, std::span<const double> coef,
                 std::size_t n_rows);

/// Per-row sum of a matrix, giving a vector.
Var row_sum(Var x);

/// (sum |x_i|^k)^(1/k) over every element, as a scalar. The gradient at x = 0
/// is zero.
Var p_norm(Var x, int k);
/// p_norm applied to every row of a matrix, giving a vector.
Var row_p_norm(Var x, int k);

Var sigmoid(Var x);
/// ln(sigmoid(x)) evaluated without overflow.
Var log_sigmoid(Var x);
Var tanh(Var x);
Var relu(Var x);

/// Mean binary cross-entropy of sigmoid(logits) against 0/1 labels.
Var bce_with_logits(Var logits, std::span<const double> labels);

// ---------------------------------------------------------------------------
// Evaluated helpers sharing the same numerics.

double p_norm(std::span<const double> x, int k);
double sigmoid(double x);
double log_sigmoid(double x);
/// ln(1 + e^x) evaluated without overflow.
double softplus(double x);
Tensor hadamard(const Tensor& a, const Tensor& b);

}  // namespace fairkg
