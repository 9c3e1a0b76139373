#include "fairkg/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "fairkg/error.hpp"

namespace fairkg {

const Tensor& Var::value() const { return tape_->value(*this); }

Var Tape::leaf(Tensor value) {
  nodes_.push_back(Node{std::move(value), Tensor{}, true, false, nullptr});
  return Var(this, nodes_.size() - 1);
}

Var Tape::constant(Tensor value) {
  nodes_.push_back(Node{std::move(value), Tensor{}, false, false, nullptr});
  return Var(this, nodes_.size() - 1);
}

Var Tape::record(Tensor value, std::span<const Var> parents, BackwardFn fn) {
  bool tracked = false;
  for (const Var& p : parents) {
    if (&p.tape() != this) throw Error("operands recorded on different tapes");
    tracked = tracked || nodes_[p.id()].requires_grad;
  }
  nodes_.push_back(Node{std::move(value), Tensor{}, tracked, false, tracked ? std::move(fn) : nullptr});
  return Var(this, nodes_.size() - 1);
}

void Tape::backward(Var loss) {
  if (backward_done_) throw Error("backward() already ran on this tape; reset() it first");
  const Tensor& out = value(loss);
  if (out.size() != 1) {
    throw ShapeError("backward() needs a one-element loss, got shape " + shape_string(out.shape()));
  }
  backward_done_ = true;
  Node& root = nodes_[loss.id()];
  root.grad = Tensor(out.shape(), {1.0});
  root.has_grad = true;
  for (std::size_t i = loss.id() + 1; i-- > 0;) {
    Node& node = nodes_[i];
    if (!node.has_grad || !node.backward) continue;
    node.backward(*this, node.value, node.grad);
  }
}

Tensor Tape::grad(Var v) const {
  const Node& node = nodes_[v.id()];
  if (!node.has_grad) return Tensor::zeros_like(node.value);
  return node.grad;
}

Tensor& Tape::grad_buffer(Var v) {
  Node& node = nodes_[v.id()];
  if (!node.has_grad) {
    node.grad = Tensor::zeros_like(node.value);
    node.has_grad = true;
  }
  return node.grad;
}

void Tape::reset() {
  nodes_.clear();
  backward_done_ = false;
}

namespace {

void require_rank(const Tensor& t, std::size_t rank, const char* op) {
  if (t.rank() != rank) {
    throw ShapeError(std::string(op) + ": expected rank " + std::to_string(rank) + ", got shape " +
                     shape_string(t.shape()));
  }
}

bool tracked(const Var& v) { return v.tape().requires_grad(v); }

double sign(double x) { return (x > 0.0) - (x < 0.0); }

// Derivative of (sum |x|^k)^(1/k) given the norm value.
void accumulate_p_norm_grad(std::span<const double> x, double norm, int k, double upstream,
                            std::span<double> out) {
  if (norm == 0.0 || upstream == 0.0) return;
  if (k == 1) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] += upstream * sign(x[i]);
  } else if (k == 2) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] += upstream * x[i] / norm;
  } else {
    const double denom = std::pow(norm, k - 1);
    for (std::size_t i = 0; i < x.size(); ++i) {
      out[i] += upstream * sign(x[i]) * std::pow(std::abs(x[i]), k - 1) / denom;
    }
  }
}

}  // namespace

Var add(Var a, Var b) {
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  require_same_shape(av, bv, "add");
  Tensor out = av;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += bv[i];
  const Var parents[] = {a, b};
  return a.tape().record(std::move(out), parents, [a, b](Tape& t, const Tensor&, const Tensor& g) {
    for (const Var& p : {a, b}) {
      if (!tracked(p)) continue;
      Tensor& buf = t.grad_buffer(p);
      for (std::size_t i = 0; i < g.size(); ++i) buf[i] += g[i];
    }
  });
}

Var sub(Var a, Var b) {
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  require_same_shape(av, bv, "sub");
  Tensor out = av;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= bv[i];
  const Var parents[] = {a, b};
  return a.tape().record(std::move(out), parents, [a, b](Tape& t, const Tensor&, const Tensor& g) {
    if (tracked(a)) {
      Tensor& buf = t.grad_buffer(a);
      for (std::size_t i = 0; i < g.size(); ++i) buf[i] += g[i];
    }
    if (tracked(b)) {
      Tensor& buf = t.grad_buffer(b);
      for (std::size_t i = 0; i < g.size(); ++i) buf[i] -= g[i];
    }
  });
}

Var add_n(std::span<const Var> terms) {
  if (terms.empty()) throw ShapeError("add_n: no operands");
  Tensor out = terms[0].value();
  for (std::size_t k = 1; k < terms.size(); ++k) {
    const Tensor& v = terms[k].value();
    require_same_shape(out, v, "add_n");
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += v[i];
  }
  std::vector<Var> captured(terms.begin(), terms.end());
  return terms[0].tape().record(std::move(out), terms, [captured](Tape& t, const Tensor&, const Tensor& g) {
    for (const Var& p : captured) {
      if (!tracked(p)) continue;
      Tensor& buf = t.grad_buffer(p);
      for (std::size_t i = 0; i < g.size(); ++i) buf[i] += g[i];
    }
  });
}

Var scale(Var a, double factor) {
  Tensor out = a.value();
  for (double& v : out.values()) v *= factor;
  const Var parents[] = {a};
  return a.tape().record(std::move(out), parents, [a, factor](Tape& t, const Tensor&, const Tensor& g) {
    Tensor& buf = t.grad_buffer(a);
    for (std::size_t i = 0; i < g.size(); ++i) buf[i] += factor * g[i];
  });
}

Var hadamard(Var a, Var b) {
  Tensor out = hadamard(a.value(), b.value());
  const Var parents[] = {a, b};
  return a.tape().record(std::move(out), parents, [a, b](Tape& t, const Tensor&, const Tensor& g) {
    const Tensor& av = a.value();
    const Tensor& bv = b.value();
    if (tracked(a)) {
      Tensor& buf = t.grad_buffer(a);
      for (std::size_t i = 0; i < g.size(); ++i) buf[i] += g[i] * bv[i];
    }
    if (tracked(b)) {
      Tensor& buf = t.grad_buffer(b);
      for (std::size_t i = 0; i < g.size(); ++i) buf[i] += g[i] * av[i];
    }
  });
}

Var sum(Var a) {
  double total = 0.0;
  for (double v : a.value().values()) total += v;
  const Var parents[] = {a};
  return a.tape().record(Tensor::scalar(total), parents, [a](Tape& t, const Tensor&, const Tensor& g) {
    Tensor& buf = t.grad_buffer(a);
    const double up = g[0];
    for (double& v : buf.values()) v += up;
  });
}

Var mean(Var a) {
  const std::size_t n = a.value().size();
  if (n == 0) throw ShapeError("mean of an empty tensor");
  return scale(sum(a), 1.0 / static_cast<double>(n));
}

Var linear(Var x, Var weight) {
  const Tensor& xv = x.value();
  const Tensor& wv = weight.value();
  require_rank(wv, 2, "linear");
  if (xv.rank() != 1 && xv.rank() != 2) require_rank(xv, 2, "linear");
  const std::size_t n = xv.rows();
  const std::size_t din = xv.cols();
  const std::size_t dout = wv.rows();
  if (wv.cols() != din) {
    throw ShapeError("linear: weight " + shape_string(wv.shape()) + " cannot map rows of " +
                     shape_string(xv.shape()));
  }
  Tensor out(xv.rank() == 1 ? Shape{dout} : Shape{n, dout});
  for (std::size_t i = 0; i < n; ++i) {
    const double* xr = xv.data() + i * din;
    double* orow = out.data() + i * dout;
    for (std::size_t o = 0; o < dout; ++o) {
      const double* wr = wv.data() + o * din;
      double acc = 0.0;
      for (std::size_t j = 0; j < din; ++j) acc += wr[j] * xr[j];
      orow[o] = acc;
    }
  }
  const Var parents[] = {x, weight};
  return x.tape().record(std::move(out), parents, [x, weight, n, din, dout](Tape& t, const Tensor&, const Tensor& g) {
    const Tensor& xv = x.value();
    const Tensor& wv = weight.value();
    if (tracked(x)) {
      Tensor& buf = t.grad_buffer(x);
      for (std::size_t i = 0; i < n; ++i) {
        const double* gr = g.data() + i * dout;
        double* br = buf.data() + i * din;
        for (std::size_t o = 0; o < dout; ++o) {
          const double go = gr[o];
          if (go == 0.0) continue;
          const double* wr = wv.data() + o * din;
          for (std::size_t j = 0; j < din; ++j) br[j] += go * wr[j];
        }
      }
    }
    if (tracked(weight)) {
      Tensor& buf = t.grad_buffer(weight);
      for (std::size_t i = 0; i < n; ++i) {
        const double* gr = g.data() + i * dout;
        const double* xr = xv.data() + i * din;
        for (std::size_t o = 0; o < dout; ++o) {
          const double go = gr[o];
          if (go == 0.0) continue;
          double* br = buf.data() + o * din;
          for (std::size_t j = 0; j < din; ++j) br[j] += go * xr[j];
        }
      }
    }
  });
}

Var gather_rows(Var x, std::span<const std::uint32_t> indices) {
  const Tensor& xv = x.value();
  require_rank(xv, 2, "gather_rows");
  const std::size_t d = xv.cols();
  Tensor out(Shape{indices.size(), d});
  for (std::size_t e = 0; e < indices.size(); ++e) {
    if (indices[e] >= xv.rows()) throw ShapeError("gather_rows: index out of range");
    const auto src = xv.row(indices[e]);
    std::copy(src.begin(), src.end(), out.row(e).begin());
  }
  std::vector<std::uint32_t> idx(indices.begin(), indices.end());
  const Var parents[] = {x};
  return x.tape().record(std::move(out), parents, [x, idx = std::move(idx), d](Tape& t, const Tensor&, const Tensor& g) {
    Tensor& buf = t.grad_buffer(x);
    for (std::size_t e = 0; e < idx.size(); ++e) {
      const double* gr = g.data() + e * d;
      double* br = buf.data() + static_cast<std::size_t>(idx[e]) * d;
      for (std::size_t j = 0; j < d; ++j) br[j] += gr[j];
    }
  });
}

Var scatter_rows(Var x, std::span<const std::uint32_t> dst, std::span<const double> coef,
                 std::size_t n_rows) {
  const Tensor& xv = x.value();
  require_rank(xv, 2, "scatter_rows");
  if (dst.size() != xv.rows() || (!coef.empty() && coef.size() != dst.size())) {
    throw ShapeError("scatter_rows: index/coefficient count does not match row count");
  }
  const std::size_t d = xv.cols();
  Tensor out(Shape{n_rows, d});
  for (std::size_t e = 0; e < dst.size(); ++e) {
    if (dst[e] >= n_rows) throw ShapeError("scatter_rows: destination out of range");
    const double c = coef.empty() ? 1.0 : coef[e];
    const double* xr = xv.data() + e * d;
    double* orow = out.data() + static_cast<std::size_t>(dst[e]) * d;
    for (std::size_t j = 0; j < d; ++j) orow[j] += c * xr[j];
  }
  std::vector<std::uint32_t> idx(dst.begin(), dst.end());
  std::vector<double> cs(coef.begin(), coef.end());
  const Var parents[] = {x};
  return x.tape().record(std::move(out), parents,
                         [x, idx = std::move(idx), cs = std::move(cs), d](Tape& t, const Tensor&, const Tensor& g) {
                           Tensor& buf = t.grad_buffer(x);
                           for (std::size_t e = 0; e < idx.size(); ++e) {
                             const double c = cs.empty() ? 1.0 : cs[e];
                             const double* gr = g.data() + static_cast<std::size_t>(idx[e]) * d;
                             double* br = buf.data() + e * d;
                             for (std::size_t j = 0; j < d; ++j) br[j] += c * gr[j];
                           }
                         });
}

Var row_sum(Var x) {
  const Tensor& xv = x.value();
  require_rank(xv, 2, "row_sum");
  const std::size_t n = xv.rows();
  const std::size_t d = xv.cols();
  Tensor out(Shape{n});
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (double v : xv.row(i)) acc += v;
    out[i] = acc;
  }
  const Var parents[] = {x};
  return x.tape().record(std::move(out), parents, [x, n, d](Tape& t, const Tensor&, const Tensor& g) {
    Tensor& buf = t.grad_buffer(x);
    for (std::size_t i = 0; i < n; ++i) {
      double* br = buf.data() + i * d;
      for (std::size_t j = 0; j < d; ++j) br[j] += g[i];
    }
  });
}

Var p_norm(Var x, int k) {
  if (k < 1) throw Error("p_norm: order must be >= 1");
  const double norm = p_norm(x.value().values(), k);
  const Var parents[] = {x};
  return x.tape().record(Tensor::scalar(norm), parents, [x, k, norm](Tape& t, const Tensor&, const Tensor& g) {
    Tensor& buf = t.grad_buffer(x);
    accumulate_p_norm_grad(x.value().values(), norm, k, g[0], buf.values());
  });
}

Var row_p_norm(Var x, int k) {
  if (k < 1) throw Error("row_p_norm: order must be >= 1");
  const Tensor& xv = x.value();
  require_rank(xv, 2, "row_p_norm");
  const std::size_t n = xv.rows();
  Tensor out(Shape{n});
  for (std::size_t i = 0; i < n; ++i) out[i] = p_norm(xv.row(i), k);
  Tensor norms = out;
  const Var parents[] = {x};
  return x.tape().record(std::move(out), parents, [x, k, norms = std::move(norms)](Tape& t, const Tensor&, const Tensor& g) {
    Tensor& buf = t.grad_buffer(x);
    const Tensor& xv = x.value();
    for (std::size_t i = 0; i < norms.size(); ++i) {
      accumulate_p_norm_grad(xv.row(i), norms[i], k, g[i], buf.row(i));
    }
  });
}

namespace {

template <class Fwd, class Deriv>
Var elementwise(Var x, Fwd fwd, Deriv deriv) {
  Tensor out = x.value();
  for (double& v : out.values()) v = fwd(v);
  const Var parents[] = {x};
  return x.tape().record(std::move(out), parents, [x, deriv](Tape& t, const Tensor& y, const Tensor& g) {
    Tensor& buf = t.grad_buffer(x);
    const Tensor& xv = x.value();
    for (std::size_t i = 0; i < g.size(); ++i) buf[i] += g[i] * deriv(xv[i], y[i]);
  });
}

}  // namespace

Var sigmoid(Var x) {
  return elementwise(
      x, [](double v) { return sigmoid(v); }, [](double, double y) { return y * (1.0 - y); });
}

Var log_sigmoid(Var x) {
  return elementwise(
      x, [](double v) { return log_sigmoid(v); }, [](double v, double) { return sigmoid(-v); });
}

Var tanh(Var x) {
  return elementwise(
      x, [](double v) { return std::tanh(v); }, [](double, double y) { return 1.0 - y * y; });
}

Var relu(Var x) {
  return elementwise(
      x, [](double v) { return v > 0.0 ? v : 0.0; }, [](double v, double) { return v > 0.0 ? 1.0 : 0.0; });
}

Var bce_with_logits(Var logits, std::span<const double> labels) {
  const Tensor& lv = logits.value();
  if (lv.size() != labels.size()) throw ShapeError("bce_with_logits: label count mismatch");
  if (lv.size() == 0) throw ShapeError("bce_with_logits: empty batch");
  const double n = static_cast<double>(lv.size());
  double total = 0.0;
  for (std::size_t i = 0; i < lv.size(); ++i) {
    const double y = labels[i];
    total += y * softplus(-lv[i]) + (1.0 - y) * softplus(lv[i]);
  }
  std::vector<double> ys(labels.begin(), labels.end());
  const Var parents[] = {logits};
  return logits.tape().record(Tensor::scalar(total / n), parents,
                              [logits, ys = std::move(ys), n](Tape& t, const Tensor&, const Tensor& g) {
                                Tensor& buf = t.grad_buffer(logits);
                                const Tensor& lv = logits.value();
                                for (std::size_t i = 0; i < ys.size(); ++i) {
                                  buf[i] += g[0] * (sigmoid(lv[i]) - ys[i]) / n;
                                }
                              });
}

double p_norm(std::span<const double> x, int k) {
  if (k < 1) throw Error("p_norm: order must be >= 1");
  if (k == 1) {
    double acc = 0.0;
    for (double v : x) acc += std::abs(v);
    return acc;
  }
  if (k == 2) {
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return std::sqrt(acc);
  }
  double acc = 0.0;
  for (double v : x) acc += std::pow(std::abs(v), k);
  return std::pow(acc, 1.0 / k);
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double log_sigmoid(double x) { return -softplus(-x); }

Tensor hadamard(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "hadamard");
  Tensor out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b[i];
  return out;
}

}  // namespace fairkg
