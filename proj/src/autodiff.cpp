#include "ignn/autodiff.hpp"

#include <cmath>
#include <random>

namespace ignn {

namespace {

#ifndef NDEBUG
void check_finite(const Matrix& m, const char* op) {
  if (!m.allFinite()) throw Error(std::string("non-finite values out of primitive ") + op);
}
#define IGNN_CHECK_FINITE(m, op) check_finite(m, op)
#else
#define IGNN_CHECK_FINITE(m, op) ((void)0)
#endif

}  // namespace

NodeId Tape::push(Matrix value, std::function<void(Tape&, const Matrix&)> pull) {
  nodes_.push_back(Node{std::move(value), std::move(pull)});
  return static_cast<NodeId>(nodes_.size()) - 1;
}

void Tape::accumulate(NodeId id, const Matrix& g) {
  Matrix& slot = grads_[static_cast<size_t>(id)];
  if (slot.size() == 0) {
    slot = g;
  } else {
    slot += g;
  }
}

NodeId Tape::constant(Matrix x) { return push(std::move(x), {}); }

NodeId Tape::parameter(Matrix w) {
  NodeId id = push(std::move(w), {});
  params_.push_back(id);
  return id;
}

NodeId Tape::matmul(NodeId a, NodeId b) {
  const Matrix& va = value(a);
  const Matrix& vb = value(b);
  if (va.cols() != vb.rows()) {
    throw DimensionError("matmul: " + std::to_string(va.rows()) + "x" + std::to_string(va.cols()) +
                         " times " + std::to_string(vb.rows()) + "x" + std::to_string(vb.cols()));
  }
  Matrix out = va * vb;
  IGNN_CHECK_FINITE(out, "matmul");
  return push(std::move(out), [a, b](Tape& t, const Matrix& g) {
    t.accumulate(a, g * t.value(b).transpose());
    t.accumulate(b, t.value(a).transpose() * g);
  });
}

NodeId Tape::spmm_const(const NormalizedAdjacency& a, NodeId x) {
  Matrix out = spmm(a, value(x));
  IGNN_CHECK_FINITE(out, "spmm_const");
  const NormalizedAdjacency* ap = &a;
  // A^ is symmetric, so the pullback is another spmm with the same matrix.
  return push(std::move(out),
              [ap, x](Tape& t, const Matrix& g) { t.accumulate(x, spmm(*ap, g)); });
}

NodeId Tape::spmm_const(const CsrMatrix& a, NodeId x) {
  Matrix out = spmm(a, value(x));
  IGNN_CHECK_FINITE(out, "spmm_const");
  const CsrMatrix* ap = &a;
  return push(std::move(out),
              [ap, x](Tape& t, const Matrix& g) { t.accumulate(x, spmm(*ap, g)); });
}

NodeId Tape::add(NodeId a, NodeId b) {
  const Matrix& va = value(a);
  const Matrix& vb = value(b);
  if (va.rows() != vb.rows() || va.cols() != vb.cols()) {
    throw DimensionError("add: shape mismatch");
  }
  Matrix out = va + vb;
  IGNN_CHECK_FINITE(out, "add");
  return push(std::move(out), [a, b](Tape& t, const Matrix& g) {
    t.accumulate(a, g);
    t.accumulate(b, g);
  });
}

NodeId Tape::affine(NodeId x, double scale, double shift) {
  Matrix out = (value(x).array() * scale + shift).matrix();
  IGNN_CHECK_FINITE(out, "affine");
  return push(std::move(out), [x, scale](Tape& t, const Matrix& g) {
    t.accumulate(x, (g.array() * scale).matrix());
  });
}

NodeId Tape::relu(NodeId x) {
  Matrix out = value(x).cwiseMax(0.0);
  IGNN_CHECK_FINITE(out, "relu");
  NodeId id = push(std::move(out), {});
  // relu'(0) = 0: the strict comparison below drops exact zeros.
  nodes_[static_cast<size_t>(id)].pull = [x, id](Tape& t, const Matrix& g) {
    Matrix gx = ((t.value(id).array() > 0.0).cast<double>() * g.array()).matrix();
    t.accumulate(x, gx);
  };
  return id;
}

NodeId Tape::sigmoid(NodeId x) {
  Matrix out = (1.0 / (1.0 + (-value(x).array()).exp())).matrix();
  IGNN_CHECK_FINITE(out, "sigmoid");
  NodeId id = push(std::move(out), {});
  nodes_[static_cast<size_t>(id)].pull = [x, id](Tape& t, const Matrix& g) {
    const auto s = t.value(id).array();
    t.accumulate(x, (g.array() * s * (1.0 - s)).matrix());
  };
  return id;
}

NodeId Tape::scale_rows(NodeId x, NodeId gate) {
  const Matrix& vx = value(x);
  const Matrix& vg = value(gate);
  if (vg.cols() != 1 || vg.rows() != vx.rows()) {
    throw DimensionError("scale_rows: gate must be Nx1 matching x rows");
  }
  Matrix out = (vx.array().colwise() * vg.col(0).array()).matrix();
  IGNN_CHECK_FINITE(out, "scale_rows");
  return push(std::move(out), [x, gate](Tape& t, const Matrix& g) {
    const Matrix& vx = t.value(x);
    const Matrix& vg = t.value(gate);
    t.accumulate(x, (g.array().colwise() * vg.col(0).array()).matrix());
    Matrix ggate(vx.rows(), 1);
    for (Index i = 0; i < vx.rows(); ++i) ggate(i, 0) = g.row(i).dot(vx.row(i));
    t.accumulate(gate, ggate);
  });
}

NodeId Tape::concat_cols(const std::vector<NodeId>& parts) {
  if (parts.empty()) throw DimensionError("concat_cols: no inputs");
  Index rows = value(parts[0]).rows();
  Index cols = 0;
  for (NodeId p : parts) {
    if (value(p).rows() != rows) throw DimensionError("concat_cols: row mismatch");
    cols += value(p).cols();
  }
  Matrix out(rows, cols);
  std::vector<Index> offsets;
  offsets.reserve(parts.size());
  Index at = 0;
  for (NodeId p : parts) {
    offsets.push_back(at);
    out.middleCols(at, value(p).cols()) = value(p);
    at += value(p).cols();
  }
  IGNN_CHECK_FINITE(out, "concat_cols");
  return push(std::move(out), [parts, offsets](Tape& t, const Matrix& g) {
    for (size_t i = 0; i < parts.size(); ++i) {
      t.accumulate(parts[i], g.middleCols(offsets[i], t.value(parts[i]).cols()));
    }
  });
}

NodeId Tape::dropout(NodeId x, double p, bool training, uint64_t seed) {
  if (p < 0.0 || p >= 1.0) throw ConfigError("dropout: p must lie in [0,1)");
  if (!training || p == 0.0) {
    // Identity, but still a node so replay layouts stay stable.
    return affine(x, 1.0, 0.0);
  }
  const Matrix& vx = value(x);
  Matrix mask(vx.rows(), vx.cols());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double keep_scale = 1.0 / (1.0 - p);
  for (Index i = 0; i < vx.rows(); ++i) {
    for (Index j = 0; j < vx.cols(); ++j) {
      mask(i, j) = unif(rng) < p ? 0.0 : keep_scale;
    }
  }
  NodeId mask_id = constant(std::move(mask));
  Matrix out = vx.cwiseProduct(value(mask_id));
  IGNN_CHECK_FINITE(out, "dropout");
  return push(std::move(out), [x, mask_id](Tape& t, const Matrix& g) {
    t.accumulate(x, g.cwiseProduct(t.value(mask_id)));
  });
}

NodeId Tape::softmax_cross_entropy(NodeId logits, const std::vector<int>& labels,
                                   const std::vector<Index>& mask) {
  const Matrix& z = value(logits);
  if (static_cast<Index>(labels.size()) != z.rows()) {
    throw DimensionError("softmax_cross_entropy: labels size != logit rows");
  }
  if (mask.empty()) throw DimensionError("softmax_cross_entropy: empty mask");
  for (Index i : mask) {
    if (i < 0 || i >= z.rows()) throw DimensionError("softmax_cross_entropy: mask index range");
    int c = labels[static_cast<size_t>(i)];
    if (c < 0 || c >= z.cols()) throw DimensionError("softmax_cross_entropy: label outside logits");
  }

  Matrix probs(z.rows(), z.cols());
  double loss = 0.0;
  for (Index i : mask) {
    double row_max = z.row(i).maxCoeff();
    Eigen::Array<double, 1, Eigen::Dynamic> ex = (z.row(i).array() - row_max).exp();
    double denom = ex.sum();
    probs.row(i) = (ex / denom).matrix();
    loss -= std::log(std::max(probs(i, labels[static_cast<size_t>(i)]), 1e-300));
  }
  loss /= static_cast<double>(mask.size());

  // Only masked rows of `probs` are meaningful; the pullback touches only
  // those rows.
  NodeId probs_id = constant(std::move(probs));
  Matrix out(1, 1);
  out(0, 0) = loss;
  IGNN_CHECK_FINITE(out, "softmax_cross_entropy");
  const double inv_count = 1.0 / static_cast<double>(mask.size());
  return push(std::move(out),
              [logits, probs_id, labels, mask, inv_count](Tape& t, const Matrix& g) {
                Matrix gz = Matrix::Zero(t.value(logits).rows(), t.value(logits).cols());
                const Matrix& pr = t.value(probs_id);
                const double scale = g(0, 0) * inv_count;
                for (Index i : mask) {
                  gz.row(i) = pr.row(i) * scale;
                  gz(i, labels[static_cast<size_t>(i)]) -= scale;
                }
                t.accumulate(logits, gz);
              });
}

std::vector<Matrix> Tape::backward(NodeId loss) {
  const Matrix& l = value(loss);
  if (l.rows() != 1 || l.cols() != 1) {
    throw DimensionError("backward: loss node must be 1x1, got " + std::to_string(l.rows()) + "x" +
                         std::to_string(l.cols()));
  }
  grads_.assign(nodes_.size(), Matrix());
  grads_[static_cast<size_t>(loss)] = Matrix::Ones(1, 1);
  for (NodeId id = loss; id >= 0; --id) {
    auto& node = nodes_[static_cast<size_t>(id)];
    const Matrix& g = grads_[static_cast<size_t>(id)];
    if (g.size() == 0 || !node.pull) continue;
    node.pull(*this, g);
  }
  std::vector<Matrix> out;
  out.reserve(params_.size());
  for (NodeId p : params_) {
    Matrix& g = grads_[static_cast<size_t>(p)];
    if (g.size() == 0) {
      out.emplace_back(Matrix::Zero(value(p).rows(), value(p).cols()));
    } else {
      out.push_back(std::move(g));
    }
  }
  grads_.clear();
  return out;
}

Matrix glorot_init(Index rows, Index cols, uint64_t seed) {
  if (rows <= 0 || cols <= 0) throw DimensionError("glorot_init: non-positive shape");
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-bound, bound);
  Matrix w(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) w(i, j) = unif(rng);
  }
  return w;
}

void adam_step(AdamState& state, std::vector<Matrix>& params, const std::vector<Matrix>& grads) {
  if (params.size() != grads.size()) throw DimensionError("adam_step: params/grads count");
  if (state.first_moment.empty()) {
    state.first_moment.reserve(params.size());
    state.second_moment.reserve(params.size());
    for (const auto& p : params) {
      state.first_moment.emplace_back(Matrix::Zero(p.rows(), p.cols()));
      state.second_moment.emplace_back(Matrix::Zero(p.rows(), p.cols()));
    }
  }
  if (state.first_moment.size() != params.size()) {
    throw DimensionError("adam_step: optimizer state does not match parameter count");
  }
  ++state.step;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (size_t i = 0; i < params.size(); ++i) {
    if (params[i].rows() != grads[i].rows() || params[i].cols() != grads[i].cols()) {
      throw DimensionError("adam_step: gradient shape mismatch at parameter " + std::to_string(i));
    }
    Matrix& m = state.first_moment[i];
    Matrix& v = state.second_moment[i];
    m = state.beta1 * m + (1.0 - state.beta1) * grads[i];
    v = state.beta2 * v + (1.0 - state.beta2) * grads[i].cwiseProduct(grads[i]);
    params[i].array() -=
        state.lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + state.epsilon);
  }
}

}  // namespace ignn
