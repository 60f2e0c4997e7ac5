#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ignn/graph.hpp"
#include "ignn/types.hpp"

namespace ignn {

using NodeId = int;

/// Append-only reverse-mode record over dense matrices. Nodes cache their
/// forward values; backward walks the record once in reverse append order.
/// Sparse operands of spmm_const are borrowed, not copied — they must
/// outlive the tape. A tape is single-threaded during construction and
/// backward.
class Tape {
 public:
  NodeId constant(Matrix x);
  NodeId parameter(Matrix w);

  NodeId matmul(NodeId a, NodeId b);
  /// Constant sparse times variable dense; the graph is not differentiated.
  NodeId spmm_const(const NormalizedAdjacency& a, NodeId x);
  NodeId spmm_const(const CsrMatrix& a, NodeId x);
  NodeId add(NodeId a, NodeId b);
  /// Elementwise scale * x + shift.
  NodeId affine(NodeId x, double scale, double shift);
  NodeId relu(NodeId x);
  NodeId sigmoid(NodeId x);
  /// Row-wise gate: out(i,:) = gate(i,0) * x(i,:). gate must be N x 1.
  NodeId scale_rows(NodeId x, NodeId gate);
  NodeId concat_cols(const std::vector<NodeId>& parts);
  /// Inverted dropout: kept entries scaled by 1/(1-p). Identity when
  /// training is false or p == 0. Mask is a pure function of the seed.
  NodeId dropout(NodeId x, double p, bool training, uint64_t seed);
  /// Mean masked cross-entropy after a row-wise softmax; returns a 1x1 node.
  NodeId softmax_cross_entropy(NodeId logits, const std::vector<int>& labels,
                               const std::vector<Index>& mask);

  const Matrix& value(NodeId id) const { return nodes_[static_cast<size_t>(id)].value; }
  Index num_nodes() const { return static_cast<Index>(nodes_.size()); }
  const std::vector<NodeId>& parameters() const { return params_; }

  /// Gradients for all registered parameters, in registration order.
  /// The loss node must be 1x1.
  std::vector<Matrix> backward(NodeId loss);

 private:
  struct Node {
    Matrix value;
    std::function<void(Tape&, const Matrix&)> pull;  // empty for leaves
  };

  NodeId push(Matrix value, std::function<void(Tape&, const Matrix&)> pull);
  void accumulate(NodeId id, const Matrix& g);

  std::vector<Node> nodes_;
  std::vector<NodeId> params_;
  std::vector<Matrix> grads_;  // scratch, aligned with nodes_ during backward
};

/// Uniform on +/- sqrt(6 / (rows + cols)); bit-reproducible per seed.
Matrix glorot_init(Index rows, Index cols, uint64_t seed);

struct AdamState {
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  long step = 0;
  std::vector<Matrix> first_moment;   // lazily sized like the parameters
  std::vector<Matrix> second_moment;
};

/// One bias-corrected Adam update, in place.
void adam_step(AdamState& state, std::vector<Matrix>& params, const std::vector<Matrix>& grads);

}  // namespace ignn
