#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ignn/autodiff.hpp"
#include "ignn/graph.hpp"
#include "ignn/types.hpp"

namespace ignn {

/// Model families. The last three are the ablation-grid forms: parallel
/// hop branches with shared weights (IN only), per-hop weights (SN+IN),
/// and the cascade-with-concatenation form (NR only).
enum class ModelKind { Gcn, RIgnn, AIgnn, CIgnn, Sign, SignShared, Jknet };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

struct ModelConfig {
  ModelKind kind = ModelKind::Gcn;
  int hops = 2;          // K: propagation layers (cascades) or highest hop (branch models)
  Index hidden = 64;     // F: hidden / per-hop width
  Index nr_width = 64;   // F': relation-learning output width (c-IGNN only)
  double dropout = 0.0;
  bool fast_mode = true;  // c-IGNN: feed hop branches from a precomputed HopCache
};

/// A model's configuration plus its parameter matrices. The weight layout
/// per kind is fixed by init_model; forward_model and lipschitz_estimate
/// share it.
struct ModelState {
  ModelConfig cfg;
  Index in_dim = 0;
  Index num_classes = 0;
  std::vector<Matrix> weights;
};

ModelState init_model(const ModelConfig& cfg, Index in_dim, Index num_classes, uint64_t seed);

struct ForwardOptions {
  bool training = false;
  uint64_t dropout_seed = 0;
  /// Drop every activation (the regime of the equivalence constructions).
  bool linearized = false;
  /// Optional precomputed A^^i X features (c-IGNN fast mode).
  const HopCache* hop_cache = nullptr;
  /// a-IGNN only: pins the gate of layer k to gate_override[k-1] for all
  /// nodes, bypassing the learned gate.
  const std::vector<double>* gate_override = nullptr;
};

struct ForwardResult {
  NodeId logits = -1;
  /// Post-activation states for smoothness diagnostics; entry 0 is the
  /// input features.
  std::vector<NodeId> hidden_states;
};

ForwardResult forward_model(Tape& tape, const ModelState& state, const NormalizedAdjacency& a,
                            const Matrix& x, const ForwardOptions& opt = {});

/// Model-appropriate Lipschitz estimate: cascade product norm for the
/// cascaded kinds, summed per-hop form for the branch kinds.
double lipschitz_estimate(const ModelState& state);

/// Fraction of rows in `idx` whose argmax matches the label.
double accuracy(const Matrix& logits, const std::vector<int>& labels,
                const std::vector<Index>& idx);

// ---------------------------------------------------------------------------
// Graph-filter reductions: executable weight assignments under which the
// linearized concatenative model reproduces named propagation schemes.

struct ReductionSpec {
  enum class Kind { Sign, Appnp, MixHop, Gprgnn, MeanPool, SumPool, PolyFilter };
  Kind kind = Kind::Sign;
  double alpha = 0.1;                // Appnp restart probability, in (0,1]
  std::vector<double> coefficients;  // gammas / mixing weights / filter thetas, length K+1
};

struct ReductionWeights {
  std::vector<Matrix> per_hop;  // W^(i), i = 0..K
  std::vector<Matrix> blocks;   // W_i: row blocks of the stacked relation weight
};

/// The explicit constructions: Appnp -> W^(i)=W_theta, W_K=(1-a)^K I,
/// W_i=a(1-a)^i I; Gprgnn -> W_i=gamma_i I; MixHop -> W^(i)=I, W_i=c_i I;
/// MeanPool -> W_i=I/(K+1); SumPool -> W_i=I; PolyFilter -> W^(i)=I,
/// W_i = (sum_{k=i}^K theta_k (-1)^i C(k,i)) I; Sign -> block-selector W.
ReductionWeights build_reduction_weights(const ReductionSpec& spec, int K, const Matrix& base);

/// Linearized concatenative model, concat route: (||_i A^^i X W^(i)) W.
Matrix cignn_linear_concat(const NormalizedAdjacency& a, const Matrix& x,
                           const ReductionWeights& w);
/// Same map evaluated block-wise: sum_i (A^^i X W^(i)) W_i.
Matrix cignn_linear_blocksum(const NormalizedAdjacency& a, const Matrix& x,
                             const ReductionWeights& w);

/// The named reference computation each spec reduces to (recursions and
/// direct sums, evaluated without the concatenation machinery).
Matrix reduction_reference(const ReductionSpec& spec, const NormalizedAdjacency& a,
                           const Matrix& x, const std::vector<Matrix>& per_hop);

/// H_p = (sum_k theta_k L^^k) X by repeated Laplacian application.
Matrix polynomial_filter_reference(const NormalizedAdjacency& a, const Matrix& x,
                                   const std::vector<double>& theta);

}  // namespace ignn
