#pragma once

#include <utility>
#include <vector>

#include "ignn/graph.hpp"
#include "ignn/types.hpp"

namespace ignn {

/// Orthonormal basis of the information-less subspace: one column per
/// connected component, proportional to the square root of the self-looped
/// degrees on that component. Columns are exact eigenvectors of A^ with
/// eigenvalue 1.
struct SubspaceBasis {
  Matrix basis;                          // N x M, orthonormal columns
  std::vector<int> component_of_column;  // length M

  Index num_components() const { return basis.cols(); }
};

/// Per-run smoothness diagnostics collected while training.
struct SmoothnessReport {
  std::vector<double> per_layer_distance;  // d_M(H^(k)) per recorded layer
  double lipschitz_estimate = 0.0;
  double lambda = 0.0;
  double initial_distance = 0.0;  // d_M of the input features
};

/// Outcome of evaluating the depth-smoothing bound on one instance.
struct BoundCheck {
  double lhs = 0.0;  // d_M(H^(k))
  double rhs = 0.0;  // L^ * lambda^k * D
  bool holds = false;
};

SubspaceBasis subspace_basis(const NormalizedAdjacency& a, const std::vector<int>& components);

/// Frobenius distance from x to span of the basis: ||x - E E^T x||_F.
double distance_to_subspace(const Matrix& x, const SubspaceBasis& e);

/// Largest eigenvalue magnitude of A^ restricted to the orthogonal
/// complement of the basis. Dense symmetric eigensolve up to 2000 nodes,
/// projected power iteration above that (or when forced). Returns 0 when
/// the complement is empty.
double second_largest_eigenvalue(const NormalizedAdjacency& a, const SubspaceBasis& e,
                                 bool force_iterative = false);

/// Largest singular value by power iteration on W^T W. Throws
/// ConvergenceError (carrying the last estimate) if max_iters is exhausted.
double spectral_norm(const Matrix& w, double tol = 1e-12, int max_iters = 100000);

/// ||W^(1) W^(2) ... W^(k)||_2 — the cascade (product) Lipschitz form.
double lipschitz_cascade(const std::vector<Matrix>& weights);

/// ||sum_i W^(i) W_i||_2 — the inceptive (summed per-hop) Lipschitz form.
double lipschitz_inceptive(const std::vector<std::pair<Matrix, Matrix>>& per_hop_weights);

/// Evaluates d_M(H^(k)) <= L^ * lambda^k * d_M(X) for the linearized
/// cascade H^(k) = relu(A^^k X W^(1)...W^(k)). Intermediate activations are
/// dropped, matching the regime in which the bound is stated.
BoundCheck check_depth_smoothing_bound(const NormalizedAdjacency& a, const SubspaceBasis& e,
                                       const Matrix& x, const std::vector<Matrix>& weights,
                                       int k, bool final_relu = true);

/// Smallest depth k* with lip * lambda^k* * dist < eps, clamped at 0:
/// k* = max(0, ceil(log(eps / (lip * dist)) / log(lambda))).
int min_depth_for_distance(double lip, double dist, double eps, double lambda);

/// Heuristic finite-difference probe: ||f(x)-f(y)||_F / ||x-y||_F. A lower
/// bound sample of the true constant, not an estimate of it.
double empirical_lipschitz_ratio(const Matrix& fx, const Matrix& fy, const Matrix& x,
                                 const Matrix& y);

}  // namespace ignn
