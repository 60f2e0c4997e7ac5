#pragma once

#include <utility>
#include <vector>

#include "ignn/types.hpp"

namespace ignn {

/// Immutable undirected unweighted graph in compressed sparse row form.
/// Ingested graphs are symmetric, sorted within rows, duplicate-free and
/// diagonal-free; powers requested with self-loops kept may carry diagonal
/// entries.
struct CsrGraph {
  Index num_nodes = 0;
  std::vector<Index> row_offsets;  // length num_nodes + 1
  std::vector<Index> col_indices;  // strictly increasing within each row

  Index num_arcs() const { return static_cast<Index>(col_indices.size()); }
  Index degree(Index u) const { return row_offsets[u + 1] - row_offsets[u]; }
  /// Undirected edge count: off-diagonal arcs counted once, diagonal once.
  Index num_edges() const;
  bool has_arc(Index u, Index v) const;
  /// Edge list with u <= v, one entry per undirected edge.
  std::vector<std::pair<Index, Index>> edge_list() const;
};

/// Symmetrically renormalized adjacency: values 1/sqrt(d^_u d^_v) on the
/// sparsity pattern of A+I, where d^ are the self-looped degrees.
struct NormalizedAdjacency {
  Index num_nodes = 0;
  std::vector<Index> row_offsets;
  std::vector<Index> col_indices;  // includes the diagonal in every row
  std::vector<double> values;
  Vector self_loop_degrees;  // d^_u = deg(u) + 1
};

/// Generic square symmetric CSR matrix (used for the normalized Laplacian).
struct CsrMatrix {
  Index num_rows = 0;
  std::vector<Index> row_offsets;
  std::vector<Index> col_indices;
  std::vector<double> values;
};

/// Hop feature cache: hops[i] = A^^i X for i = 0..max_hop.
struct HopCache {
  std::vector<Matrix> hops;
  int max_hop = 0;
};

/// Builds the symmetric closure of `edges` on `num_nodes` nodes.
/// Duplicates and self-loops are dropped; endpoints out of range throw.
CsrGraph build_from_edges(Index num_nodes, const std::vector<std::pair<Index, Index>>& edges);

NormalizedAdjacency sym_normalize(const CsrGraph& g);

/// L^ = I - A^ on the same sparsity pattern.
CsrMatrix laplacian(const NormalizedAdjacency& a);

/// Boolean k-th power of the adjacency matrix (walks of exactly k steps).
/// With include_self_loops = false the diagonal of the result is removed.
/// k = 0 yields the identity pattern (empty when the diagonal is removed).
CsrGraph adjacency_power(const CsrGraph& g, int k, bool include_self_loops);

/// Component id per node, dense in 0..M-1, ordered by first node index.
std::vector<int> connected_components(const CsrGraph& g);

/// Sparse x dense with a fixed ascending-column summation order per row,
/// so repeated runs are bit-identical.
Matrix spmm(const NormalizedAdjacency& a, const Matrix& x);
Matrix spmm(const CsrMatrix& a, const Matrix& x);

/// hops[i] = A^^i X by repeated spmm; length K + 1.
HopCache hop_features(const NormalizedAdjacency& a, const Matrix& x, int K);

// Dense views, mainly for small-graph oracles and eigensolves.
Matrix densify(const CsrGraph& g);
Matrix densify(const NormalizedAdjacency& a);
Matrix densify(const CsrMatrix& m);

}  // namespace ignn
