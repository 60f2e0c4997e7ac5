#pragma once

#include <vector>

#include "ignn/graph.hpp"
#include "ignn/types.hpp"

namespace ignn {

struct LabelVector {
  std::vector<int> labels;  // one class id per node
  int num_classes = 0;

  Index size() const { return static_cast<Index>(labels.size()); }
};

/// Per-node class histogram of hop-k neighbors, rows normalized to sum 1.
/// Nodes without neighbors at that hop keep an all-zero row and are flagged.
struct NcdMatrix {
  Matrix rows;  // N x num_classes
  int hop = 1;
  std::vector<bool> has_neighbors;
};

enum class HomophilyKind { Edge, Node };

/// Fraction of undirected edges whose endpoints share a label. Diagonal
/// entries (possible in adjacency powers) count as same-label edges.
/// Throws on an empty edge set.
double edge_homophily(const CsrGraph& g, const LabelVector& y);

/// Mean over nodes of the same-label neighbor fraction; isolated nodes
/// contribute 0.
double node_homophily(const CsrGraph& g, const LabelVector& y);

/// Entry i-1 = homophily of adjacency_power(g, i, include_self_loops) for
/// i = 1..K. Hops whose edge set is empty yield NaN.
std::vector<double> per_hop_homophily(const CsrGraph& g, const LabelVector& y, int K,
                                      bool include_self_loops, HomophilyKind kind);

NcdMatrix ncd(const CsrGraph& g, const LabelVector& y, int hop, bool include_self_loops = false);

/// Shift variance between two class distributions: ||a - b||^2 * 100.
double ncd_shift_variance(const Vector& ncd_a, const Vector& ncd_b);

}  // namespace ignn
