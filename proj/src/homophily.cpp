#include "ignn/homophily.hpp"

#include <cmath>
#include <limits>

namespace ignn {

namespace {

void check_labels(const CsrGraph& g, const LabelVector& y) {
  if (y.size() != g.num_nodes) throw DimensionError("label vector size != node count");
  for (int c : y.labels) {
    if (c < 0 || c >= y.num_classes) throw DimensionError("label id outside [0,num_classes)");
  }
}

}  // namespace

double edge_homophily(const CsrGraph& g, const LabelVector& y) {
  check_labels(g, y);
  Index total = 0;
  Index same = 0;
  for (Index u = 0; u < g.num_nodes; ++u) {
    for (Index e = g.row_offsets[u]; e < g.row_offsets[u + 1]; ++e) {
      Index v = g.col_indices[e];
      if (v < u) continue;  // count each undirected pair once
      ++total;
      if (y.labels[static_cast<size_t>(u)] == y.labels[static_cast<size_t>(v)]) ++same;
    }
  }
  if (total == 0) throw Error("edge_homophily: graph has no edges");
  return static_cast<double>(same) / static_cast<double>(total);
}

double node_homophily(const CsrGraph& g, const LabelVector& y) {
  check_labels(g, y);
  if (g.num_nodes == 0) return 0.0;
  double acc = 0.0;
  for (Index u = 0; u < g.num_nodes; ++u) {
    Index d = g.degree(u);
    if (d == 0) continue;  // degree-0 nodes contribute 0
    Index same = 0;
    for (Index e = g.row_offsets[u]; e < g.row_offsets[u + 1]; ++e) {
      if (y.labels[static_cast<size_t>(g.col_indices[e])] == y.labels[static_cast<size_t>(u)]) {
        ++same;
      }
    }
    acc += static_cast<double>(same) / static_cast<double>(d);
  }
  return acc / static_cast<double>(g.num_nodes);
}

std::vector<double> per_hop_homophily(const CsrGraph& g, const LabelVector& y, int K,
                                      bool include_self_loops, HomophilyKind kind) {
  if (K < 1) throw DimensionError("per_hop_homophily: K must be >= 1");
  std::vector<double> out;
  out.reserve(static_cast<size_t>(K));
  for (int i = 1; i <= K; ++i) {
    CsrGraph p = adjacency_power(g, i, include_self_loops);
    if (p.num_arcs() == 0) {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    out.push_back(kind == HomophilyKind::Edge ? edge_homophily(p, y) : node_homophily(p, y));
  }
  return out;
}

NcdMatrix ncd(const CsrGraph& g, const LabelVector& y, int hop, bool include_self_loops) {
  if (hop < 1) throw DimensionError("ncd: hop must be >= 1");
  check_labels(g, y);
  CsrGraph p = adjacency_power(g, hop, include_self_loops);

  NcdMatrix m;
  m.hop = hop;
  m.rows = Matrix::Zero(g.num_nodes, y.num_classes);
  m.has_neighbors.assign(static_cast<size_t>(g.num_nodes), false);
  for (Index u = 0; u < g.num_nodes; ++u) {
    Index d = p.degree(u);
    if (d == 0) continue;
    m.has_neighbors[static_cast<size_t>(u)] = true;
    for (Index e = p.row_offsets[u]; e < p.row_offsets[u + 1]; ++e) {
      m.rows(u, y.labels[static_cast<size_t>(p.col_indices[e])]) += 1.0;
    }
    m.rows.row(u) /= static_cast<double>(d);
  }
  return m;
}

double ncd_shift_variance(const Vector& ncd_a, const Vector& ncd_b) {
  if (ncd_a.size() != ncd_b.size()) {
    throw DimensionError("ncd_shift_variance: distributions have different lengths");
  }
  return (ncd_a - ncd_b).squaredNorm() * 100.0;
}

}  // namespace ignn
