#include "ignn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace ignn {

namespace {

CsrGraph from_sorted_rows(Index num_nodes, std::vector<std::vector<Index>>& rows) {
  CsrGraph g;
  g.num_nodes = num_nodes;
  g.row_offsets.assign(static_cast<size_t>(num_nodes) + 1, 0);
  size_t total = 0;
  for (Index u = 0; u < num_nodes; ++u) total += rows[u].size();
  g.col_indices.reserve(total);
  for (Index u = 0; u < num_nodes; ++u) {
    g.row_offsets[u] = static_cast<Index>(g.col_indices.size());
    g.col_indices.insert(g.col_indices.end(), rows[u].begin(), rows[u].end());
  }
  g.row_offsets[num_nodes] = static_cast<Index>(g.col_indices.size());
  return g;
}

}  // namespace

Index CsrGraph::num_edges() const {
  Index n = 0;
  for (Index u = 0; u < num_nodes; ++u) {
    for (Index e = row_offsets[u]; e < row_offsets[u + 1]; ++e) {
      if (col_indices[e] >= u) ++n;
    }
  }
  return n;
}

bool CsrGraph::has_arc(Index u, Index v) const {
  auto begin = col_indices.begin() + row_offsets[u];
  auto end = col_indices.begin() + row_offsets[u + 1];
  return std::binary_search(begin, end, v);
}

std::vector<std::pair<Index, Index>> CsrGraph::edge_list() const {
  std::vector<std::pair<Index, Index>> out;
  out.reserve(static_cast<size_t>(num_edges()));
  for (Index u = 0; u < num_nodes; ++u) {
    for (Index e = row_offsets[u]; e < row_offsets[u + 1]; ++e) {
      Index v = col_indices[e];
      if (v >= u) out.emplace_back(u, v);
    }
  }
  return out;
}

CsrGraph build_from_edges(Index num_nodes, const std::vector<std::pair<Index, Index>>& edges) {
  if (num_nodes < 0) throw DimensionError("build_from_edges: negative node count");
  std::vector<std::vector<Index>> rows(static_cast<size_t>(num_nodes));
  for (size_t i = 0; i < edges.size(); ++i) {
    auto [u, v] = edges[i];
    if (u < 0 || u >= num_nodes || v < 0 || v >= num_nodes) {
      throw DimensionError("build_from_edges: edge #" + std::to_string(i) + " = (" +
                           std::to_string(u) + "," + std::to_string(v) +
                           ") has an endpoint outside [0," + std::to_string(num_nodes) + ")");
    }
    if (u == v) continue;  // self-loops enter only via renormalization
    rows[u].push_back(v);
    rows[v].push_back(u);
  }
  for (auto& r : rows) {
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
  }
  return from_sorted_rows(num_nodes, rows);
}

NormalizedAdjacency sym_normalize(const CsrGraph& g) {
  NormalizedAdjacency a;
  a.num_nodes = g.num_nodes;
  a.self_loop_degrees.resize(g.num_nodes);
  for (Index u = 0; u < g.num_nodes; ++u) {
    a.self_loop_degrees[u] = static_cast<double>(g.degree(u)) + 1.0;
  }
  a.row_offsets.assign(static_cast<size_t>(g.num_nodes) + 1, 0);
  a.col_indices.reserve(g.col_indices.size() + static_cast<size_t>(g.num_nodes));
  a.values.reserve(a.col_indices.capacity());
  for (Index u = 0; u < g.num_nodes; ++u) {
    a.row_offsets[u] = static_cast<Index>(a.col_indices.size());
    bool diag_placed = false;
    double du = a.self_loop_degrees[u];
    for (Index e = g.row_offsets[u]; e < g.row_offsets[u + 1]; ++e) {
      Index v = g.col_indices[e];
      if (!diag_placed && v > u) {
        a.col_indices.push_back(u);
        a.values.push_back(1.0 / du);
        diag_placed = true;
      }
      a.col_indices.push_back(v);
      a.values.push_back(1.0 / std::sqrt(du * a.self_loop_degrees[v]));
    }
    if (!diag_placed) {
      a.col_indices.push_back(u);
      a.values.push_back(1.0 / du);
    }
  }
  a.row_offsets[g.num_nodes] = static_cast<Index>(a.col_indices.size());
  return a;
}

CsrMatrix laplacian(const NormalizedAdjacency& a) {
  CsrMatrix l;
  l.num_rows = a.num_nodes;
  l.row_offsets = a.row_offsets;
  l.col_indices = a.col_indices;
  l.values.resize(a.values.size());
  for (Index u = 0; u < a.num_nodes; ++u) {
    for (Index e = a.row_offsets[u]; e < a.row_offsets[u + 1]; ++e) {
      double identity = (a.col_indices[e] == u) ? 1.0 : 0.0;
      l.values[e] = identity - a.values[e];
    }
  }
  return l;
}

CsrGraph adjacency_power(const CsrGraph& g, int k, bool include_self_loops) {
  if (k < 0) throw DimensionError("adjacency_power: negative exponent");
  const Index n = g.num_nodes;
  const size_t words = (static_cast<size_t>(n) + 63) / 64;

  // Bitset rows; saturation at high hops makes merge-based products slower.
  auto set_bit = [words](std::vector<uint64_t>& m, Index r, Index c) {
    m[static_cast<size_t>(r) * words + static_cast<size_t>(c) / 64] |=
        uint64_t(1) << (static_cast<size_t>(c) % 64);
  };
  auto get_bit = [words](const std::vector<uint64_t>& m, Index r, Index c) {
    return (m[static_cast<size_t>(r) * words + static_cast<size_t>(c) / 64] >>
            (static_cast<size_t>(c) % 64)) &
           uint64_t(1);
  };

  std::vector<uint64_t> cur(static_cast<size_t>(n) * words, 0);
  for (Index u = 0; u < n; ++u) set_bit(cur, u, u);  // A^0 = I
  std::vector<uint64_t> next(cur.size());
  for (int step = 0; step < k; ++step) {
    std::fill(next.begin(), next.end(), 0);
    for (Index u = 0; u < n; ++u) {
      uint64_t* dst = next.data() + static_cast<size_t>(u) * words;
      for (Index e = g.row_offsets[u]; e < g.row_offsets[u + 1]; ++e) {
        const uint64_t* src = cur.data() + static_cast<size_t>(g.col_indices[e]) * words;
        for (size_t w = 0; w < words; ++w) dst[w] |= src[w];
      }
    }
    cur.swap(next);
  }

  std::vector<std::vector<Index>> rows(static_cast<size_t>(n));
  for (Index u = 0; u < n; ++u) {
    for (Index v = 0; v < n; ++v) {
      if (u == v && !include_self_loops) continue;
      if (get_bit(cur, u, v)) rows[u].push_back(v);
    }
  }
  return from_sorted_rows(n, rows);
}

std::vector<int> connected_components(const CsrGraph& g) {
  std::vector<int> comp(static_cast<size_t>(g.num_nodes), -1);
  int next_id = 0;
  std::queue<Index> frontier;
  for (Index s = 0; s < g.num_nodes; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = next_id;
    frontier.push(s);
    while (!frontier.empty()) {
      Index u = frontier.front();
      frontier.pop();
      for (Index e = g.row_offsets[u]; e < g.row_offsets[u + 1]; ++e) {
        Index v = g.col_indices[e];
        if (comp[v] < 0) {
          comp[v] = next_id;
          frontier.push(v);
        }
      }
    }
    ++next_id;
  }
  return comp;
}

namespace {

Matrix spmm_impl(Index num_rows, const std::vector<Index>& offsets,
                 const std::vector<Index>& cols, const std::vector<double>& vals,
                 const Matrix& x) {
  Matrix y = Matrix::Zero(num_rows, x.cols());
  for (Index u = 0; u < num_rows; ++u) {
    auto row = y.row(u);
    for (Index e = offsets[u]; e < offsets[u + 1]; ++e) {
      row += vals[e] * x.row(cols[e]);
    }
  }
  return y;
}

}  // namespace

Matrix spmm(const NormalizedAdjacency& a, const Matrix& x) {
  if (x.rows() != a.num_nodes) {
    throw DimensionError("spmm: operand has " + std::to_string(x.rows()) + " rows, adjacency is " +
                         std::to_string(a.num_nodes) + "-dimensional");
  }
  return spmm_impl(a.num_nodes, a.row_offsets, a.col_indices, a.values, x);
}

Matrix spmm(const CsrMatrix& a, const Matrix& x) {
  if (x.rows() != a.num_rows) {
    throw DimensionError("spmm: operand has " + std::to_string(x.rows()) + " rows, matrix is " +
                         std::to_string(a.num_rows) + "-dimensional");
  }
  return spmm_impl(a.num_rows, a.row_offsets, a.col_indices, a.values, x);
}

HopCache hop_features(const NormalizedAdjacency& a, const Matrix& x, int K) {
  if (K < 0) throw DimensionError("hop_features: negative hop count");
  HopCache cache;
  cache.max_hop = K;
  cache.hops.reserve(static_cast<size_t>(K) + 1);
  cache.hops.push_back(x);
  for (int i = 1; i <= K; ++i) {
    cache.hops.push_back(spmm(a, cache.hops.back()));
  }
  return cache;
}

Matrix densify(const CsrGraph& g) {
  Matrix m = Matrix::Zero(g.num_nodes, g.num_nodes);
  for (Index u = 0; u < g.num_nodes; ++u) {
    for (Index e = g.row_offsets[u]; e < g.row_offsets[u + 1]; ++e) m(u, g.col_indices[e]) = 1.0;
  }
  return m;
}

Matrix densify(const NormalizedAdjacency& a) {
  Matrix m = Matrix::Zero(a.num_nodes, a.num_nodes);
  for (Index u = 0; u < a.num_nodes; ++u) {
    for (Index e = a.row_offsets[u]; e < a.row_offsets[u + 1]; ++e) {
      m(u, a.col_indices[e]) = a.values[e];
    }
  }
  return m;
}

Matrix densify(const CsrMatrix& s) {
  Matrix m = Matrix::Zero(s.num_rows, s.num_rows);
  for (Index u = 0; u < s.num_rows; ++u) {
    for (Index e = s.row_offsets[u]; e < s.row_offsets[u + 1]; ++e) {
      m(u, s.col_indices[e]) = s.values[e];
    }
  }
  return m;
}

}  // namespace ignn
