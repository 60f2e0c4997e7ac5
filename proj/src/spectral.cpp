#include "ignn/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

namespace ignn {

SubspaceBasis subspace_basis(const NormalizedAdjacency& a, const std::vector<int>& components) {
  if (static_cast<Index>(components.size()) != a.num_nodes) {
    throw DimensionError("subspace_basis: component vector size mismatch");
  }
  int num_comp = 0;
  for (int c : components) num_comp = std::max(num_comp, c + 1);

  SubspaceBasis e;
  e.basis = Matrix::Zero(a.num_nodes, num_comp);
  e.component_of_column.resize(static_cast<size_t>(num_comp));
  for (int c = 0; c < num_comp; ++c) e.component_of_column[static_cast<size_t>(c)] = c;

  for (Index u = 0; u < a.num_nodes; ++u) {
    e.basis(u, components[static_cast<size_t>(u)]) = std::sqrt(a.self_loop_degrees[u]);
  }
  for (int c = 0; c < num_comp; ++c) {
    e.basis.col(c) /= e.basis.col(c).norm();
  }
  return e;
}

double distance_to_subspace(const Matrix& x, const SubspaceBasis& e) {
  if (x.rows() != e.basis.rows()) {
    throw DimensionError("distance_to_subspace: " + std::to_string(x.rows()) +
                         " rows vs basis dimension " + std::to_string(e.basis.rows()));
  }
  Matrix residual = x - e.basis * (e.basis.transpose() * x);
  return residual.norm();
}

namespace {

// Power iteration for the largest eigenvalue of the PSD operator
// v -> P(A^(P v)) + shift * v with P = I - E E^T. Deterministic start.
double projected_power_top(const NormalizedAdjacency& a, const SubspaceBasis& e, double shift,
                           double sign, double tol, int max_iters) {
  const Index n = a.num_nodes;
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Matrix v(n, 1);
  for (Index i = 0; i < n; ++i) v(i, 0) = unif(rng);

  auto project = [&](Matrix& m) { m -= e.basis * (e.basis.transpose() * m); };
  project(v);
  double nrm = v.norm();
  if (nrm < 1e-300) return 0.0;
  v /= nrm;

  double prev = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Matrix bv = sign * spmm(a, v) + shift * v;
    project(bv);  // keeps rounding drift out of span(E)
    double rayleigh = (v.transpose() * bv)(0, 0);
    nrm = bv.norm();
    if (nrm < 1e-300) return 0.0;
    v = bv / nrm;
    if (it > 0 && std::abs(rayleigh - prev) <= tol * std::max(1.0, std::abs(rayleigh))) {
      return rayleigh - shift;
    }
    prev = rayleigh;
  }
  return prev - shift;
}

}  // namespace

double second_largest_eigenvalue(const NormalizedAdjacency& a, const SubspaceBasis& e,
                                 bool force_iterative) {
  const Index n = a.num_nodes;
  const Index m = e.num_components();
  if (n == m) return 0.0;

  if (n <= 2000 && !force_iterative) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(densify(a), Eigen::EigenvaluesOnly);
    Vector ev = solver.eigenvalues();  // ascending
    // Eigenvalue 1 has multiplicity M (one per component); the complement
    // spectrum is everything below the top M entries.
    double lo = std::abs(ev[0]);
    double hi = ev[n - m - 1];
    return std::max(lo, std::abs(hi));
  }

  // Spectrum lies in (-1, 1]; shifting by +/-1 keeps both operators PSD.
  double top = projected_power_top(a, e, 1.0, 1.0, 1e-9, 10000);     // lambda_max(complement)
  double bottom = projected_power_top(a, e, 1.0, -1.0, 1e-9, 10000); // -lambda_min(complement)
  return std::max(std::abs(top), std::abs(bottom));
}

double spectral_norm(const Matrix& w, double tol, int max_iters) {
  if (w.size() == 0) throw DimensionError("spectral_norm: empty matrix");
  // Iterate on the smaller Gram dimension.
  const bool wide = w.cols() > w.rows();
  const Index dim = wide ? w.rows() : w.cols();

  std::mt19937_64 rng(98765);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Matrix v(dim, 1);
  for (Index i = 0; i < dim; ++i) v(i, 0) = unif(rng);
  v /= v.norm();

  double est = 0.0;
  double prev = -1.0;
  for (int it = 0; it < max_iters; ++it) {
    Matrix gv = wide ? Matrix(w * (w.transpose() * v)) : Matrix(w.transpose() * (w * v));
    double rayleigh = (v.transpose() * gv)(0, 0);
    est = std::sqrt(std::max(0.0, rayleigh));
    double nrm = gv.norm();
    if (nrm < 1e-300) return 0.0;  // start vector sits in the null space; W is (numerically) zero
    v = gv / nrm;
    if (it > 0 && std::abs(est - prev) <= tol * std::max(1.0, est)) return est;
    prev = est;
  }
  throw ConvergenceError("spectral_norm: no convergence after " + std::to_string(max_iters) +
                             " iterations",
                         est);
}

double lipschitz_cascade(const std::vector<Matrix>& weights) {
  if (weights.empty()) throw DimensionError("lipschitz_cascade: empty weight list");
  Matrix product = weights.front();
  for (size_t i = 1; i < weights.size(); ++i) {
    if (product.cols() != weights[i].rows()) {
      throw DimensionError("lipschitz_cascade: factor " + std::to_string(i) +
                           " does not chain: " + std::to_string(product.cols()) + " vs " +
                           std::to_string(weights[i].rows()));
    }
    product = product * weights[i];
  }
  return spectral_norm(product);
}

double lipschitz_inceptive(const std::vector<std::pair<Matrix, Matrix>>& per_hop_weights) {
  if (per_hop_weights.empty()) throw DimensionError("lipschitz_inceptive: empty weight list");
  Matrix sum;
  for (size_t i = 0; i < per_hop_weights.size(); ++i) {
    const auto& [wi, bi] = per_hop_weights[i];
    if (wi.cols() != bi.rows()) {
      throw DimensionError("lipschitz_inceptive: pair " + std::to_string(i) + " does not chain");
    }
    Matrix term = wi * bi;
    if (i == 0) {
      sum = term;
    } else {
      if (term.rows() != sum.rows() || term.cols() != sum.cols()) {
        throw DimensionError("lipschitz_inceptive: pair " + std::to_string(i) +
                             " product shape differs from previous pairs");
      }
      sum += term;
    }
  }
  return spectral_norm(sum);
}

BoundCheck check_depth_smoothing_bound(const NormalizedAdjacency& a, const SubspaceBasis& e,
                                       const Matrix& x, const std::vector<Matrix>& weights,
                                       int k, bool final_relu) {
  if (k < 0) throw DimensionError("check_depth_smoothing_bound: negative depth");
  Matrix h = x;
  for (int i = 0; i < k; ++i) h = spmm(a, h);
  for (const auto& w : weights) {
    if (h.cols() != w.rows()) throw DimensionError("check_depth_smoothing_bound: weight chain");
    h = h * w;
  }
  if (final_relu) h = h.cwiseMax(0.0);

  BoundCheck r;
  r.lhs = distance_to_subspace(h, e);
  double lip = weights.empty() ? 1.0 : lipschitz_cascade(weights);
  double lambda = second_largest_eigenvalue(a, e);
  r.rhs = lip * std::pow(lambda, k) * distance_to_subspace(x, e);
  r.holds = r.lhs <= r.rhs + 1e-8;
  return r;
}

int min_depth_for_distance(double lip, double dist, double eps, double lambda) {
  if (!(eps > 0.0)) throw ConfigError("min_depth_for_distance: eps must be positive");
  if (!(lip > 0.0)) throw ConfigError("min_depth_for_distance: lip must be positive");
  if (!(dist > 0.0)) throw ConfigError("min_depth_for_distance: dist must be positive");
  if (!(lambda > 0.0) || !(lambda < 1.0)) {
    throw ConfigError("min_depth_for_distance: lambda must lie in (0,1)");
  }
  double ratio = std::log(eps / (lip * dist)) / std::log(lambda);
  if (ratio <= 0.0) return 0;
  return static_cast<int>(std::ceil(ratio));
}

double empirical_lipschitz_ratio(const Matrix& fx, const Matrix& fy, const Matrix& x,
                                 const Matrix& y) {
  double denom = (x - y).norm();
  if (denom == 0.0) throw DimensionError("empirical_lipschitz_ratio: identical inputs");
  return (fx - fy).norm() / denom;
}

}  // namespace ignn
