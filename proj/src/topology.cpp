#include "decopt/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "decopt/error.hpp"
#include "decopt/spectral.hpp"

namespace decopt {

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n_ < 2) {
    throw InvalidArgument("graph needs at least 2 nodes, got " + std::to_string(n_));
  }
  for (auto& [i, j] : edges_) {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) {
      throw InvalidArgument("edge (" + std::to_string(i) + "," + std::to_string(j) +
                            ") out of range for n=" + std::to_string(n_));
    }
    if (i == j) throw InvalidArgument("self-loop at node " + std::to_string(i));
    if (i > j) std::swap(i, j);
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw InvalidArgument("duplicate edge");
  }
}

std::vector<int> Graph::degrees() const {
  std::vector<int> deg(n_, 0);
  for (const auto& [i, j] : edges_) {
    ++deg[i];
    ++deg[j];
  }
  return deg;
}

bool Graph::has_edge(int i, int j) const {
  if (i > j) std::swap(i, j);
  return std::binary_search(edges_.begin(), edges_.end(), Edge{i, j});
}

int Graph::num_components() const {
  std::vector<int> parent(n_);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  int components = n_;
  for (const auto& [i, j] : edges_) {
    int a = find(i), b = find(j);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components;
}

std::string to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::ring: return "ring";
    case TopologyKind::path: return "path";
    case TopologyKind::grid: return "grid";
    case TopologyKind::complete: return "complete";
    case TopologyKind::erdos_renyi: return "erdos_renyi";
  }
  return "unknown";
}

TopologyKind topology_kind_from_string(const std::string& name) {
  for (auto k : {TopologyKind::ring, TopologyKind::path, TopologyKind::grid,
                 TopologyKind::complete, TopologyKind::erdos_renyi}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown topology kind '" + name + "'");
}

namespace {

Graph erdos_renyi(const TopologySpec& spec) {
  const int n = spec.n;
  if (!(spec.avg_degree > 0.0) || spec.avg_degree >= n) {
    throw InvalidArgument("erdos_renyi average degree must lie in (0, n)");
  }
  const double p = spec.avg_degree / (n - 1);
  std::mt19937_64 rng(spec.seed);
  std::bernoulli_distribution coin(p);
  for (int attempt = 0; attempt < spec.max_retries; ++attempt) {
    std::vector<Graph::Edge> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (coin(rng)) edges.emplace_back(i, j);
      }
    }
    Graph g(n, std::move(edges));
    if (g.is_connected()) return g;
  }
  std::ostringstream msg;
  msg << "erdos_renyi(n=" << n << ", avg_degree=" << spec.avg_degree
      << ") not connected after " << spec.max_retries << " draws (seed " << spec.seed << ")";
  throw ValidationError(msg.str());
}

}  // namespace

Graph build_graph(const TopologySpec& spec) {
  std::vector<Graph::Edge> edges;
  switch (spec.kind) {
    case TopologyKind::ring:
      if (spec.n < 2) break;
      for (int i = 0; i < spec.n; ++i) {
        // n = 2 would repeat the single edge
        if (spec.n == 2 && i == 1) break;
        edges.emplace_back(i, (i + 1) % spec.n);
      }
      return Graph(spec.n, std::move(edges));
    case TopologyKind::path:
      for (int i = 0; i + 1 < spec.n; ++i) edges.emplace_back(i, i + 1);
      return Graph(spec.n, std::move(edges));
    case TopologyKind::complete:
      for (int i = 0; i < spec.n; ++i)
        for (int j = i + 1; j < spec.n; ++j) edges.emplace_back(i, j);
      return Graph(spec.n, std::move(edges));
    case TopologyKind::grid: {
      if (spec.rows < 1 || spec.cols < 1) throw InvalidArgument("grid needs rows, cols >= 1");
      auto id = [&](int r, int c) { return r * spec.cols + c; };
      for (int r = 0; r < spec.rows; ++r) {
        for (int c = 0; c < spec.cols; ++c) {
          if (c + 1 < spec.cols) edges.emplace_back(id(r, c), id(r, c + 1));
          if (r + 1 < spec.rows) edges.emplace_back(id(r, c), id(r + 1, c));
        }
      }
      return Graph(spec.rows * spec.cols, std::move(edges));
    }
    case TopologyKind::erdos_renyi:
      if (spec.n < 2) break;
      return erdos_renyi(spec);
  }
  return Graph(spec.n, {});  // throws for n < 2
}

SymmetricMatrix::SymmetricMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw InvalidArgument("symmetric matrix must be square");
  if (m_ != m_.transpose()) throw InvalidArgument("matrix is not symmetric");
}

SymmetricMatrix SymmetricMatrix::from_unchecked(Eigen::MatrixXd m) {
  if (m.rows() != m.cols()) throw InvalidArgument("symmetric matrix must be square");
  return SymmetricMatrix(std::move(m), Unchecked{});
}

SymmetricMatrix laplacian(const Graph& g) {
  const int n = g.num_nodes();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [i, j] : g.edges()) {
    l(i, j) = -1.0;
    l(j, i) = -1.0;
    l(i, i) += 1.0;
    l(j, j) += 1.0;
  }
  return SymmetricMatrix(std::move(l));
}

ValidationReport validate_gossip(const SymmetricMatrix& w, const Graph& g, double zero_tol) {
  if (w.dim() != g.num_nodes()) {
    throw InvalidArgument("gossip matrix dimension " + std::to_string(w.dim()) +
                          " does not match graph size " + std::to_string(g.num_nodes()));
  }
  const Eigen::MatrixXd& m = w.dense();
  const int n = w.dim();
  ValidationReport r;
  r.symmetric = (m == m.transpose());

  r.sparsity_ok = true;
  for (int i = 0; i < n && r.sparsity_ok; ++i) {
    if (m(i, i) == 0.0) r.sparsity_ok = false;
    for (int j = i + 1; j < n; ++j) {
      bool nz = m(i, j) != 0.0 || m(j, i) != 0.0;
      if (nz != g.has_edge(i, j)) {
        r.sparsity_ok = false;
        break;
      }
    }
  }

  // Spectral flags are taken on the symmetric part; an asymmetric input has
  // already failed.
  Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Spectrum s = eigendecompose(SymmetricMatrix(sym));
  const double lmax = std::max(std::abs(s.eigenvalues().maxCoeff()),
                               std::abs(s.eigenvalues().minCoeff()));
  const double thr = zero_tol * lmax;
  r.min_eigenvalue = s.eigenvalues().minCoeff();
  r.psd = r.min_eigenvalue >= -thr;

  r.kernel_dim = 0;
  int zero_index = -1;
  for (int k = 0; k < n; ++k) {
    if (std::abs(s.eigenvalues()(k)) <= thr) {
      ++r.kernel_dim;
      zero_index = k;
    }
  }
  if (r.kernel_dim == 1) {
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
    double align = std::abs(s.eigenvectors().col(zero_index).dot(ones));
    r.kernel_is_consensus = std::abs(1.0 - align) <= 1e-8;
  }
  r.passed = r.symmetric && r.psd && r.sparsity_ok && r.kernel_is_consensus;
  return r;
}

}  // namespace decopt
