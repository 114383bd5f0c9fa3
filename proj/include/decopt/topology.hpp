#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace decopt {

class Spectrum;

/// Undirected simple graph on nodes 0..n-1.
class Graph {
 public:
  using Edge = std::pair<int, int>;

  /// Edges are normalized to (min, max) and sorted. Throws InvalidArgument on
  /// n < 2, self-loops, out-of-range endpoints or duplicates.
  Graph(int n, std::vector<Edge> edges);

  int num_nodes() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t num_edges() const { return edges_.size(); }

  std::vector<int> degrees() const;
  bool has_edge(int i, int j) const;
  int num_components() const;
  bool is_connected() const { return num_components() == 1; }

 private:
  int n_;
  std::vector<Edge> edges_;
};

enum class TopologyKind { ring, path, grid, complete, erdos_renyi };

std::string to_string(TopologyKind kind);
TopologyKind topology_kind_from_string(const std::string& name);

struct TopologySpec {
  TopologyKind kind = TopologyKind::ring;
  int n = 0;      // ring/path/complete/erdos_renyi
  int rows = 0;   // grid
  int cols = 0;   // grid
  double avg_degree = 0.0;  // erdos_renyi
  std::uint64_t seed = 0;   // erdos_renyi
  int max_retries = 100;    // erdos_renyi connectivity resampling budget

  static TopologySpec ring(int n) { return {TopologyKind::ring, n}; }
  static TopologySpec path(int n) { return {TopologyKind::path, n}; }
  static TopologySpec complete(int n) { return {TopologyKind::complete, n}; }
  static TopologySpec grid(int rows, int cols) {
    TopologySpec s;
    s.kind = TopologyKind::grid;
    s.rows = rows;
    s.cols = cols;
    return s;
  }
  static TopologySpec erdos_renyi(int n, double avg_degree, std::uint64_t seed) {
    TopologySpec s;
    s.kind = TopologyKind::erdos_renyi;
    s.n = n;
    s.avg_degree = avg_degree;
    s.seed = seed;
    return s;
  }
};

Graph build_graph(const TopologySpec& spec);

/// Dense symmetric matrix. Constructed only from symmetric data, except via
/// `from_unchecked`, which exists so validation code can be exercised on
/// deliberately broken input.
class SymmetricMatrix {
 public:
  /// Throws InvalidArgument if `m` is not square or not exactly symmetric.
  explicit SymmetricMatrix(Eigen::MatrixXd m);

  static SymmetricMatrix from_unchecked(Eigen::MatrixXd m);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& dense() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  struct Unchecked {};
  SymmetricMatrix(Eigen::MatrixXd m, Unchecked) : m_(std::move(m)) {}

  Eigen::MatrixXd m_;
};

/// Unnormalized graph Laplacian: degree on the diagonal, -1 on edges.
SymmetricMatrix laplacian(const Graph& g);

struct ValidationReport {
  bool symmetric = false;
  bool psd = false;
  bool sparsity_ok = false;
  bool kernel_is_consensus = false;
  bool passed = false;
  double min_eigenvalue = 0.0;
  int kernel_dim = 0;
};

inline constexpr double kDefaultZeroTol = 1e-9;

/// Checks the gossip-matrix axioms of `w` against the edge set of `g`.
ValidationReport validate_gossip(const SymmetricMatrix& w, const Graph& g,
                                 double zero_tol = kDefaultZeroTol);

}  // namespace decopt
