#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <Eigen/Dense>

#include "decopt/stacked.hpp"

namespace decopt::testing {

// Laplacian spectra in closed form.
inline std::vector<double> cycle_eigenvalues(int n) {
  std::vector<double> v;
  for (int k = 0; k < n; ++k) v.push_back(2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * k / n));
  std::sort(v.begin(), v.end());
  return v;
}

inline std::vector<double> path_eigenvalues(int n) {
  std::vector<double> v;
  for (int k = 0; k < n; ++k) v.push_back(2.0 - 2.0 * std::cos(std::numbers::pi * k / n));
  std::sort(v.begin(), v.end());
  return v;
}

// T_k(x) via cos / cosh, independent of the three-term recursion.
inline double chebyshev_closed_form(int k, double x) {
  if (std::abs(x) <= 1.0) return std::cos(k * std::acos(x));
  const double t = std::cosh(k * std::acosh(std::abs(x)));
  return (x < 0 && k % 2 == 1) ? -t : t;
}

inline StackedState random_state(int n, int d, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  StackedState x(n, d);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < d; ++c) x(i, c) = normal(rng);
  return x;
}

// Zero-mean columns, i.e. orthogonal to the consensus space of a connected graph.
inline StackedState centered(StackedState x) {
  x.rowwise() -= x.colwise().mean();
  return x;
}

// Central differences of a scalar function of a stacked state.
inline StackedState finite_difference(const std::function<double(const StackedState&)>& f,
                                      const StackedState& x, double h = 1e-6) {
  StackedState g(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      StackedState p = x, m = x;
      p(i, c) += h;
      m(i, c) -= h;
      g(i, c) = (f(p) - f(m)) / (2.0 * h);
    }
  }
  return g;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("decopt_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace decopt::testing
