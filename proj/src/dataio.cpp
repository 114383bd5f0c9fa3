#include "decopt/dataio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string_view>

#include "decopt/error.hpp"

namespace decopt {

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::running: return "running";
    case RunStatus::converged: return "converged";
    case RunStatus::max_iters: return "max_iters";
    case RunStatus::diverged: return "diverged";
  }
  return "unknown";
}

namespace {

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw InvalidArgument("line " + std::to_string(line) + ": " + what);
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) tokens.push_back(s.substr(i, j - i));
    i = j;
  }
  return tokens;
}

}  // namespace

Dataset parse_libsvm(std::istream& in) {
  Dataset ds;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    const auto tokens = split_ws(view);
    if (tokens.empty()) continue;

    Sample sample;
    double label = 0.0;
    if (!parse_number(tokens[0], label) || !std::isfinite(label)) {
      parse_error(lineno, "non-numeric label '" + std::string(tokens[0]) + "'");
    }
    sample.label = label > 0.0 ? 1 : -1;

    int prev = 0;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const auto tok = tokens[t];
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos) {
        parse_error(lineno, "missing colon in '" + std::string(tok) + "'");
      }
      int index = 0;
      double value = 0.0;
      if (!parse_number(tok.substr(0, colon), index) || index < 1) {
        parse_error(lineno, "bad feature index in '" + std::string(tok) + "'");
      }
      if (!parse_number(tok.substr(colon + 1), value) || !std::isfinite(value)) {
        parse_error(lineno, "bad feature value in '" + std::string(tok) + "'");
      }
      if (index <= prev) parse_error(lineno, "non-increasing index " + std::to_string(index));
      prev = index;
      sample.features.emplace_back(index - 1, value);
    }
    ds.dim = std::max(ds.dim, prev);
    ds.samples.push_back(std::move(sample));
  }
  return ds;
}

Dataset read_libsvm_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset " + path.string());
  return parse_libsvm(in);
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw InvalidArgument("cannot format double");
  return std::string(buf, ptr);
}

void write_libsvm(const Dataset& ds, std::ostream& out) {
  for (const auto& s : ds.samples) {
    out << (s.label > 0 ? "+1" : "-1");
    for (const auto& [idx, val] : s.features) out << ' ' << (idx + 1) << ':' << format_double(val);
    out << '\n';
  }
}

std::vector<double> synth_planted_direction(int d, std::uint64_t seed) {
  // Separate stream from the features so the direction does not depend on n.
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> normal;
  std::vector<double> w(d);
  double norm = 0.0;
  for (auto& v : w) {
    v = normal(rng);
    norm += v * v;
  }
  norm = std::sqrt(norm);
  for (auto& v : w) v /= norm;
  return w;
}

Dataset synth_classification(int n_samples, int d, std::uint64_t seed) {
  if (n_samples < 1 || d < 1) throw InvalidArgument("synth_classification needs n, d >= 1");
  constexpr double kFlipRate = 0.05;
  const auto w = synth_planted_direction(d, seed);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::bernoulli_distribution flip(kFlipRate);
  Dataset ds;
  ds.dim = d;
  ds.samples.reserve(n_samples);
  for (int s = 0; s < n_samples; ++s) {
    Sample sample;
    double margin = 0.0;
    for (int c = 0; c < d; ++c) {
      const double v = normal(rng);
      margin += v * w[c];
      sample.features.emplace_back(c, v);
    }
    sample.label = margin >= 0.0 ? 1 : -1;
    if (flip(rng)) sample.label = -sample.label;
    ds.samples.push_back(std::move(sample));
  }
  return ds;
}

std::vector<NodeShard> partition(const Dataset& ds, int n, std::uint64_t seed) {
  const int total = static_cast<int>(ds.samples.size());
  if (n < 1) throw InvalidArgument("partition needs at least one node");
  if (total < n) {
    throw InvalidArgument("cannot split " + std::to_string(total) + " samples over " +
                          std::to_string(n) + " nodes");
  }
  std::vector<int> order(total);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<NodeShard> shards(n);
  const int base = total / n;
  const int extra = total % n;
  int pos = 0;
  for (int i = 0; i < n; ++i) {
    const int m = base + (i < extra ? 1 : 0);
    NodeShard& sh = shards[i];
    sh.features = Eigen::MatrixXd::Zero(m, ds.dim);
    sh.labels.resize(m);
    for (int r = 0; r < m; ++r, ++pos) {
      const Sample& s = ds.samples[order[pos]];
      sh.labels(r) = s.label;
      for (const auto& [idx, val] : s.features) sh.features(r, idx) = val;
    }
  }
  return shards;
}

void write_trace(const Trace& t, std::ostream& out) {
  out << "iter,grad_evals,comm_rounds,sq_dist,lyapunov\n";
  for (const auto& r : t.records) {
    out << r.iter << ',' << r.grad_evals << ',' << r.comm_rounds << ',' << format_double(r.sq_dist)
        << ',';
    if (r.lyapunov) out << format_double(*r.lyapunov);
    out << '\n';
  }
  if (!out) throw IoError("failed writing trace");
}

void write_trace_file(const Trace& t, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_trace(t, out);
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

Trace read_trace(std::istream& in) {
  Trace t;
  std::string line;
  if (!std::getline(in, line) || line != "iter,grad_evals,comm_rounds,sq_dist,lyapunov") {
    throw InvalidArgument("trace header mismatch");
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::vector<std::string_view> cols;
    std::string_view view(line);
    std::size_t start = 0;
    for (std::size_t i = 0; i <= view.size(); ++i) {
      if (i == view.size() || view[i] == ',') {
        cols.push_back(view.substr(start, i - start));
        start = i + 1;
      }
    }
    if (cols.size() != 5) parse_error(lineno, "expected 5 columns");
    TraceRecord r;
    if (!parse_number(cols[0], r.iter) || !parse_number(cols[1], r.grad_evals) ||
        !parse_number(cols[2], r.comm_rounds) || !parse_number(cols[3], r.sq_dist)) {
      parse_error(lineno, "malformed trace row");
    }
    if (!cols[4].empty()) {
      double v = 0.0;
      if (!parse_number(cols[4], v)) parse_error(lineno, "malformed lyapunov value");
      r.lyapunov = v;
    }
    t.records.push_back(r);
  }
  return t;
}

}  // namespace decopt
