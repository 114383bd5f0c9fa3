#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "decopt/shard.hpp"
#include "decopt/trace.hpp"

namespace decopt {

struct Sample {
  int label = 1;  // -1 or +1
  std::vector<std::pair<int, double>> features;  // 0-based, strictly increasing

  bool operator==(const Sample&) const = default;
};

struct Dataset {
  std::vector<Sample> samples;
  int dim = 0;  // max feature index + 1 over the whole set

  bool operator==(const Dataset&) const = default;
};

/// LIBSVM text: `<label> <idx>:<val> ...`, 1-based indices. Labels > 0 map to
/// +1, everything else to -1. Blank lines and `#` comments are skipped.
/// Throws InvalidArgument with the offending line number.
Dataset parse_libsvm(std::istream& in);
Dataset read_libsvm_file(const std::filesystem::path& path);

void write_libsvm(const Dataset& ds, std::ostream& out);

/// Standard normal features, labels from a planted unit-norm hyperplane with
/// 5% sign flips.
Dataset synth_classification(int n_samples, int d, std::uint64_t seed);

/// The planted direction used by synth_classification for this (d, seed).
std::vector<double> synth_planted_direction(int d, std::uint64_t seed);

/// Seeded shuffle, then n contiguous shards whose sizes differ by at most one.
std::vector<NodeShard> partition(const Dataset& ds, int n, std::uint64_t seed);

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

/// CSV with header `iter,grad_evals,comm_rounds,sq_dist,lyapunov`.
void write_trace(const Trace& t, std::ostream& out);
void write_trace_file(const Trace& t, const std::filesystem::path& path);
Trace read_trace(std::istream& in);

}  // namespace decopt
