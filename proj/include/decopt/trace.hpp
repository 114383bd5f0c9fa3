#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace decopt {

struct TraceRecord {
  std::int64_t iter = 0;
  std::int64_t grad_evals = 0;
  std::int64_t comm_rounds = 0;
  double sq_dist = 0.0;
  std::optional<double> lyapunov;

  bool operator==(const TraceRecord&) const = default;
};

enum class RunStatus { running, converged, max_iters, diverged };

std::string to_string(RunStatus status);

struct Trace {
  std::vector<TraceRecord> records;
  std::string algorithm;
  RunStatus status = RunStatus::running;
};

}  // namespace decopt
