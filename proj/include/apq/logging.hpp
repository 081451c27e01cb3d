#pragma once

#include <functional>

namespace apq {

/// One solver-iteration record for convergence logs.
struct IterRecord {
  const char* stage;
  long iter;
  const char* metric; // "energy" | "residual" | "quotient" | "increment"
  double value;
  double step;
};

/// Nullable sink; solvers emit one record per iteration when set.
using IterationSink = std::function<void(const IterRecord&)>;

} // namespace apq
