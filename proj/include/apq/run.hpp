#pragma once

#include "apq/problem.hpp"

#include <cstdint>
#include <string>

namespace apq {

enum class Stage { Check, Eigen, Aux, Frozen, Solve, Homotopy };

Stage stage_from_name(const std::string& name);

struct RunOptions {
  std::string out_dir;           // overrides output.directory when nonempty
  int threads = 1;
  std::uint64_t seed = 0;        // recorded in the summary; the pipeline is deterministic
  std::string frozen_v = "zero"; // "zero" or a field CSV path (frozen stage)
};

/// Runs one pipeline stage: writes resolved-config.json, log.jsonl,
/// summary.json, and the stage's field artifacts into the output directory.
/// Returns 0 on success; on failure writes error.json with a
/// machine-readable record and returns nonzero.
int run_stage(const ProblemSpec& spec, Stage stage, const RunOptions& opts = {});

} // namespace apq
