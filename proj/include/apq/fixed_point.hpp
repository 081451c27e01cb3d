#pragma once

#include "apq/frozen_solver.hpp"
#include "apq/problem.hpp"

#include <span>
#include <vector>

namespace apq {

struct HomotopyRow {
  double t = 0.0;
  bool converged = false;
  double c1_norm = 0.0;
  long iterations = 0;
};

struct OuterReport {
  std::vector<double> increments; // discrete C1 norm per outer step
  GridFunction final_u;
  GridFunction u_bar;
  double full_residual = 0.0;   // self-consistent residual of the full problem
  double frozen_residual = 0.0; // residual of the last frozen solve
  double inner_residual = 0.0;  // residual of the last inner solve
  long outer_iterations = 0;
  PositivityReport positivity;
  bool ordering_ok = true; // u_bar <= final_u nodewise (+1e-12)
  std::vector<HomotopyRow> homotopy;
};

/// Self-consistent stationarity residual of the full problem: the frozen
/// drive is rebuilt from u's own gradient.
double full_residual(const Problem& problem, const GridFunction& u);

/// Damped Picard iteration on the minimal solution map from the auxiliary
/// lower bound; the damping factor halves after two consecutive increment
/// rises (floor 1/16). Throws NoConvergence past max_outer; the increment
/// history is in the log.
OuterReport run_fixed_point(const Problem& problem, const IterationSink& log = {});

/// Solves u = t beta(u) for each t by the same damped Picard scheme;
/// per-t nonconvergence is recorded in the row, not thrown. Rows are
/// independent solves and run on worker threads when enabled.
std::vector<HomotopyRow> homotopy_scan(const Problem& problem, std::span<const double> t_grid,
                                       const IterationSink& log = {});

} // namespace apq
