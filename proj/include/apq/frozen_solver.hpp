#pragma once

#include "apq/logging.hpp"
#include "apq/operators.hpp"
#include "apq/problem.hpp"
#include "apq/reaction.hpp"

#include <optional>
#include <vector>

namespace apq {

/// Interior-positivity surrogate: positive at every interior node and a
/// positive inward difference quotient at every boundary node.
struct PositivityReport {
  double interior_min = 0.0;
  double boundary_quotient_min = 0.0;
  bool positive() const { return interior_min > 0.0 && boundary_quotient_min > 0.0; }
};

PositivityReport positivity_report(const GridFunction& u);

/// Energy of the frozen problem: double-phase part minus the integral of
/// G_v(z, u^+).
double frozen_energy(const GridFunction& u, const FrozenReaction& fr, const EnergySpec& es);

/// Energy of the auxiliary problem (double-phase part plus C8/r (u^+)^r
/// minus c0/mu (u^+)^mu).
double auxiliary_energy(const GridFunction& u, const AuxiliarySpec& aux, const EnergySpec& es);

/// Dual vector of the frozen source at the iterate: one-point-quadrature
/// pairing of g_v(z, u) with each interior hat function.
DualVector frozen_source_vector(const GridFunction& u, const FrozenReaction& fr);

/// dual_norm(V(u) - N_{g_v}(u)); the stationarity residual of the frozen
/// problem.
double frozen_residual(const GridFunction& u, const FrozenReaction& fr, const EnergySpec& es);

struct FrozenSolveResult {
  GridFunction u0;                    // a positive solution of the frozen problem
  std::vector<double> energy_history; // strictly decreasing
  double residual = 0.0;
  PositivityReport positivity;
  long iterations = 0;
};

/// Minimizes the frozen energy by projected gradient descent with Armijo
/// backtracking from a strictly-negative-energy multiple of the principal
/// eigenfunction (or the given seed). Iterates are clamped to the
/// nonnegative cone; stops when the stationarity residual drops below
/// tol_inner. Throws TrivialSolution when no seed with negative energy
/// exists or the minimizer vanishes.
FrozenSolveResult solve_frozen(const Problem& problem, const GridFunction& v,
                               std::optional<GridFunction> seed = {},
                               const IterationSink& log = {});

/// Unique positive solution of the auxiliary lower-bound problem, by the
/// same descent scheme. Optional seed for uniqueness probes.
GridFunction solve_auxiliary(const Problem& problem, std::optional<GridFunction> seed = {},
                             const IterationSink& log = {});

/// Auxiliary reaction truncated at the cap field: frozen at the cap value
/// for x above it, continuous across the splice.
double truncated_auxiliary_reaction(const GridFunction& u_cap, const AuxiliarySpec& aux,
                                    std::size_t element, double x);

struct MinimalSolveResult {
  GridFunction u;                 // minimal positive solution above u_bar
  std::vector<double> increments; // discrete C1 increments of the iteration
  double residual = 0.0;          // frozen-problem residual at u
  double inner_residual = 0.0;    // residual of the last inner solve
  long middle_iterations = 0;
};

/// Minimal positive solution of the frozen problem by monotone iteration
/// from the auxiliary lower bound: each step solves the strictly convex
/// inner problem with the source frozen at the previous iterate. Throws
/// OrderingViolation if an iterate drops below u_bar beyond 1e-10.
MinimalSolveResult minimal_solution(const Problem& problem, const GridFunction& v,
                                    const GridFunction& u_bar, const IterationSink& log = {});

} // namespace apq
