#pragma once

#include "apq/fields.hpp"
#include "apq/logging.hpp"

#include <optional>

namespace apq {

struct EigenOptions {
  double tol = 1e-10;          // relative quotient change
  long max_iters = 50000;
  double weight_gap_rel = 1e-6; // operational margin for "theta not == lambda1"
  IterationSink log = {};
};

/// Principal eigenpair of the variable-exponent eigenvalue problem plus the
/// weighted eigenvalue and nonresonance constant when computed downstream.
struct EigenResult {
  double lambda1 = 0.0;
  GridFunction u1; // normalized modular(u1, p) == 1, nonnegative
  std::optional<double> weighted_lambda1;
  std::optional<double> C1;
  long iterations = 0;
};

/// Rayleigh-type quotient modular_grad(u) / modular(u).
double rayleigh_quotient(const GridFunction& u, const ExponentField& p);

/// Quotient with weighted denominator integral of theta |u|^{p}.
double weighted_rayleigh_quotient(const GridFunction& u, const ExponentField& p,
                                  const GridFunction& theta);

/// Minimizes the Rayleigh quotient over zero-trace fields by projected
/// descent with per-iteration renormalization, seeded with the positive
/// product-of-sines bubble. Throws NoConvergence past opts.max_iters.
EigenResult principal_eigenpair(const MeshPtr& mesh, const ExponentField& p,
                                const EigenOptions& opts = {});

/// Weighted principal eigenvalue: minimizes modular_grad(u) over the slice
/// integral theta |u|^p == 1. Requires 0 <= theta <= lambda1 nodewise with a
/// relative gap (InvalidWeight otherwise).
double weighted_principal_eigenvalue(const MeshPtr& mesh, const ExponentField& p,
                                     const GridFunction& theta, double lambda1,
                                     const EigenOptions& opts = {});

/// Nonresonance margin (lambda_tilde - 1) / lambda_tilde in (0, 1). Throws
/// InvalidEigenvalue when lambda_tilde <= 1.
double nonresonance_constant(double lambda_tilde);

} // namespace apq
