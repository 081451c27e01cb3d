#pragma once

#include "apq/fields.hpp"

#include <optional>
#include <vector>

namespace apq {

/// Exponent pair and gradient regularization for the double-phase energy.
struct EnergySpec {
  ExponentField p;
  std::optional<ExponentField> q;
  double eps_reg = 1e-10;

  EnergySpec(ExponentField p_field, std::optional<ExponentField> q_field = {},
             double eps = 1e-10);
};

/// One scalar per node; boundary entries are identically zero, so a pairing
/// with any zero-trace field is a plain dot product.
using DualVector = std::vector<double>;

/// Integral of (1/p)(|Du|^2 + eps^2)^{p/2} + (1/q)(...)^{q/2}, offset so the
/// value at u == 0 is exactly zero.
double double_phase_energy(const GridFunction& u, const EnergySpec& spec);

/// Weak r(z)-Laplacian action: the vector whose pairing with zero-trace h is
/// the integral of (|Du|^2 + eps^2)^{(r-2)/2} (Du, Dh). Exactly the gradient
/// of the regularized energy integral of (1/r)|Du|^r.
DualVector apply_plaplacian(const GridFunction& u, const ExponentField& r, double eps_reg);

/// Sum of the p- and q-phase actions; gradient of double_phase_energy.
DualVector apply_double_phase(const GridFunction& u, const EnergySpec& spec);

/// Diagonal of the double-phase energy Hessian (positive at free nodes,
/// 1 at boundary nodes); the Jacobi scaling used by the descent solvers.
DualVector double_phase_diagonal(const GridFunction& u, const EnergySpec& spec);

/// Max-absolute-entry over free nodes.
double dual_norm(const DualVector& residual);

/// Pairing of a dual vector with a zero-trace field.
double dual_pairing(const DualVector& a, const GridFunction& h);

} // namespace apq
