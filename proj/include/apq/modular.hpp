#pragma once

#include "apq/fields.hpp"

namespace apq {

/// Modular of a field: integral of |u|^{r(z)} by one-point barycenter
/// quadrature. Zero iff u vanishes at every barycenter.
double modular(const GridFunction& u, const ExponentField& r);

/// Modular of the gradient magnitude: integral of |Du|^{r(z)}.
double modular_grad(const GridFunction& u, const ExponentField& r);

/// Weighted modular: integral of theta(z) |u|^{p(z)}. Throws ZeroWeight if
/// theta vanishes at every barycenter.
double weighted_modular(const GridFunction& u, const GridFunction& theta, const ExponentField& p);

/// Luxemburg norm inf{lambda > 0 : modular(u / lambda) <= 1}, computed by
/// bracketing and bisection to relative tolerance tol. Returns 0 for u == 0
/// at all barycenters. Throws NumericFailure if no bracket is found within
/// 200 doublings.
double luxemburg_norm(const GridFunction& u, const ExponentField& r, double tol = 1e-12);

/// Luxemburg norm of the gradient magnitude.
double luxemburg_norm_grad(const GridFunction& u, const ExponentField& r, double tol = 1e-12);

/// Luxemburg norm with modular integral of theta(z) |u/lambda|^{p(z)}.
double weighted_luxemburg_norm(const GridFunction& u, const GridFunction& theta,
                               const ExponentField& p, double tol = 1e-12);

struct HolderPair {
  double lhs; // integral |u v|
  double rhs; // (1/r_- + 1/r'_-) * ||u||_r * ||v||_r'
};

/// Both sides of the variable-exponent Holder inequality; lhs <= rhs up to
/// root-finding tolerance.
HolderPair holder_pair(const GridFunction& u, const GridFunction& v, const ExponentField& r);

} // namespace apq
