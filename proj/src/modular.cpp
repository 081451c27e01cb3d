#include "apq/modular.hpp"

#include "apq/errors.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace apq {

namespace {

// Per-element quadrature samples: weight w_k, magnitude s_k >= 0, exponent
// e_k, so that the modular of u/lambda is sum w_k (s_k / lambda)^{e_k}.
struct Samples {
  std::vector<double> weight;
  std::vector<double> magnitude;
  std::vector<double> exponent;

  double modular_at(double lambda) const {
    double s = 0.0;
    for (std::size_t k = 0; k < weight.size(); ++k) {
      if (magnitude[k] == 0.0) continue;
      s += weight[k] * std::pow(magnitude[k] / lambda, exponent[k]);
    }
    return s;
  }

  double modular() const { return modular_at(1.0); }
  bool all_zero() const {
    for (const double m : magnitude) {
      if (m != 0.0) return false;
    }
    return true;
  }
};

Samples value_samples(const GridFunction& u, const ExponentField& r) {
  const Mesh& mesh = *u.mesh();
  Samples s;
  s.weight.resize(mesh.element_count());
  s.magnitude.resize(mesh.element_count());
  s.exponent.resize(mesh.element_count());
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    s.weight[e] = mesh.measure[e];
    s.magnitude[e] = std::abs(u.at_barycenter(e));
    s.exponent[e] = r.at_barycenter(e);
  }
  return s;
}

Samples gradient_samples(const GridFunction& u, const ExponentField& r) {
  const Mesh& mesh = *u.mesh();
  Samples s;
  s.weight.resize(mesh.element_count());
  s.magnitude.resize(mesh.element_count());
  s.exponent.resize(mesh.element_count());
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    s.weight[e] = mesh.measure[e];
    s.magnitude[e] = u.gradient_norm_on(e);
    s.exponent[e] = r.at_barycenter(e);
  }
  return s;
}

Samples weighted_samples(const GridFunction& u, const GridFunction& theta,
                         const ExponentField& p) {
  const Mesh& mesh = *u.mesh();
  Samples s;
  s.weight.resize(mesh.element_count());
  s.magnitude.resize(mesh.element_count());
  s.exponent.resize(mesh.element_count());
  bool any_weight = false;
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const double w = theta.at_barycenter(e);
    if (w < 0.0) {
      throw ValidationError("weight field must be nonnegative, element " + std::to_string(e));
    }
    any_weight = any_weight || w != 0.0;
    s.weight[e] = mesh.measure[e] * w;
    s.magnitude[e] = std::abs(u.at_barycenter(e));
    s.exponent[e] = p.at_barycenter(e);
  }
  if (!any_weight) throw ZeroWeight("weight field vanishes at every barycenter");
  return s;
}

// Strictly decreasing root of modular_at(lambda) = 1, bracketed from a
// scaled initial guess by doubling, then bisected to relative tol.
double luxemburg_root(const Samples& s, double r_minus, double tol) {
  if (!(tol > 0.0)) throw ValidationError("luxemburg norm tolerance must be positive");
  if (s.all_zero()) return 0.0;
  const double rho = s.modular();
  if (rho == 0.0) return 0.0;

  double guess = std::pow(rho, 1.0 / r_minus);
  if (!(guess > 0.0) || !std::isfinite(guess)) guess = 1.0;

  double lo = guess;
  double hi = guess;
  int steps = 0;
  while (s.modular_at(hi) > 1.0) {
    hi *= 2.0;
    if (++steps > 200) throw NumericFailure("luxemburg norm: no upper bracket in 200 doublings");
  }
  steps = 0;
  while (s.modular_at(lo) < 1.0 && lo > 0.0) {
    lo *= 0.5;
    if (++steps > 200) throw NumericFailure("luxemburg norm: no lower bracket in 200 halvings");
  }
  while (hi - lo > tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (s.modular_at(mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

} // namespace

double modular(const GridFunction& u, const ExponentField& r) {
  return value_samples(u, r).modular();
}

double modular_grad(const GridFunction& u, const ExponentField& r) {
  return gradient_samples(u, r).modular();
}

double weighted_modular(const GridFunction& u, const GridFunction& theta,
                        const ExponentField& p) {
  return weighted_samples(u, theta, p).modular();
}

double luxemburg_norm(const GridFunction& u, const ExponentField& r, double tol) {
  return luxemburg_root(value_samples(u, r), r.min_value(), tol);
}

double luxemburg_norm_grad(const GridFunction& u, const ExponentField& r, double tol) {
  return luxemburg_root(gradient_samples(u, r), r.min_value(), tol);
}

double weighted_luxemburg_norm(const GridFunction& u, const GridFunction& theta,
                               const ExponentField& p, double tol) {
  return luxemburg_root(weighted_samples(u, theta, p), p.min_value(), tol);
}

HolderPair holder_pair(const GridFunction& u, const GridFunction& v, const ExponentField& r) {
  const Mesh& mesh = *u.mesh();
  double lhs = 0.0;
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    lhs += mesh.measure[e] * std::abs(u.at_barycenter(e) * v.at_barycenter(e));
  }
  const ExponentField rc = r.conjugate();
  const double coeff = 1.0 / r.min_value() + 1.0 / rc.min_value();
  const double rhs = coeff * luxemburg_norm(u, r) * luxemburg_norm(v, rc);
  return {lhs, rhs};
}

} // namespace apq
