#include "apq/operators.hpp"

#include "apq/errors.hpp"
#include "apq/runtime.hpp"

#include <cmath>
#include <string>

namespace apq {

EnergySpec::EnergySpec(ExponentField p_field, std::optional<ExponentField> q_field, double eps)
    : p(std::move(p_field)), q(std::move(q_field)), eps_reg(eps) {
  if (q && !(q->max_value() < p.min_value())) {
    throw ValidationError("energy spec violates q_+ < p_-: q_+ = " +
                          std::to_string(q->max_value()) + ", p_- = " +
                          std::to_string(p.min_value()));
  }
  if (!(eps_reg >= 0.0) || !(eps_reg < 1e-6)) {
    throw ValidationError("eps_reg must lie in [0, 1e-6)");
  }
}

namespace {

// Single-phase energy with E(0) = 0 offset; gradients squared come in.
double phase_energy(const Mesh& mesh, const std::vector<double>& grad_sq,
                    const ExponentField& r, double eps) {
  const double eps_sq = eps * eps;
  std::vector<double> partial(chunk_count(mesh.element_count()), 0.0);
  for_each_chunk(mesh.element_count(), [&](std::size_t b, std::size_t e, std::size_t c) {
    double s = 0.0;
    for (std::size_t k = b; k < e; ++k) {
      const double rk = r.at_barycenter(k);
      // offset written exactly as the zero-gradient main term, so E(0) == 0
      const double offset = eps > 0.0 ? std::pow(eps_sq, 0.5 * rk) : 0.0;
      s += mesh.measure[k] / rk * (std::pow(grad_sq[k] + eps_sq, 0.5 * rk) - offset);
    }
    partial[c] = s;
  });
  double total = 0.0;
  for (const double s : partial) total += s;
  return total;
}

std::vector<double> gradient_squares(const GridFunction& u) {
  const Mesh& mesh = *u.mesh();
  std::vector<double> gsq(mesh.element_count());
  for_each_chunk(mesh.element_count(), [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t k = b; k < e; ++k) {
      const auto g = u.gradient_on(k);
      gsq[k] = g[0] * g[0] + g[1] * g[1];
    }
  });
  return gsq;
}

// Adds the weak action of one phase into out. Flux coefficients are computed
// element-parallel; the scatter is sequential for a deterministic sum.
void accumulate_plaplacian(const GridFunction& u, const ExponentField& r, double eps,
                           DualVector& out) {
  const Mesh& mesh = *u.mesh();
  const double eps_sq = eps * eps;
  const int nv = mesh.verts_per_element();

  std::vector<std::array<double, 2>> flux(mesh.element_count());
  for_each_chunk(mesh.element_count(), [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t k = b; k < e; ++k) {
      const auto g = u.gradient_on(k);
      const double gsq = g[0] * g[0] + g[1] * g[1] + eps_sq;
      double coeff = 0.0;
      if (gsq > 0.0) coeff = std::pow(gsq, 0.5 * (r.at_barycenter(k) - 2.0));
      coeff *= mesh.measure[k];
      flux[k] = {coeff * g[0], coeff * g[1]};
    }
  });

  for (std::size_t k = 0; k < mesh.element_count(); ++k) {
    const auto& el = mesh.elements[k];
    const auto& bg = mesh.basis_grad[k];
    for (int v = 0; v < nv; ++v) {
      const NodeIndex i = el[v];
      if (mesh.is_boundary(i)) continue;
      out[i] += flux[k][0] * bg[v][0] + flux[k][1] * bg[v][1];
    }
  }
}

} // namespace

double double_phase_energy(const GridFunction& u, const EnergySpec& spec) {
  const auto gsq = gradient_squares(u);
  double e = phase_energy(*u.mesh(), gsq, spec.p, spec.eps_reg);
  if (spec.q) e += phase_energy(*u.mesh(), gsq, *spec.q, spec.eps_reg);
  return e;
}

DualVector apply_plaplacian(const GridFunction& u, const ExponentField& r, double eps_reg) {
  DualVector out(u.size(), 0.0);
  accumulate_plaplacian(u, r, eps_reg, out);
  return out;
}

DualVector apply_double_phase(const GridFunction& u, const EnergySpec& spec) {
  DualVector out(u.size(), 0.0);
  accumulate_plaplacian(u, spec.p, spec.eps_reg, out);
  if (spec.q) accumulate_plaplacian(u, *spec.q, spec.eps_reg, out);
  return out;
}

DualVector double_phase_diagonal(const GridFunction& u, const EnergySpec& spec) {
  const Mesh& mesh = *u.mesh();
  const double eps_sq = spec.eps_reg * spec.eps_reg;
  const int nv = mesh.verts_per_element();
  DualVector diag(u.size(), 0.0);

  auto accumulate = [&](const ExponentField& r) {
    for (std::size_t k = 0; k < mesh.element_count(); ++k) {
      const auto g = u.gradient_on(k);
      const double gsq = g[0] * g[0] + g[1] * g[1] + eps_sq;
      if (gsq == 0.0) continue;
      const double rk = r.at_barycenter(k);
      const double c1 = std::pow(gsq, 0.5 * (rk - 2.0));
      const double c2 = (rk - 2.0) * std::pow(gsq, 0.5 * (rk - 4.0));
      const auto& el = mesh.elements[k];
      const auto& bg = mesh.basis_grad[k];
      for (int v = 0; v < nv; ++v) {
        const NodeIndex i = el[v];
        if (mesh.is_boundary(i)) continue;
        const double phi_sq = bg[v][0] * bg[v][0] + bg[v][1] * bg[v][1];
        const double g_phi = g[0] * bg[v][0] + g[1] * bg[v][1];
        // c1 phi^2 + c2 (g . phi)^2 >= (r-1) c1 phi^2 > 0 by Cauchy-Schwarz
        diag[i] += mesh.measure[k] * (c1 * phi_sq + c2 * g_phi * g_phi);
      }
    }
  };
  accumulate(spec.p);
  if (spec.q) accumulate(*spec.q);

  double top = 0.0;
  for (const double d : diag) top = std::max(top, d);
  if (top == 0.0) top = 1.0;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    diag[i] = mesh.is_boundary(i) ? 1.0 : std::max(diag[i], 1e-12 * top);
  }
  return diag;
}

double dual_norm(const DualVector& residual) {
  double m = 0.0;
  for (const double v : residual) m = std::max(m, std::abs(v));
  return m;
}

double dual_pairing(const DualVector& a, const GridFunction& h) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * h[i];
  return s;
}

} // namespace apq
