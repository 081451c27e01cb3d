#include "apq/eigen.hpp"

#include "apq/errors.hpp"
#include "apq/modular.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace apq {

double rayleigh_quotient(const GridFunction& u, const ExponentField& p) {
  return modular_grad(u, p) / modular(u, p);
}

double weighted_rayleigh_quotient(const GridFunction& u, const ExponentField& p,
                                  const GridFunction& theta) {
  return modular_grad(u, p) / weighted_modular(u, theta, p);
}

double nonresonance_constant(double lambda_tilde) {
  if (!(lambda_tilde > 1.0)) {
    throw InvalidEigenvalue("weighted principal eigenvalue must exceed 1, got " +
                            std::to_string(lambda_tilde));
  }
  return (lambda_tilde - 1.0) / lambda_tilde;
}

namespace {

// Element-cached quotient state for the descent iteration. The denominator
// weight is 1 for the plain problem and theta(z) for the weighted one.
class QuotientState {
public:
  QuotientState(const Mesh& mesh, const ExponentField& p, const GridFunction* theta)
      : mesh_(mesh),
        exp_(p.barycenter_values().begin(), p.barycenter_values().end()),
        weight_(mesh.element_count(), 1.0),
        constant_p_(p.kind() == ExponentField::Kind::Constant),
        umean_(mesh.element_count()),
        gmag_(mesh.element_count()) {
    if (theta) {
      for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        weight_[e] = theta->at_barycenter(e);
      }
    }
  }

  void refresh(const GridFunction& u) {
    for (std::size_t e = 0; e < mesh_.element_count(); ++e) {
      umean_[e] = u.at_barycenter(e);
      gmag_[e] = u.gradient_norm_on(e);
    }
  }

  double numerator(double scale = 1.0) const {
    double s = 0.0;
    for (std::size_t e = 0; e < mesh_.element_count(); ++e) {
      if (gmag_[e] == 0.0) continue;
      s += mesh_.measure[e] * std::pow(scale * gmag_[e], exp_[e]);
    }
    return s;
  }

  double denominator(double scale = 1.0) const {
    double s = 0.0;
    for (std::size_t e = 0; e < mesh_.element_count(); ++e) {
      if (umean_[e] == 0.0 || weight_[e] == 0.0) continue;
      s += mesh_.measure[e] * weight_[e] * std::pow(scale * std::abs(umean_[e]), exp_[e]);
    }
    return s;
  }

  // Gradient of the quotient at the refreshed u, assembled sequentially.
  std::vector<double> quotient_gradient(const GridFunction& u, double quotient,
                                        double denom) const {
    std::vector<double> grad(u.size(), 0.0);
    const int nv = mesh_.verts_per_element();
    for (std::size_t e = 0; e < mesh_.element_count(); ++e) {
      const auto& el = mesh_.elements[e];
      const auto& bg = mesh_.basis_grad[e];
      const double pe = exp_[e];
      const double w = mesh_.measure[e];

      double flux[2] = {0.0, 0.0};
      if (gmag_[e] > 0.0) {
        const auto g = u.gradient_on(e);
        const double coeff = w * pe * std::pow(gmag_[e], pe - 2.0);
        flux[0] = coeff * g[0];
        flux[1] = coeff * g[1];
      }
      double mass = 0.0;
      if (umean_[e] != 0.0 && weight_[e] != 0.0) {
        mass = w * weight_[e] * pe * std::pow(std::abs(umean_[e]), pe - 2.0) * umean_[e] / nv;
      }
      for (int v = 0; v < nv; ++v) {
        const NodeIndex i = el[v];
        if (mesh_.is_boundary(i)) continue;
        grad[i] += (flux[0] * bg[v][0] + flux[1] * bg[v][1] - quotient * mass) / denom;
      }
    }
    return grad;
  }

  // Scale factor s with denominator(u / s) == 1; closed form for constant p,
  // safeguarded Newton in log-scale otherwise.
  double normalizing_scale() const {
    const double d = denominator();
    if (d <= 0.0) throw NumericFailure("eigen iterate vanished in the denominator modular");
    if (constant_p_) return std::pow(d, 1.0 / exp_.front());
    double tau = std::log(d) / exp_.front(); // initial guess: s = d^{1/p}
    for (int it = 0; it < 60; ++it) {
      const double s = std::exp(tau);
      double g = -1.0;
      double dg = 0.0;
      for (std::size_t e = 0; e < mesh_.element_count(); ++e) {
        if (umean_[e] == 0.0 || weight_[e] == 0.0) continue;
        const double term =
            mesh_.measure[e] * weight_[e] * std::pow(std::abs(umean_[e]) / s, exp_[e]);
        g += term;
        dg -= exp_[e] * term;
      }
      if (std::abs(g) < 1e-14) return s;
      tau -= g / dg;
    }
    return std::exp(tau);
  }

  // Quotient minimized over the ray {s u}; returns the best scale.
  double ray_minimizing_scale() const {
    auto value = [&](double logs) {
      const double s = std::exp(logs);
      return numerator(s) / denominator(s);
    };
    double a = -3.0;
    double b = 3.0;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = value(c);
    double fd = value(d);
    for (int it = 0; it < 60; ++it) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - gr * (b - a);
        fc = value(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + gr * (b - a);
        fd = value(d);
      }
    }
    return std::exp(0.5 * (a + b));
  }

private:
  const Mesh& mesh_;
  std::vector<double> exp_;
  std::vector<double> weight_;
  bool constant_p_;
  std::vector<double> umean_;
  std::vector<double> gmag_;
};

GridFunction bubble_seed(const MeshPtr& mesh) {
  GridFunction u(mesh);
  for (std::size_t i = 0; i < mesh->node_count(); ++i) {
    double v = std::sin(std::numbers::pi * mesh->nodes[i][0] / mesh->lengths[0]);
    if (mesh->dim == 2) {
      v *= std::sin(std::numbers::pi * mesh->nodes[i][1] / mesh->lengths[1]);
    }
    u[i] = v;
  }
  u.enforce_zero_trace();
  return u;
}

struct MinimizeOutcome {
  GridFunction u;
  double quotient;
  long iterations;
};

// Projected descent on the Rayleigh quotient: nodal absolute value keeps the
// iterate in the nonnegative cone (it never increases the quotient), the
// slice denominator == 1 is restored every iteration, and a periodic ray
// search handles the scale dependence of variable exponents.
MinimizeOutcome minimize_quotient(const MeshPtr& mesh, const ExponentField& p,
                                  const GridFunction* theta, const EigenOptions& opts,
                                  const char* stage) {
  QuotientState state(*mesh, p, theta);
  const bool scale_free = p.kind() == ExponentField::Kind::Constant;

  GridFunction u = bubble_seed(mesh);
  state.refresh(u);
  u.scale(1.0 / state.normalizing_scale());
  state.refresh(u);

  double denom = state.denominator();
  double quotient = state.numerator() / denom;
  std::vector<double> grad = state.quotient_gradient(u, quotient, denom);

  GridFunction u_prev = u;
  std::vector<double> grad_prev = grad;
  double step = 1e-2;
  int settled = 0;
  bool have_prev = false;

  long it = 0;
  for (; it < opts.max_iters; ++it) {
    if (have_prev) {
      // Barzilai-Borwein step from the last accepted move
      double ss = 0.0;
      double sy = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double si = u[i] - u_prev[i];
        ss += si * si;
        sy += si * (grad[i] - grad_prev[i]);
      }
      if (sy > 0.0 && ss > 0.0) step = ss / sy;
      step = std::clamp(step, 1e-14, 1e8);
    }

    u_prev = u;
    grad_prev = grad;
    const double q_old = quotient;

    double trial_step = step;
    GridFunction u_new = u;
    double q_new = quotient;
    for (int bt = 0; bt < 50; ++bt) {
      u_new = u;
      for (std::size_t i = 0; i < u.size(); ++i) u_new[i] = u[i] - trial_step * grad[i];
      for (std::size_t i = 0; i < u_new.size(); ++i) u_new[i] = std::abs(u_new[i]);
      u_new.enforce_zero_trace();
      state.refresh(u_new);
      const double d = state.denominator();
      if (d > 0.0) {
        q_new = state.numerator() / d;
        if (q_new <= q_old * (1.0 + 1e-6)) break;
      }
      trial_step *= 0.25;
    }
    u = u_new;
    u.scale(1.0 / state.normalizing_scale());

    if (!scale_free && (it % 64 == 63)) {
      state.refresh(u);
      u.scale(state.ray_minimizing_scale());
    }

    state.refresh(u);
    denom = state.denominator();
    quotient = state.numerator() / denom;
    grad = state.quotient_gradient(u, quotient, denom);
    have_prev = true;

    if (opts.log) {
      opts.log(IterRecord{stage, it, "quotient", quotient, trial_step});
    }

    if (std::abs(quotient - q_old) <= opts.tol * std::max(1.0, std::abs(q_old))) {
      if (++settled >= 3) break;
    } else {
      settled = 0;
    }
  }
  if (settled < 3) {
    throw NoConvergence("eigen quotient did not settle within " +
                        std::to_string(opts.max_iters) + " iterations");
  }

  if (!scale_free) {
    state.refresh(u);
    u.scale(state.ray_minimizing_scale());
    state.refresh(u);
    u.scale(1.0 / state.normalizing_scale());
    state.refresh(u);
    quotient = state.numerator() / state.denominator();
  }
  return {std::move(u), quotient, it};
}

} // namespace

EigenResult principal_eigenpair(const MeshPtr& mesh, const ExponentField& p,
                                const EigenOptions& opts) {
  auto out = minimize_quotient(mesh, p, nullptr, opts, "eigen");
  EigenResult res{out.quotient, std::move(out.u), {}, {}, out.iterations};
  return res;
}

double weighted_principal_eigenvalue(const MeshPtr& mesh, const ExponentField& p,
                                     const GridFunction& theta, double lambda1,
                                     const EigenOptions& opts) {
  double gap_sum = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (theta[i] < 0.0) {
      throw InvalidWeight("weight must be nonnegative, node " + std::to_string(i));
    }
    if (theta[i] > lambda1 * (1.0 + 1e-12)) {
      throw InvalidWeight("weight exceeds lambda1 at node " + std::to_string(i));
    }
    gap_sum += lambda1 - theta[i];
  }
  if (gap_sum / theta.size() < opts.weight_gap_rel * lambda1) {
    throw InvalidWeight("weight coincides with lambda1 up to the gap threshold");
  }
  bool any = false;
  for (std::size_t e = 0; e < mesh->element_count() && !any; ++e) {
    any = theta.at_barycenter(e) > 0.0;
  }
  if (!any) throw InvalidWeight("weight vanishes at every barycenter");

  auto out = minimize_quotient(mesh, p, &theta, opts, "eigen_weighted");
  return out.quotient;
}

} // namespace apq
