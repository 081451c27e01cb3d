#include "apq/frozen_solver.hpp"

#include "apq/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace apq {

PositivityReport positivity_report(const GridFunction& u) {
  const Mesh& mesh = *u.mesh();
  PositivityReport rep;
  rep.interior_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mesh.node_count(); ++i) {
    if (!mesh.is_boundary(i)) rep.interior_min = std::min(rep.interior_min, u[i]);
  }

  // nearest interior neighbor (through a shared element) per boundary node
  std::vector<double> best_dist(mesh.node_count(), std::numeric_limits<double>::infinity());
  std::vector<double> best_value(mesh.node_count(), 0.0);
  const int nv = mesh.verts_per_element();
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const auto& el = mesh.elements[e];
    for (int a = 0; a < nv; ++a) {
      const NodeIndex bi = el[a];
      if (!mesh.is_boundary(bi)) continue;
      for (int b = 0; b < nv; ++b) {
        const NodeIndex ii = el[b];
        if (mesh.is_boundary(ii)) continue;
        const double dx = mesh.nodes[ii][0] - mesh.nodes[bi][0];
        const double dy = mesh.nodes[ii][1] - mesh.nodes[bi][1];
        const double d = std::hypot(dx, dy);
        if (d < best_dist[bi]) {
          best_dist[bi] = d;
          best_value[bi] = u[ii];
        }
      }
    }
  }
  rep.boundary_quotient_min = std::numeric_limits<double>::infinity();
  for (const NodeIndex bi : mesh.boundary_nodes) {
    if (std::isfinite(best_dist[bi])) {
      rep.boundary_quotient_min =
          std::min(rep.boundary_quotient_min, best_value[bi] / best_dist[bi]);
    }
  }
  return rep;
}

namespace {

// Pairing of an element-constant source with every interior hat function.
DualVector assemble_source(const Mesh& mesh, const std::vector<double>& s) {
  DualVector out(mesh.node_count(), 0.0);
  const int nv = mesh.verts_per_element();
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const double contrib = mesh.measure[e] * s[e] / nv;
    const auto& el = mesh.elements[e];
    for (int v = 0; v < nv; ++v) {
      if (!mesh.is_boundary(el[v])) out[el[v]] += contrib;
    }
  }
  return out;
}

struct DescentCallbacks {
  std::function<double(const GridFunction&)> energy;
  std::function<DualVector(const GridFunction&)> gradient;
  std::function<DualVector(const GridFunction&)> diagonal; // Jacobi scaling
};

struct DescentOutcome {
  GridFunction u;
  double residual = 0.0;
  long iterations = 0;
};

// Projected gradient descent on the nonnegative cone with Armijo
// backtracking. The direction is the Jacobi-scaled gradient and the step is
// seeded by a Barzilai-Borwein estimate in the scaled metric. Stops on the
// stationarity residual.
DescentOutcome project_descend(GridFunction u, const DescentCallbacks& cb, double tol,
                               long max_iters, const char* stage, const IterationSink& log,
                               std::vector<double>* history) {
  u.clamp_nonnegative();
  u.enforce_zero_trace();
  double energy = cb.energy(u);
  DualVector grad = cb.gradient(u);
  DualVector diag = cb.diagonal ? cb.diagonal(u) : DualVector(u.size(), 1.0);
  double res = dual_norm(grad);
  if (history) {
    history->clear();
    history->push_back(energy);
  }

  GridFunction u_prev = u;
  DualVector grad_prev = grad;
  bool have_prev = false;
  double step = 1.0;
  // nonmonotone Armijo reference window (Grippo-Lampariello-Lucidi); the
  // reported history still records the monotone envelope
  std::array<double, 10> window;
  window.fill(energy);
  // short memory of small BB2 steps for the adaptive step rule
  std::array<double, 9> bb2_memory;
  bb2_memory.fill(1.0);

  for (long it = 0; it < max_iters; ++it) {
    if (res <= tol) return {std::move(u), res, it};

    if (have_prev) {
      // adaptive Barzilai-Borwein step in the diag-scaled metric: the small
      // (BB2) step handles stiff spans, the large (BB1) step sweeps flat ones
      double sds = 0.0;
      double sy = 0.0;
      double ydy = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double si = u[i] - u_prev[i];
        const double yi = grad[i] - grad_prev[i];
        sds += diag[i] * si * si;
        sy += si * yi;
        ydy += yi * yi / diag[i];
      }
      if (sy > 0.0 && sds > 0.0 && ydy > 0.0) {
        const double bb1 = sds / sy;
        const double bb2 = sy / ydy;
        bb2_memory[static_cast<std::size_t>(it) % bb2_memory.size()] = bb2;
        if (bb2 / bb1 < 0.8) {
          step = *std::min_element(bb2_memory.begin(), bb2_memory.end());
        } else {
          step = bb1;
        }
        step = std::clamp(step, 1e-16, 1e8);
      }
    }

    GridFunction trial = u;
    double trial_energy = energy;
    double t = step;
    bool accepted = false;
    const double reference = *std::max_element(window.begin(), window.end());
    // below this, energy differences drown in round-off and the Armijo test
    // is uninformative; such steps are accepted if they do not increase the
    // energy beyond the noise floor
    const double noise_floor = 1e-14 * (1.0 + std::abs(energy));
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t i = 0; i < u.size(); ++i) {
        trial[i] = std::max(u[i] - t * grad[i] / diag[i], 0.0);
      }
      double ref = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) ref += grad[i] * (u[i] - trial[i]);
      if (!(ref > 0.0)) break; // constrained stationary point; no descent move left
      trial_energy = cb.energy(trial);
      if (trial_energy <= reference - 1e-4 * ref ||
          (ref <= noise_floor && trial_energy <= reference + noise_floor)) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      throw LineSearchFailure(std::string(stage) +
                              ": Armijo backtracking cannot decrease the energy (residual " +
                              std::to_string(res) + ")");
    }

    u_prev = u;
    grad_prev = grad;
    u = trial;
    energy = trial_energy;
    window[static_cast<std::size_t>(it) % window.size()] = energy;
    grad = cb.gradient(u);
    // refresh the scaling only between BB spans; a moving metric breaks the
    // step-pair consistency
    if (cb.diagonal && it % 25 == 24) diag = cb.diagonal(u);
    res = dual_norm(grad);
    have_prev = true;
    if (history && energy < history->back()) history->push_back(energy);
    if (log) log(IterRecord{stage, it, "residual", res, t});
  }
  throw NoConvergence(std::string(stage) + ": residual " + std::to_string(res) +
                      " above tolerance after " + std::to_string(max_iters) + " iterations");
}

// Largest strictly-negative energy point along the scaled-eigenfunction ray
// t in {2^-1, ..., 2^-20}; TrivialSolution when the scan stays nonnegative.
GridFunction negative_energy_seed(const GridFunction& u1,
                                  const std::function<double(const GridFunction&)>& energy,
                                  const char* what) {
  double best_energy = 0.0;
  double best_t = 0.0;
  GridFunction probe = u1;
  for (int k = 1; k <= 20; ++k) {
    const double t = std::ldexp(1.0, -k);
    probe = u1;
    probe.scale(t);
    const double e = energy(probe);
    if (e < best_energy) {
      best_energy = e;
      best_t = t;
    }
  }
  if (!(best_energy < 0.0)) {
    throw TrivialSolution(std::string(what) +
                          ": no negative energy along the eigenfunction ray; the mesh does not "
                          "resolve the concave term");
  }
  probe = u1;
  probe.scale(best_t);
  return probe;
}

} // namespace

double frozen_energy(const GridFunction& u, const FrozenReaction& fr, const EnergySpec& es) {
  const Mesh& mesh = *u.mesh();
  double reaction = 0.0;
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const double x = std::max(u.at_barycenter(e), 0.0);
    reaction += mesh.measure[e] * fr.potential(e, x);
  }
  return double_phase_energy(u, es) - reaction;
}

double auxiliary_energy(const GridFunction& u, const AuxiliarySpec& aux, const EnergySpec& es) {
  const Mesh& mesh = *u.mesh();
  double reaction = 0.0;
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const double x = std::max(u.at_barycenter(e), 0.0);
    if (x == 0.0) continue;
    const double me = aux.mu.at_barycenter(e);
    reaction += mesh.measure[e] * (aux.C8 / aux.r_aux * std::pow(x, aux.r_aux) -
                                   aux.c0 / me * std::pow(x, me));
  }
  return double_phase_energy(u, es) + reaction;
}

DualVector frozen_source_vector(const GridFunction& u, const FrozenReaction& fr) {
  const Mesh& mesh = *u.mesh();
  std::vector<double> s(mesh.element_count());
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    s[e] = fr.source(e, std::max(u.at_barycenter(e), 0.0));
  }
  return assemble_source(mesh, s);
}

double frozen_residual(const GridFunction& u, const FrozenReaction& fr, const EnergySpec& es) {
  DualVector r = apply_double_phase(u, es);
  const DualVector src = frozen_source_vector(u, fr);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= src[i];
  return dual_norm(r);
}

FrozenSolveResult solve_frozen(const Problem& problem, const GridFunction& v,
                               std::optional<GridFunction> seed, const IterationSink& log) {
  const EnergySpec es = problem.energy_spec();
  const FrozenReaction fr = problem.freeze(v);

  DescentCallbacks cb;
  cb.energy = [&](const GridFunction& u) { return frozen_energy(u, fr, es); };
  cb.gradient = [&](const GridFunction& u) {
    DualVector g = apply_double_phase(u, es);
    const DualVector src = frozen_source_vector(u, fr);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] -= src[i];
    return g;
  };
  cb.diagonal = [&](const GridFunction& u) { return double_phase_diagonal(u, es); };

  GridFunction start = seed ? std::move(*seed)
                            : negative_energy_seed(problem.eigen().u1, cb.energy, "frozen");

  FrozenSolveResult result{GridFunction(problem.mesh()), {}, 0.0, {}, 0};
  auto out = project_descend(std::move(start), cb, problem.spec().solver.tol_inner,
                             problem.spec().solver.max_inner, "frozen", log,
                             &result.energy_history);
  if (out.u.max_abs() == 0.0) {
    throw TrivialSolution("frozen problem minimizer is identically zero");
  }
  result.u0 = std::move(out.u);
  result.residual = out.residual;
  result.iterations = out.iterations;
  result.positivity = positivity_report(result.u0);
  return result;
}

GridFunction solve_auxiliary(const Problem& problem, std::optional<GridFunction> seed,
                             const IterationSink& log) {
  const EnergySpec es = problem.energy_spec();
  const AuxiliarySpec aux = problem.auxiliary();
  const Mesh& mesh = *problem.mesh();

  DescentCallbacks cb;
  cb.energy = [&](const GridFunction& u) { return auxiliary_energy(u, aux, es); };
  cb.gradient = [&](const GridFunction& u) {
    DualVector g = apply_double_phase(u, es);
    std::vector<double> s(mesh.element_count());
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
      const double x = std::max(u.at_barycenter(e), 0.0);
      if (x > 0.0) {
        const double me = aux.mu.at_barycenter(e);
        s[e] = aux.c0 * std::pow(x, me - 1.0) - aux.C8 * std::pow(x, aux.r_aux - 1.0);
      }
    }
    const DualVector src = assemble_source(mesh, s);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] -= src[i];
    return g;
  };
  cb.diagonal = [&](const GridFunction& u) { return double_phase_diagonal(u, es); };

  GridFunction start = seed ? std::move(*seed)
                            : negative_energy_seed(problem.eigen().u1, cb.energy, "auxiliary");
  auto out = project_descend(std::move(start), cb, problem.spec().solver.tol_inner,
                             problem.spec().solver.max_inner, "auxiliary", log, nullptr);
  if (out.u.max_abs() == 0.0) {
    throw TrivialSolution("auxiliary problem minimizer is identically zero");
  }
  return std::move(out.u);
}

double truncated_auxiliary_reaction(const GridFunction& u_cap, const AuxiliarySpec& aux,
                                    std::size_t element, double x) {
  const double cap = u_cap.at_barycenter(element);
  const double me = aux.mu.at_barycenter(element);
  const double arg = std::max(std::min(x, cap), 0.0);
  if (arg == 0.0) return 0.0;
  return aux.c0 * std::pow(arg, me - 1.0) - aux.C8 * std::pow(arg, aux.r_aux - 1.0);
}

MinimalSolveResult minimal_solution(const Problem& problem, const GridFunction& v,
                                    const GridFunction& u_bar, const IterationSink& log) {
  const EnergySpec es = problem.energy_spec();
  const FrozenReaction fr = problem.freeze(v);
  const Mesh& mesh = *problem.mesh();
  const SolverSpec& sv = problem.spec().solver;
  if (!fr.model().nondecreasing_in_x()) {
    throw ValidationError("minimal solution iteration requires a nondecreasing reaction");
  }

  MinimalSolveResult result{u_bar, {}, 0.0, 0.0, 0};
  GridFunction w = u_bar;

  for (long k = 1; k <= sv.max_middle; ++k) {
    // source frozen at the previous iterate; the inner problem is strictly convex
    std::vector<double> s(mesh.element_count());
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
      s[e] = fr.source(e, std::max(w.at_barycenter(e), 0.0));
    }
    const DualVector b = assemble_source(mesh, s);

    DescentCallbacks cb;
    cb.energy = [&](const GridFunction& x) {
      return double_phase_energy(x, es) - dual_pairing(b, x);
    };
    cb.gradient = [&](const GridFunction& x) {
      DualVector g = apply_double_phase(x, es);
      for (std::size_t i = 0; i < g.size(); ++i) g[i] -= b[i];
      return g;
    };
    cb.diagonal = [&](const GridFunction& x) { return double_phase_diagonal(x, es); };

    auto out = project_descend(w, cb, sv.tol_inner, sv.max_inner, "inner", log, nullptr);
    GridFunction w_next = std::move(out.u);
    result.inner_residual = out.residual;

    double below = 0.0;
    for (std::size_t i = 0; i < w_next.size(); ++i) {
      below = std::min(below, w_next[i] - u_bar[i]);
    }
    if (below < -1e-10) {
      throw OrderingViolation("iterate dropped " + std::to_string(-below) +
                              " below the auxiliary lower bound; discrete comparison failed");
    }

    GridFunction diff = w_next;
    diff.add_scaled(w, -1.0);
    const double inc = discrete_c1_norm(diff);
    result.increments.push_back(inc);
    if (log) log(IterRecord{"middle", k, "increment", inc, 0.0});
    w = std::move(w_next);
    result.middle_iterations = k;
    if (inc <= sv.tol_middle) {
      result.u = std::move(w);
      result.residual = frozen_residual(result.u, fr, es);
      return result;
    }
  }
  throw NoConvergence("minimal solution iteration: increment above tolerance after " +
                      std::to_string(sv.max_middle) + " middle iterations");
}

} // namespace apq
