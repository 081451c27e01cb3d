#include "apq/fixed_point.hpp"

#include "apq/errors.hpp"
#include "apq/hypotheses.hpp"
#include "apq/runtime.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

namespace apq {

double full_residual(const Problem& problem, const GridFunction& u) {
  const FrozenReaction self = problem.freeze(u);
  return frozen_residual(u, self, problem.energy_spec());
}

namespace {

struct PicardOutcome {
  GridFunction u;
  std::vector<double> increments;
  double last_frozen_residual = 0.0;
  double last_inner_residual = 0.0;
  long iterations = 0;
  bool converged = false;
};

// v <- (1 - omega) v + omega * scale * beta(v), from v = u_bar.
PicardOutcome damped_picard(const Problem& problem, const GridFunction& u_bar, double scale,
                            const char* stage, const IterationSink& log) {
  const SolverSpec& sv = problem.spec().solver;
  PicardOutcome out{u_bar, {}, 0.0, 0.0, 0, false};
  GridFunction v = u_bar;
  double omega = sv.damping;
  double prev_inc = std::numeric_limits<double>::infinity();
  int rises = 0;

  for (long n = 1; n <= sv.max_outer; ++n) {
    const MinimalSolveResult beta = minimal_solution(problem, v, u_bar, log);
    out.last_frozen_residual = beta.residual;
    out.last_inner_residual = beta.inner_residual;

    GridFunction v_new = v;
    v_new.scale(1.0 - omega);
    v_new.add_scaled(beta.u, omega * scale);

    GridFunction diff = v_new;
    diff.add_scaled(v, -1.0);
    const double inc = discrete_c1_norm(diff);
    out.increments.push_back(inc);
    if (log) log(IterRecord{stage, n, "increment", inc, omega});

    if (inc > prev_inc) {
      if (++rises >= 2) {
        omega = std::max(omega / 2.0, 1.0 / 16.0);
        rises = 0;
      }
    } else {
      rises = 0;
    }
    prev_inc = inc;
    v = std::move(v_new);
    out.iterations = n;
    if (inc <= sv.tol_outer) {
      out.converged = true;
      break;
    }
  }
  out.u = std::move(v);
  return out;
}

} // namespace

OuterReport run_fixed_point(const Problem& problem, const IterationSink& log) {
  enforce_hypotheses(problem, problem.eigen().lambda1);
  GridFunction u_bar = solve_auxiliary(problem, {}, log);

  PicardOutcome picard = damped_picard(problem, u_bar, 1.0, "outer", log);
  if (!picard.converged) {
    throw NoConvergence("outer iteration: increment " +
                        std::to_string(picard.increments.back()) + " above tolerance after " +
                        std::to_string(picard.iterations) + " iterations");
  }

  OuterReport rep{std::move(picard.increments),
                  std::move(picard.u),
                  std::move(u_bar),
                  0.0,
                  picard.last_frozen_residual,
                  picard.last_inner_residual,
                  picard.iterations,
                  {},
                  true,
                  {}};
  rep.full_residual = full_residual(problem, rep.final_u);
  rep.positivity = positivity_report(rep.final_u);
  for (std::size_t i = 0; i < rep.final_u.size(); ++i) {
    if (rep.final_u[i] < rep.u_bar[i] - 1e-12) {
      rep.ordering_ok = false;
      break;
    }
  }
  return rep;
}

std::vector<HomotopyRow> homotopy_scan(const Problem& problem, std::span<const double> t_grid,
                                       const IterationSink& log) {
  enforce_hypotheses(problem, problem.eigen().lambda1);
  const GridFunction u_bar = solve_auxiliary(problem, {}, log);

  std::vector<HomotopyRow> rows(t_grid.size());
  std::atomic<std::size_t> next{0};
  auto solve_one = [&](std::size_t k) {
    const double t = t_grid[k];
    PicardOutcome out = damped_picard(problem, u_bar, t, "homotopy", log);
    rows[k] = HomotopyRow{t, out.converged, discrete_c1_norm(out.u), out.iterations};
  };

  const int workers = std::min<int>(thread_count(), static_cast<int>(t_grid.size()));
  if (workers <= 1) {
    for (std::size_t k = 0; k < t_grid.size(); ++k) solve_one(k);
  } else {
    auto drain = [&] {
      for (;;) {
        const std::size_t k = next.fetch_add(1);
        if (k >= rows.size()) return;
        solve_one(k);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(drain);
    for (auto& th : pool) th.join();
  }
  return rows;
}

} // namespace apq
