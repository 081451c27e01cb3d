#include "apq/run.hpp"

#include "apq/config_io.hpp"
#include "apq/errors.hpp"
#include "apq/fixed_point.hpp"
#include "apq/frozen_solver.hpp"
#include "apq/hypotheses.hpp"
#include "apq/output.hpp"
#include "apq/runtime.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace apq {

namespace {

using nlohmann::json;

json positivity_to_json(const PositivityReport& p) {
  return {{"interior_min", p.interior_min}, {"boundary_quotient_min", p.boundary_quotient_min}};
}

json hypothesis_to_json(const HypothesisReport& rep) {
  auto clauses = [](const std::vector<HypothesisClause>& list) {
    json arr = json::array();
    for (const auto& c : list) {
      arr.push_back({{"name", c.name}, {"ok", c.ok}, {"verified", c.verified}});
    }
    return arr;
  };
  return {{"h0_ok", rep.h0_ok}, {"h1_ok", rep.h1_ok}, {"h0", clauses(rep.h0)},
          {"h1", clauses(rep.h1)}, {"messages", rep.messages()}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
}

void write_field_artifacts(const ProblemSpec& spec, const std::filesystem::path& dir,
                           const std::string& name, const GridFunction& u) {
  bool csv = false;
  bool vtk = false;
  for (const auto& f : spec.output.formats) {
    csv = csv || f == "csv";
    vtk = vtk || f == "vtk";
  }
  if (csv) write_field_csv(dir / (name + ".csv"), u);
  if (vtk && u.mesh()->dim == 2) write_field_vtk(dir / (name + ".vtk"), u, name);
}

const char* error_kind(const Error& e) {
  if (dynamic_cast<const InvalidMesh*>(&e)) return "InvalidMesh";
  if (dynamic_cast<const NumericFailure*>(&e)) return "NumericFailure";
  if (dynamic_cast<const ZeroWeight*>(&e)) return "ZeroWeight";
  if (dynamic_cast<const InvalidWeight*>(&e)) return "InvalidWeight";
  if (dynamic_cast<const InvalidEigenvalue*>(&e)) return "InvalidEigenvalue";
  if (dynamic_cast<const NoConvergence*>(&e)) return "NoConvergence";
  if (dynamic_cast<const LineSearchFailure*>(&e)) return "LineSearchFailure";
  if (dynamic_cast<const TrivialSolution*>(&e)) return "TrivialSolution";
  if (dynamic_cast<const OrderingViolation*>(&e)) return "OrderingViolation";
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const ValidationError*>(&e)) return "ValidationError";
  return "Error";
}

} // namespace

Stage stage_from_name(const std::string& name) {
  if (name == "check") return Stage::Check;
  if (name == "eigen") return Stage::Eigen;
  if (name == "aux") return Stage::Aux;
  if (name == "frozen") return Stage::Frozen;
  if (name == "solve") return Stage::Solve;
  if (name == "homotopy") return Stage::Homotopy;
  throw ValidationError("unknown stage '" + name + "'");
}

int run_stage(const ProblemSpec& spec, Stage stage, const RunOptions& opts) {
  set_thread_count(opts.threads);
  const std::filesystem::path dir =
      opts.out_dir.empty() ? std::filesystem::path(spec.output.directory)
                           : std::filesystem::path(opts.out_dir);
  std::filesystem::create_directories(dir);
  write_text(dir / "resolved-config.json", resolved_config_text(spec));

  JsonlLogger logger(dir / "log.jsonl");
  const IterationSink log = logger.sink();

  json summary;
  summary["seed"] = opts.seed;
  summary["threads"] = opts.threads;

  try {
    Problem problem(spec);
    const EigenResult& eig = problem.compute_eigen(log);
    summary["lambda1"] = eig.lambda1;
    if (eig.weighted_lambda1) summary["lambda1_weighted"] = *eig.weighted_lambda1;
    if (eig.C1) summary["C1"] = *eig.C1;

    const HypothesisReport hyp = check_hypotheses(problem, eig.lambda1);
    summary["hypotheses"] = hypothesis_to_json(hyp);
    summary["h0_ok"] = hyp.h0_ok;
    summary["h1_ok"] = hyp.h1_ok;

    switch (stage) {
      case Stage::Check: {
        // theta-dependent clauses reject here; the static ones rejected at parse
        enforce_hypotheses(problem, eig.lambda1);
        for (const auto& clause : hyp.h1) {
          if (!clause.ok) throw ValidationError(clause.message);
        }
        break;
      }
      case Stage::Eigen: {
        write_field_artifacts(spec, dir, "u1", eig.u1);
        break;
      }
      case Stage::Aux: {
        enforce_hypotheses(problem, eig.lambda1);
        const GridFunction u_bar = solve_auxiliary(problem, {}, log);
        write_field_artifacts(spec, dir, "u_bar", u_bar);
        summary["positivity"] = positivity_to_json(positivity_report(u_bar));
        summary["u_bar_max"] = u_bar.max_value();
        break;
      }
      case Stage::Frozen: {
        enforce_hypotheses(problem, eig.lambda1);
        GridFunction v(problem.mesh());
        if (opts.frozen_v != "zero") {
          v = read_field_csv(opts.frozen_v, problem.mesh());
          v.enforce_zero_trace();
        }
        const GridFunction u_bar = solve_auxiliary(problem, {}, log);
        const FrozenSolveResult direct = solve_frozen(problem, v, {}, log);
        const MinimalSolveResult minimal = minimal_solution(problem, v, u_bar, log);
        write_field_artifacts(spec, dir, "u_bar", u_bar);
        write_field_artifacts(spec, dir, "u0", direct.u0);
        write_field_artifacts(spec, dir, "u_tilde", minimal.u);
        summary["residuals"] = {{"inner", direct.residual}, {"middle", minimal.residual}};
        summary["positivity"] = positivity_to_json(positivity_report(minimal.u));
        bool ordering_ok = true;
        for (std::size_t i = 0; i < minimal.u.size(); ++i) {
          ordering_ok = ordering_ok && minimal.u[i] >= u_bar[i] - 1e-12;
        }
        summary["ordering_ok"] = ordering_ok;
        summary["middle_iterations"] = minimal.middle_iterations;
        break;
      }
      case Stage::Solve: {
        const OuterReport rep = run_fixed_point(problem, log);
        write_field_artifacts(spec, dir, "u_bar", rep.u_bar);
        write_field_artifacts(spec, dir, "final_u", rep.final_u);
        summary["residuals"] = {{"inner", rep.inner_residual},
                                {"middle", rep.frozen_residual},
                                {"outer", rep.increments.back()},
                                {"full", rep.full_residual}};
        summary["positivity"] = positivity_to_json(rep.positivity);
        summary["ordering_ok"] = rep.ordering_ok;
        summary["outer_iterations"] = rep.outer_iterations;
        summary["outer_increments"] = rep.increments;
        break;
      }
      case Stage::Homotopy: {
        const auto rows = homotopy_scan(problem, spec.solver.homotopy_grid, log);
        json table = json::array();
        bool all_converged = true;
        bool bounded = true;
        for (const auto& row : rows) {
          table.push_back({{"t", row.t},
                           {"converged", row.converged},
                           {"c1_norm", row.c1_norm},
                           {"iterations", row.iterations}});
          all_converged = all_converged && row.converged;
          bounded = bounded && row.c1_norm <= spec.solver.homotopy_bound;
        }
        summary["homotopy"] = table;
        summary["homotopy_all_converged"] = all_converged;
        summary["homotopy_bounded"] = bounded;
        break;
      }
    }
    write_text(dir / "summary.json", summary.dump(2) + "\n");
    return 0;
  } catch (const Error& e) {
    json err = {{"error", {{"type", error_kind(e)}, {"message", e.what()}}}};
    write_text(dir / "error.json", err.dump(2) + "\n");
    std::cerr << error_kind(e) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    json err = {{"error", {{"type", "Error"}, {"message", e.what()}}}};
    write_text(dir / "error.json", err.dump(2) + "\n");
    std::cerr << "Error: " << e.what() << "\n";
    return 1;
  }
}

} // namespace apq
