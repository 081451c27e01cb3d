#pragma once

#include "apq/eigen.hpp"
#include "apq/fields.hpp"
#include "apq/mesh.hpp"
#include "apq/operators.hpp"
#include "apq/reaction.hpp"

#include <optional>
#include <string>
#include <vector>

namespace apq {

/// Serializable description of a scalar field on the mesh.
struct FieldSpec {
  enum class Kind { Constant, Affine, Table };
  Kind kind = Kind::Constant;
  double value = 0.0;              // Constant
  double a = 0.0, b = 0.0, c = 0.0; // Affine: a + b x + c y
  std::vector<double> table;       // Table: one value per node
};

/// Nonresonance slope: either an explicit field or fraction * lambda1.
struct ThetaSpec {
  enum class Kind { AutoFraction, Field };
  Kind kind = Kind::AutoFraction;
  double fraction = 0.5; // in (0, 1)
  FieldSpec field;
};

struct DomainSpec {
  int dim = 1;
  std::vector<double> lengths{1.0};
  std::vector<int> resolution{128};
};

struct CoefficientSpec {
  FieldSpec r_hat{FieldSpec::Kind::Constant, 0.1};
  ThetaSpec theta;
  double c0 = 1.0;
  double delta = 1.0;
  std::optional<double> C8;    // default c0 * max(1, delta^{mu_+ - r_aux})
  std::optional<double> r_aux; // default p_+ + 0.5 capped below p_-^* - 0.1
};

struct SolverSpec {
  double eps_reg = 1e-10;
  double tol_inner = 1e-9;
  double tol_middle = 1e-8;
  double tol_outer = 1e-6;
  double tol_eigen = 1e-10;
  long max_inner = 10000;
  long max_middle = 500;
  long max_outer = 100;
  long max_eigen = 50000;
  double damping = 1.0;
  std::vector<double> homotopy_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  double homotopy_bound = 1e3;
};

struct OutputSpec {
  std::string directory = "out";
  std::vector<std::string> formats{"csv"};
};

/// Full problem description: domain, exponents, coefficients, reaction
/// parameters and solver tolerances.
struct ProblemSpec {
  DomainSpec domain;
  FieldSpec p{FieldSpec::Kind::Constant, 2.2};
  FieldSpec q{FieldSpec::Kind::Constant, 1.8};
  FieldSpec tau{FieldSpec::Kind::Constant, 1.5};
  FieldSpec mu{FieldSpec::Kind::Constant, 1.4};
  CoefficientSpec coefficients;
  SolverSpec solver;
  OutputSpec output;
};

/// Data of the auxiliary lower-bound problem.
struct AuxiliarySpec {
  double c0;
  double C8;
  double r_aux; // constant exponent in (p_+, p_-^*)
  ExponentField mu;
};

GridFunction make_grid_function(const MeshPtr& mesh, const FieldSpec& fs);
ExponentField make_exponent_field(const MeshPtr& mesh, const FieldSpec& fs);

/// Instantiated problem: mesh, materialized fields, and staged results.
/// Construction performs structural validation only (fields well formed and
/// in E1); ordering hypotheses are evaluated by the hypothesis module.
class Problem {
public:
  explicit Problem(ProblemSpec spec);

  const ProblemSpec& spec() const { return spec_; }
  const MeshPtr& mesh() const { return mesh_; }
  const ExponentField& p() const { return p_; }
  const ExponentField& q() const { return q_; }
  const ExponentField& tau() const { return tau_; }
  const ExponentField& mu() const { return mu_; }
  const GridFunction& r_hat() const { return r_hat_; }

  EnergySpec energy_spec() const;

  /// Runs the eigen stage: principal pair, resolved theta, weighted
  /// eigenvalue and the nonresonance constant.
  const EigenResult& compute_eigen(const IterationSink& log = {});
  bool eigen_ready() const { return eigen_.has_value(); }
  const EigenResult& eigen() const; // throws if the stage has not run
  const GridFunction& theta() const; // resolved slope field; needs eigen

  ReactionModel reaction() const;    // built-in capped model; needs eigen
  AuxiliarySpec auxiliary() const;   // defaults applied; needs nothing
  FrozenReaction freeze(const GridFunction& v) const; // needs eigen (theta)

  EigenOptions eigen_options() const;

private:
  ProblemSpec spec_;
  MeshPtr mesh_;
  ExponentField p_;
  ExponentField q_;
  ExponentField tau_;
  ExponentField mu_;
  GridFunction r_hat_;
  std::optional<EigenResult> eigen_;
  std::optional<GridFunction> theta_;
};

} // namespace apq
