#include "apq/problem.hpp"

#include "apq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace apq {

namespace {

std::vector<double> materialize(const MeshPtr& mesh, const FieldSpec& fs) {
  std::vector<double> v(mesh->node_count());
  switch (fs.kind) {
    case FieldSpec::Kind::Constant:
      std::fill(v.begin(), v.end(), fs.value);
      break;
    case FieldSpec::Kind::Affine:
      for (std::size_t i = 0; i < mesh->node_count(); ++i) {
        v[i] = fs.a + fs.b * mesh->nodes[i][0] +
               (mesh->dim == 2 ? fs.c * mesh->nodes[i][1] : 0.0);
      }
      break;
    case FieldSpec::Kind::Table:
      if (fs.table.size() != mesh->node_count()) {
        throw ValidationError("field table has " + std::to_string(fs.table.size()) +
                              " entries for " + std::to_string(mesh->node_count()) + " nodes");
      }
      v = fs.table;
      break;
  }
  return v;
}

} // namespace

GridFunction make_grid_function(const MeshPtr& mesh, const FieldSpec& fs) {
  return GridFunction(mesh, materialize(mesh, fs));
}

ExponentField make_exponent_field(const MeshPtr& mesh, const FieldSpec& fs) {
  switch (fs.kind) {
    case FieldSpec::Kind::Constant:
      return ExponentField::constant(mesh, fs.value);
    case FieldSpec::Kind::Affine:
      return ExponentField::affine(mesh, fs.a, fs.b, fs.c);
    case FieldSpec::Kind::Table:
      break;
  }
  return ExponentField::table(mesh, materialize(mesh, fs));
}

Problem::Problem(ProblemSpec spec)
    : spec_(std::move(spec)),
      mesh_(build_mesh(spec_.domain.dim, spec_.domain.lengths, spec_.domain.resolution)),
      p_(make_exponent_field(mesh_, spec_.p)),
      q_(make_exponent_field(mesh_, spec_.q)),
      tau_(make_exponent_field(mesh_, spec_.tau)),
      mu_(make_exponent_field(mesh_, spec_.mu)),
      r_hat_(make_grid_function(mesh_, spec_.coefficients.r_hat)) {
  for (std::size_t i = 0; i < r_hat_.size(); ++i) {
    if (r_hat_[i] < 0.0) {
      throw ValidationError("coefficients.r_hat must be nonnegative");
    }
  }
  const auto& s = spec_.solver;
  if (!(s.eps_reg >= 0.0 && s.eps_reg < 1e-6)) {
    throw ValidationError("solver.eps_reg must lie in [0, 1e-6)");
  }
  if (!(s.tol_inner > 0.0 && s.tol_middle > 0.0 && s.tol_outer > 0.0 && s.tol_eigen > 0.0)) {
    throw ValidationError("solver tolerances must be positive");
  }
  if (s.max_inner < 1 || s.max_middle < 1 || s.max_outer < 1 || s.max_eigen < 1) {
    throw ValidationError("solver iteration caps must be >= 1");
  }
  if (!(s.damping > 0.0 && s.damping <= 1.0)) {
    throw ValidationError("solver.damping must lie in (0, 1]");
  }
  for (const double t : s.homotopy_grid) {
    if (!(t > 0.0 && t < 1.0)) {
      throw ValidationError("solver.homotopy_grid values must lie in (0, 1)");
    }
  }
  if (spec_.coefficients.theta.kind == ThetaSpec::Kind::AutoFraction) {
    const double f = spec_.coefficients.theta.fraction;
    if (!(f > 0.0 && f < 1.0)) {
      throw ValidationError("coefficients.theta auto-fraction must lie in (0, 1)");
    }
  }
  if (!(spec_.coefficients.c0 > 0.0)) throw ValidationError("coefficients.c0 must be positive");
  if (!(spec_.coefficients.delta > 0.0)) {
    throw ValidationError("coefficients.delta must be positive");
  }
}

EnergySpec Problem::energy_spec() const { return EnergySpec(p_, q_, spec_.solver.eps_reg); }

EigenOptions Problem::eigen_options() const {
  EigenOptions opts;
  opts.tol = spec_.solver.tol_eigen;
  opts.max_iters = spec_.solver.max_eigen;
  return opts;
}

const EigenResult& Problem::compute_eigen(const IterationSink& log) {
  EigenOptions opts = eigen_options();
  opts.log = log;
  EigenResult res = principal_eigenpair(mesh_, p_, opts);

  GridFunction theta(mesh_);
  if (spec_.coefficients.theta.kind == ThetaSpec::Kind::AutoFraction) {
    theta.fill(spec_.coefficients.theta.fraction * res.lambda1);
  } else {
    theta = make_grid_function(mesh_, spec_.coefficients.theta.field);
  }
  theta_ = theta;

  // An inadmissible slope field leaves the weighted eigenvalue unset; the
  // hypothesis report carries the rejection.
  try {
    const double tilde = weighted_principal_eigenvalue(mesh_, p_, theta, res.lambda1, opts);
    res.weighted_lambda1 = tilde;
    res.C1 = nonresonance_constant(tilde);
  } catch (const InvalidWeight&) {
  }
  eigen_ = std::move(res);
  return *eigen_;
}

const EigenResult& Problem::eigen() const {
  if (!eigen_) throw Error("eigen stage has not been computed");
  return *eigen_;
}

const GridFunction& Problem::theta() const {
  if (!theta_) throw Error("theta requires the eigen stage");
  return *theta_;
}

ReactionModel Problem::reaction() const {
  return ReactionModel::capped(mu_, theta(), spec_.coefficients.c0, spec_.coefficients.delta);
}

AuxiliarySpec Problem::auxiliary() const {
  AuxiliarySpec aux{spec_.coefficients.c0, 1.0, 0.0, mu_};
  double r_aux;
  if (spec_.coefficients.r_aux) {
    r_aux = *spec_.coefficients.r_aux;
  } else {
    r_aux = p_.max_value() + 0.5;
    const double p_minus = p_.min_value();
    if (p_minus < mesh_->dim) {
      const double crit = mesh_->dim * p_minus / (mesh_->dim - p_minus);
      r_aux = std::min(r_aux, crit - 0.1);
    }
  }
  if (!(r_aux > p_.max_value())) {
    throw ValidationError("auxiliary exponent r must exceed p_+; got r = " +
                          std::to_string(r_aux));
  }
  const double p_minus = p_.min_value();
  if (p_minus < mesh_->dim) {
    const double crit = mesh_->dim * p_minus / (mesh_->dim - p_minus);
    if (!(r_aux < crit)) {
      throw ValidationError("auxiliary exponent r must stay below the critical exponent " +
                            std::to_string(crit));
    }
  }
  aux.r_aux = r_aux;
  aux.C8 = spec_.coefficients.C8.value_or(
      aux.c0 * std::max(1.0, std::pow(spec_.coefficients.delta, mu_.max_value() - r_aux)));
  if (!(aux.C8 > 0.0)) throw ValidationError("auxiliary constant C8 must be positive");
  return aux;
}

FrozenReaction Problem::freeze(const GridFunction& v) const {
  return FrozenReaction(r_hat_, tau_, reaction(), v);
}

} // namespace apq
