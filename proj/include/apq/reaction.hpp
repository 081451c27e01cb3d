#pragma once

#include "apq/fields.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace apq {

/// Perturbation f(z, x) and its primitive F. The built-in capped-concave
/// family f(z, x) = c0 * min(x, delta)^{mu(z)-1} (x >= 0, zero below) meets
/// every growth hypothesis by construction; custom tables are piecewise
/// linear in x, constant beyond the last knot, and are only checked by
/// sampling.
struct ReactionModel {
  enum class Kind { CappedConcave, CustomTable };

  Kind kind = Kind::CappedConcave;
  double c0 = 1.0;
  double delta = 1.0;
  ExponentField mu;
  GridFunction theta; // asymptotic slope field of the nonresonance condition
  std::vector<double> table_x; // CustomTable knots, ascending, table_x[0] == 0
  std::vector<double> table_f; // values at the knots, table_f[0] == 0

  ReactionModel(ExponentField mu_field, GridFunction theta_field, double c0_in,
                double delta_in);

  static ReactionModel capped(ExponentField mu_field, GridFunction theta_field,
                              double c0_in, double delta_in);
  static ReactionModel custom_table(ExponentField mu_field, GridFunction theta_field,
                                    std::vector<double> x, std::vector<double> f);

  /// f(z, x) with mu evaluated at z already.
  double value(double mu_z, double x) const;
  /// F(z, x) = integral of f(z, s) ds over [0, x]; closed form per segment.
  double primitive(double mu_z, double x) const;

  bool nondecreasing_in_x() const;
};

/// Sampled verification of the scaling condition
/// f(z, x/t) <= f(z, x) / t^{p(z)-1} on t in {0.1, ..., 0.9}, a 50-point x
/// grid on [0, 10 delta], at every node.
struct ScalingCheckReport {
  bool pass = true;
  double worst_violation = 0.0; // max over samples of f(x/t) t^{p-1} - f(x)
  double t_at = 0.0;
  double x_at = 0.0;
  std::size_t node_at = 0;
};

ScalingCheckReport check_scaling_condition(const ReactionModel& model, const ExponentField& p);

/// Frozen-gradient source g_v(z, x) = r_hat(z) |Dv(z)|^{tau(z)-1} + f(z, x).
/// The drive term is precomputed per element from the frozen field v and is
/// independent of x.
class FrozenReaction {
public:
  FrozenReaction(GridFunction r_hat, ExponentField tau, ReactionModel model,
                 const GridFunction& v);

  const ReactionModel& model() const { return model_; }
  std::span<const double> drive() const { return drive_; }
  bool convection_free() const { return convection_free_; }
  double drive_term(std::size_t element) const { return rhat_bar_[element] * drive_[element]; }

  /// g_v at the element barycenter.
  double source(std::size_t element, double x) const {
    return drive_term(element) + model_.value(mu_bar_[element], x);
  }
  /// G_v(z, x) = drive * r_hat * x + F(z, x) for x >= 0.
  double potential(std::size_t element, double x) const {
    return drive_term(element) * x + model_.primitive(mu_bar_[element], x);
  }

private:
  GridFunction r_hat_;
  ExponentField tau_;
  ReactionModel model_;
  bool convection_free_ = false;
  std::vector<double> drive_;    // |Dv|^{tau-1} per element
  std::vector<double> rhat_bar_; // r_hat at barycenters
  std::vector<double> mu_bar_;   // mu at barycenters
};

} // namespace apq
