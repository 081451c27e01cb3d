#include "apq/reaction.hpp"

#include "apq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace apq {

ReactionModel::ReactionModel(ExponentField mu_field, GridFunction theta_field, double c0_in,
                             double delta_in)
    : c0(c0_in), delta(delta_in), mu(std::move(mu_field)), theta(std::move(theta_field)) {
  if (!(c0 > 0.0)) throw ValidationError("reaction c0 must be positive");
  if (!(delta > 0.0)) throw ValidationError("reaction delta must be positive");
}

ReactionModel ReactionModel::capped(ExponentField mu_field, GridFunction theta_field,
                                    double c0_in, double delta_in) {
  return ReactionModel(std::move(mu_field), std::move(theta_field), c0_in, delta_in);
}

ReactionModel ReactionModel::custom_table(ExponentField mu_field, GridFunction theta_field,
                                          std::vector<double> x, std::vector<double> f) {
  if (x.size() < 2 || x.size() != f.size()) {
    throw ValidationError("reaction table needs matching x/f arrays with >= 2 knots");
  }
  if (x.front() != 0.0 || f.front() != 0.0) {
    throw ValidationError("reaction table must start at (0, 0)");
  }
  if (!std::is_sorted(x.begin(), x.end())) {
    throw ValidationError("reaction table knots must be ascending");
  }
  ReactionModel m(std::move(mu_field), std::move(theta_field), 1.0, x.back());
  m.kind = Kind::CustomTable;
  m.table_x = std::move(x);
  m.table_f = std::move(f);
  return m;
}

double ReactionModel::value(double mu_z, double x) const {
  if (x <= 0.0) return 0.0;
  if (kind == Kind::CappedConcave) {
    return c0 * std::pow(std::min(x, delta), mu_z - 1.0);
  }
  if (x >= table_x.back()) return table_f.back();
  const auto it = std::upper_bound(table_x.begin(), table_x.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - table_x.begin());
  const double t = (x - table_x[k - 1]) / (table_x[k] - table_x[k - 1]);
  return table_f[k - 1] + t * (table_f[k] - table_f[k - 1]);
}

double ReactionModel::primitive(double mu_z, double x) const {
  if (x <= 0.0) return 0.0;
  if (kind == Kind::CappedConcave) {
    if (x <= delta) return c0 / mu_z * std::pow(x, mu_z);
    return c0 / mu_z * std::pow(delta, mu_z) + c0 * std::pow(delta, mu_z - 1.0) * (x - delta);
  }
  double acc = 0.0;
  double prev_x = table_x.front();
  double prev_f = table_f.front();
  for (std::size_t k = 1; k < table_x.size(); ++k) {
    const double seg_end = std::min(x, table_x[k]);
    if (seg_end > prev_x) {
      const double t = (seg_end - prev_x) / (table_x[k] - prev_x);
      const double f_end = prev_f + t * (table_f[k] - prev_f);
      acc += 0.5 * (prev_f + f_end) * (seg_end - prev_x);
    }
    if (x <= table_x[k]) return acc;
    prev_x = table_x[k];
    prev_f = table_f[k];
  }
  return acc + table_f.back() * (x - table_x.back());
}

bool ReactionModel::nondecreasing_in_x() const {
  if (kind == Kind::CappedConcave) return true;
  for (std::size_t k = 1; k < table_f.size(); ++k) {
    if (table_f[k] < table_f[k - 1]) return false;
  }
  return true;
}

ScalingCheckReport check_scaling_condition(const ReactionModel& model, const ExponentField& p) {
  ScalingCheckReport rep;
  const double x_max = 10.0 * model.delta;
  constexpr int kXSamples = 50;
  for (std::size_t node = 0; node < p.node_values().size(); ++node) {
    const double pz = p.at_node(node);
    const double mz = model.mu.at_node(node);
    for (int ti = 1; ti <= 9; ++ti) {
      const double t = 0.1 * ti;
      const double scale = std::pow(t, pz - 1.0);
      for (int xi = 0; xi <= kXSamples; ++xi) {
        const double x = x_max * xi / kXSamples;
        const double violation = model.value(mz, x / t) * scale - model.value(mz, x);
        if (violation > rep.worst_violation) {
          rep.worst_violation = violation;
          rep.t_at = t;
          rep.x_at = x;
          rep.node_at = node;
        }
      }
    }
  }
  rep.pass = rep.worst_violation <= 1e-12;
  return rep;
}

FrozenReaction::FrozenReaction(GridFunction r_hat, ExponentField tau, ReactionModel model,
                               const GridFunction& v)
    : r_hat_(std::move(r_hat)), tau_(std::move(tau)), model_(std::move(model)) {
  const Mesh& mesh = *r_hat_.mesh();
  bool any_positive = false;
  for (std::size_t i = 0; i < r_hat_.size(); ++i) {
    if (r_hat_[i] < 0.0) {
      throw ValidationError("convection coefficient must be nonnegative, node " +
                            std::to_string(i));
    }
    any_positive = any_positive || r_hat_[i] > 0.0;
  }
  // r_hat == 0 is the allowed convection-free degenerate case; the
  // hypothesis report flags it separately.
  convection_free_ = !any_positive;

  drive_.resize(mesh.element_count());
  rhat_bar_.resize(mesh.element_count());
  mu_bar_.resize(mesh.element_count());
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const double g = v.gradient_norm_on(e);
    const double te = tau_.at_barycenter(e);
    drive_[e] = g > 0.0 ? std::pow(g, te - 1.0) : 0.0;
    rhat_bar_[e] = r_hat_.at_barycenter(e);
    mu_bar_[e] = model_.mu.at_barycenter(e);
  }
}

} // namespace apq
