#include "apq/hypotheses.hpp"

#include "apq/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace apq {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

HypothesisClause ordering_clause(const std::string& name, double lhs, double rhs,
                                 const char* lhs_name, const char* rhs_name) {
  HypothesisClause c{name, lhs < rhs, true, ""};
  if (!c.ok) {
    c.message = name + " violated: " + lhs_name + " = " + num(lhs) + ", " + rhs_name + " = " +
                num(rhs);
  }
  return c;
}

double critical_of_min(const ExponentField& p, int dim) {
  const double p_minus = p.min_value();
  return p_minus < dim ? dim * p_minus / (dim - p_minus)
                       : std::numeric_limits<double>::infinity();
}

std::vector<HypothesisClause> build_h0(const Problem& prob) {
  std::vector<HypothesisClause> h0;
  const auto& p = prob.p();
  h0.push_back(ordering_clause("H0: tau_+ < p_-", prob.tau().max_value(), p.min_value(),
                               "tau_+", "p_-"));
  h0.push_back(ordering_clause("H0: q_+ < p_-", prob.q().max_value(), p.min_value(), "q_+",
                               "p_-"));
  h0.push_back(ordering_clause("H0: p_+ < p_-^*", p.max_value(),
                               critical_of_min(p, prob.mesh()->dim), "p_+", "p_-^*"));

  {
    const double spread = p.max_value() - p.min_value();
    HypothesisClause c{"H0: 0 <= p_+ - p_- <= 1", spread >= 0.0 && spread <= 1.0, true, ""};
    if (!c.ok) c.message = "H0: p_+ - p_- = " + num(spread) + " exceeds 1";
    h0.push_back(c);
  }
  {
    bool nonneg = true;
    bool nonzero = false;
    for (const double v : prob.r_hat().values()) {
      nonneg = nonneg && v >= 0.0;
      nonzero = nonzero || v > 0.0;
    }
    HypothesisClause c{"H0: r_hat >= 0 and r_hat != 0", nonneg && nonzero, true, ""};
    if (!nonneg) {
      c.message = "H0: r_hat takes negative values";
    } else if (!nonzero) {
      c.message = "H0: r_hat vanishes identically (convection-free degenerate case)";
    }
    h0.push_back(c);
  }
  {
    HypothesisClause c{"H0: p monotone along a direction", true, true, ""};
    switch (p.kind()) {
      case ExponentField::Kind::Constant:
        break; // constant p is monotone along every line
      case ExponentField::Kind::Affine: {
        // affine p is monotone along every direction; certify with eta = grad p
        const auto ab = p.affine_coefficients();
        c.message = "certified with eta = (" + num(ab[1]) + ", " + num(ab[2]) + ")";
        break;
      }
      case ExponentField::Kind::Table:
        c.verified = false;
        c.message = "not verified for nodal-table exponents";
        break;
    }
    h0.push_back(c);
  }
  return h0;
}

std::vector<HypothesisClause> build_h1(const Problem& prob, double lambda1) {
  std::vector<HypothesisClause> h1;
  const ReactionModel model = prob.reaction();
  const auto& mu = prob.mu();
  const auto& theta = prob.theta();

  {
    // H1(i): f(z,0) = 0, 0 <= f <= a_rho on [0, rho]
    HypothesisClause c{"H1: 0 <= f <= a_rho with f(z,0) = 0", true, true, ""};
    for (const double rho : {1.0, 10.0}) {
      const double a_rho =
          model.c0 * std::pow(std::max(model.delta, rho), mu.max_value() - 1.0) + model.c0;
      for (std::size_t i = 0; i < mu.node_values().size() && c.ok; ++i) {
        const double mz = mu.at_node(i);
        if (model.value(mz, 0.0) != 0.0) {
          c.ok = false;
          c.message = "H1: f(z,0) != 0";
          break;
        }
        for (int k = 0; k <= 50; ++k) {
          const double x = rho * k / 50.0;
          const double f = model.value(mz, x);
          if (f < 0.0 || f > a_rho) {
            c.ok = false;
            c.message = "H1: f out of [0, a_rho] at x = " + num(x);
            break;
          }
        }
      }
    }
    h1.push_back(c);
  }
  {
    // H1(ii): theta <= lambda1 nodewise, theta not identically lambda1
    HypothesisClause c{"H1: theta <= lambda1 with theta != lambda1", true, true, ""};
    double gap_sum = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      if (theta[i] > lambda1 * (1.0 + 1e-12)) {
        c.ok = false;
        c.message = "H1: theta exceeds lambda1 = " + num(lambda1) + " at node " +
                    std::to_string(i) + " (theta = " + num(theta[i]) + ")";
        break;
      }
      gap_sum += lambda1 - theta[i];
    }
    if (c.ok && gap_sum / theta.size() < 1e-6 * lambda1) {
      c.ok = false;
      c.message = "H1: theta coincides with lambda1 (mean gap below 1e-6 * lambda1)";
    }
    h1.push_back(c);
  }
  h1.push_back(ordering_clause("H1: mu_+ < q_-", mu.max_value(), prob.q().min_value(), "mu_+",
                               "q_-"));
  {
    // H1(iv): concave lower bound c0 x^{mu-1} <= f near zero
    HypothesisClause c{"H1: f >= c0 x^{mu(z)-1} on (0, delta]", true, true, ""};
    for (std::size_t i = 0; i < mu.node_values().size() && c.ok; ++i) {
      const double mz = mu.at_node(i);
      for (int k = 1; k <= 25; ++k) {
        const double x = model.delta * k / 25.0;
        if (model.value(mz, x) < model.c0 * std::pow(x, mz - 1.0) - 1e-12) {
          c.ok = false;
          c.message = "H1: lower bound fails at x = " + num(x) + ", node " + std::to_string(i);
          break;
        }
      }
    }
    h1.push_back(c);
  }
  {
    const ScalingCheckReport sc = check_scaling_condition(model, prob.p());
    HypothesisClause c{"H1: f(z, x/t) <= f(z, x) / t^{p(z)-1}", sc.pass, true, ""};
    if (!sc.pass) {
      c.message = "H1: scaling condition violated by " + num(sc.worst_violation) + " at t = " +
                  num(sc.t_at) + ", x = " + num(sc.x_at);
    }
    h1.push_back(c);
  }
  return h1;
}

} // namespace

std::vector<std::string> HypothesisReport::messages() const {
  std::vector<std::string> out;
  for (const auto* group : {&h0, &h1}) {
    for (const auto& c : *group) {
      if (!c.message.empty()) out.push_back(c.message);
    }
  }
  return out;
}

HypothesisReport check_hypotheses(const Problem& problem, double lambda1) {
  HypothesisReport rep;
  rep.h0 = build_h0(problem);
  rep.h1 = build_h1(problem, lambda1);
  for (const auto& c : rep.h0) rep.h0_ok = rep.h0_ok && c.ok;
  for (const auto& c : rep.h1) rep.h1_ok = rep.h1_ok && c.ok;
  return rep;
}

void enforce_hypotheses(const Problem& problem, std::optional<double> lambda1) {
  const auto& p = problem.p();
  auto require = [](bool ok, const std::string& clause) {
    if (!ok) throw ValidationError(clause);
  };
  require(problem.q().max_value() < p.min_value(),
          "H0: q_+ < p_- violated (q_+ = " + num(problem.q().max_value()) + ", p_- = " +
              num(p.min_value()) + ")");
  require(problem.tau().max_value() < p.min_value(),
          "H0: tau_+ < p_- violated (tau_+ = " + num(problem.tau().max_value()) + ", p_- = " +
              num(p.min_value()) + ")");
  const double spread = p.max_value() - p.min_value();
  require(spread <= 1.0, "H0: 0 <= p_+ - p_- <= 1 violated (spread = " + num(spread) + ")");
  require(p.max_value() < critical_of_min(p, problem.mesh()->dim),
          "H0: p_+ < p_-^* violated (p_+ = " + num(p.max_value()) + ")");
  require(problem.mu().max_value() < problem.q().min_value(),
          "H1: mu_+ < q_- violated (mu_+ = " + num(problem.mu().max_value()) + ", q_- = " +
              num(problem.q().min_value()) + ")");
  if (lambda1) {
    const auto& theta = problem.theta();
    double gap_sum = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      require(theta[i] <= *lambda1 * (1.0 + 1e-12),
              "H1: theta <= lambda1 violated at node " + std::to_string(i) + " (theta = " +
                  num(theta[i]) + ", lambda1 = " + num(*lambda1) + ")");
      gap_sum += *lambda1 - theta[i];
    }
    require(gap_sum / theta.size() >= 1e-6 * *lambda1,
            "H1: theta != lambda1 violated (mean gap below 1e-6 * lambda1)");
  }
}

} // namespace apq
