#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "apq/reaction.hpp"
#include "support/oracles.hpp"

#include <cmath>

using namespace apq;

namespace {

MeshPtr unit_interval(int n) {
  const double len[] = {1.0};
  const int res[] = {n};
  return build_mesh(1, len, res);
}

ReactionModel capped_model(const MeshPtr& mesh, double mu = 1.5, double c0 = 1.0,
                           double delta = 1.0) {
  GridFunction theta(mesh);
  theta.fill(1.0);
  return ReactionModel::capped(ExponentField::constant(mesh, mu), theta, c0, delta);
}

} // namespace

TEST_CASE("capped-concave point values") {
  const MeshPtr mesh = unit_interval(8);
  const ReactionModel f = capped_model(mesh);
  CHECK(f.value(1.5, 0.0) == 0.0);
  CHECK(f.value(1.5, -3.0) == 0.0);
  CHECK(f.value(1.5, 0.25) == doctest::Approx(0.5)); // 0.25^{0.5}
  CHECK(f.value(1.5, 100.0) == doctest::Approx(1.0)); // capped at delta
}

TEST_CASE("primitive closed form and derivative consistency") {
  const MeshPtr mesh = unit_interval(8);
  const ReactionModel f = capped_model(mesh);
  CHECK(f.primitive(1.5, 0.0) == 0.0);
  CHECK(f.primitive(1.5, 1.0) == doctest::Approx(1.0 / 1.5));
  CHECK(f.primitive(1.5, 3.0) == doctest::Approx(1.0 / 1.5 + 2.0));

  const double h = 1e-6;
  for (const double x : {0.1, 0.4, 0.9, 1.5, 4.0}) {
    const double fd = (f.primitive(1.5, x + h) - f.primitive(1.5, x - h)) / (2.0 * h);
    CHECK(std::abs(fd - f.value(1.5, x)) <= 1e-6);
  }
}

TEST_CASE("reaction is nondecreasing and bounded") {
  const MeshPtr mesh = unit_interval(8);
  const ReactionModel f = capped_model(mesh, 1.4, 2.0, 0.7);
  CHECK(f.nondecreasing_in_x());
  double prev = -1.0;
  for (int k = 0; k <= 200; ++k) {
    const double x = 0.05 * k;
    const double v = f.value(1.4, x);
    CHECK(v >= prev);
    prev = v;
  }
  for (const double rho : {1.0, 10.0}) {
    const double a_rho = f.c0 * std::pow(std::max(f.delta, rho), 1.4 - 1.0) + f.c0;
    for (int k = 0; k <= 100; ++k) {
      const double x = rho * k / 100.0;
      const double v = f.value(1.4, x);
      CHECK(v >= 0.0);
      CHECK(v <= a_rho);
    }
  }
}

TEST_CASE("scaling condition holds for the capped family") {
  const MeshPtr mesh = unit_interval(16);
  const ExponentField p = ExponentField::affine(mesh, 2.0, 0.3);
  const auto rep = check_scaling_condition(capped_model(mesh), p);
  CHECK(rep.pass);
  CHECK(rep.worst_violation <= 1e-12);
}

TEST_CASE("scaling condition rejects a superlinear table") {
  const MeshPtr mesh = unit_interval(16);
  GridFunction theta(mesh);
  theta.fill(1.0);
  std::vector<double> xs;
  std::vector<double> fs;
  for (int k = 0; k <= 20; ++k) {
    const double x = 0.1 * k;
    xs.push_back(x);
    fs.push_back(x * x);
  }
  const ReactionModel table = ReactionModel::custom_table(
      ExponentField::constant(mesh, 1.5), theta, xs, fs);
  const ExponentField p2 = ExponentField::constant(mesh, 2.0);
  const auto rep = check_scaling_condition(table, p2);
  CHECK_FALSE(rep.pass);
  CHECK(rep.worst_violation > 0.0);
}

TEST_CASE("scaling margin is mesh independent") {
  GridFunction theta_a(unit_interval(16));
  const MeshPtr coarse = unit_interval(16);
  const MeshPtr fine = unit_interval(32);
  const ExponentField p_coarse = ExponentField::constant(coarse, 2.0);
  const ExponentField p_fine = ExponentField::constant(fine, 2.0);
  const auto rep_coarse = check_scaling_condition(capped_model(coarse), p_coarse);
  const auto rep_fine = check_scaling_condition(capped_model(fine), p_fine);
  CHECK(rep_coarse.pass == rep_fine.pass);
  CHECK(std::abs(rep_coarse.worst_violation - rep_fine.worst_violation) <= 1e-12);
}

TEST_CASE("asymptotic slope surrogate") {
  // the capped family has f(z,x)/x^{p-1} -> 0; past the crossover the ratio
  // stays below any positive slope field
  const MeshPtr mesh = unit_interval(8);
  const ReactionModel f = capped_model(mesh);
  const double p = 2.2;
  const double theta = 0.5;
  const double x0 = std::pow(f.c0 / theta, 1.0 / (p - 1.0));
  for (int k = 1; k <= 50; ++k) {
    const double x = x0 * (1.0 + 0.2 * k);
    CHECK(f.value(1.5, x) / std::pow(x, p - 1.0) <= theta * (1.0 + 1e-12));
  }
}

TEST_CASE("superlinear growth dominates the primitive") {
  // lambda1 x^p - p_+ F(z,x) stays bounded below (here nonnegative) past M
  const MeshPtr mesh = unit_interval(8);
  const ReactionModel f = capped_model(mesh, 1.4);
  const double lambda1 = 12.3; // scale of the 1D principal eigenvalue
  const double p_plus = 2.2;
  const double m = std::max(f.delta, 1.0);
  for (int k = 0; k <= 100; ++k) {
    const double x = m + 0.5 * k;
    CHECK(lambda1 * std::pow(x, 2.2) - p_plus * f.primitive(1.4, x) >= 0.0);
  }
}

TEST_CASE("frozen reaction drive") {
  const MeshPtr mesh = unit_interval(16);
  GridFunction rhat(mesh);
  rhat.fill(1.0);
  const ExponentField tau = ExponentField::constant(mesh, 2.0);

  GridFunction v(mesh);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = mesh->nodes[i][0];
  const FrozenReaction fr(rhat, tau, capped_model(mesh), v);
  for (std::size_t e = 0; e < mesh->element_count(); ++e) {
    CHECK(fr.drive()[e] == doctest::Approx(1.0)); // |Dv|^{tau-1} = 1
    CHECK(fr.source(e, 0.25) == doctest::Approx(1.0 + 0.5));
  }

  const FrozenReaction frozen_zero(rhat, tau, capped_model(mesh), GridFunction(mesh));
  for (std::size_t e = 0; e < mesh->element_count(); ++e) {
    CHECK(frozen_zero.source(e, 0.25) == doctest::Approx(0.5)); // g reduces to f
  }

  GridFunction no_convection(mesh);
  const FrozenReaction fr0(no_convection, tau, capped_model(mesh), v);
  CHECK(fr0.convection_free());
  for (std::size_t e = 0; e < mesh->element_count(); ++e) {
    CHECK(fr0.source(e, 0.25) == doctest::Approx(0.5));
  }
}

TEST_CASE("frozen potential integrates the source") {
  const MeshPtr mesh = unit_interval(8);
  GridFunction rhat(mesh);
  rhat.fill(0.3);
  const ExponentField tau = ExponentField::constant(mesh, 1.5);
  GridFunction v(mesh);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 2.0 * mesh->nodes[i][0];
  const FrozenReaction fr(rhat, tau, capped_model(mesh), v);
  const double h = 1e-6;
  for (const double x : {0.2, 0.8, 1.7}) {
    const double fd = (fr.potential(3, x + h) - fr.potential(3, x - h)) / (2.0 * h);
    CHECK(std::abs(fd - fr.source(3, x)) <= 1e-6);
  }
}
