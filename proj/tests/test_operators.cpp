#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "apq/errors.hpp"
#include "apq/modular.hpp"
#include "apq/operators.hpp"
#include "support/oracles.hpp"

#include <cmath>

using namespace apq;

namespace {

MeshPtr unit_interval(int n) {
  const double len[] = {1.0};
  const int res[] = {n};
  return build_mesh(1, len, res);
}

MeshPtr unit_square(int n) {
  const double len[] = {1.0, 1.0};
  const int res[] = {n, n};
  return build_mesh(2, len, res);
}

GridFunction coordinate_field(const MeshPtr& mesh) {
  GridFunction u(mesh);
  for (std::size_t i = 0; i < mesh->node_count(); ++i) u[i] = mesh->nodes[i][0];
  return u;
}

} // namespace

TEST_CASE("energy spec validation") {
  const MeshPtr mesh = unit_interval(8);
  const ExponentField p = ExponentField::constant(mesh, 2.0);
  const ExponentField q_bad = ExponentField::constant(mesh, 2.5);
  CHECK_THROWS_AS(EnergySpec(p, q_bad, 0.0), ValidationError);
  CHECK_THROWS_AS(EnergySpec(p, {}, 1e-5), ValidationError);
  CHECK_NOTHROW(EnergySpec(p, ExponentField::constant(mesh, 1.5), 1e-10));
}

TEST_CASE("double-phase energy on linear fields") {
  const MeshPtr mesh = unit_interval(16);
  const ExponentField p2 = ExponentField::constant(mesh, 2.0);

  CHECK(double_phase_energy(GridFunction(mesh), EnergySpec(p2, {}, 0.0)) == 0.0);
  CHECK(double_phase_energy(GridFunction(mesh), EnergySpec(p2, {}, 1e-8)) == 0.0);

  const GridFunction x = coordinate_field(mesh);
  CHECK(double_phase_energy(x, EnergySpec(p2, {}, 0.0)) == doctest::Approx(0.5));

  const ExponentField p3 = ExponentField::constant(mesh, 3.0);
  const ExponentField q15 = ExponentField::constant(mesh, 1.5);
  CHECK(double_phase_energy(x, EnergySpec(p3, q15, 0.0)) == doctest::Approx(1.0));
}

TEST_CASE("quadratic case reduces to the assembled stiffness") {
  // 1D: tridiagonal (-1/h, 2/h, -1/h) on interior nodes
  {
    const int n = 24;
    const MeshPtr mesh = unit_interval(n);
    const ExponentField r2 = ExponentField::constant(mesh, 2.0);
    test::Rng rng(3);
    const GridFunction u = test::random_zero_trace(mesh, rng);
    const DualVector a = apply_plaplacian(u, r2, 0.0);
    const auto k = test::interval_stiffness(n, 1.0);
    std::vector<double> interior(u.values().begin() + 1, u.values().end() - 1);
    const auto ku = k.apply(interior);
    for (int i = 1; i < n; ++i) {
      CHECK(std::abs(a[i] - ku[i - 1]) <= 1e-12);
    }
  }
  // 2D, square cells: P1 on the structured split gives the 5-point stencil
  {
    const int n = 8;
    const MeshPtr mesh = unit_square(n);
    const ExponentField r2 = ExponentField::constant(mesh, 2.0);
    test::Rng rng(4);
    const GridFunction u = test::random_zero_trace(mesh, rng);
    const DualVector a = apply_plaplacian(u, r2, 0.0);
    auto node = [&](int i, int j) { return static_cast<std::size_t>(j) * (n + 1) + i; };
    for (int j = 1; j < n; ++j) {
      for (int i = 1; i < n; ++i) {
        const double stencil = 4.0 * u[node(i, j)] - u[node(i - 1, j)] - u[node(i + 1, j)] -
                               u[node(i, j - 1)] - u[node(i, j + 1)];
        CHECK(std::abs(a[node(i, j)] - stencil) <= 1e-12);
      }
    }
  }
}

TEST_CASE("operator pairing identities") {
  const MeshPtr mesh = unit_interval(16);
  const ExponentField p = ExponentField::affine(mesh, 2.1, 0.3);
  const ExponentField q = ExponentField::constant(mesh, 1.6);
  const EnergySpec es(p, q, 0.0);
  test::Rng rng(8);

  for (int s = 0; s < 20; ++s) {
    const GridFunction u = test::random_zero_trace(mesh, rng, std::exp(rng.uniform(-1.0, 1.0)));
    const DualVector v = apply_double_phase(u, es);
    const double pairing = dual_pairing(v, u);
    const double expected = modular_grad(u, p) + modular_grad(u, q);
    CHECK(pairing == doctest::Approx(expected).epsilon(1e-12));
  }

  // without a q-field the action reduces to the single-phase operator
  {
    const EnergySpec single(p, {}, 1e-9);
    const GridFunction u = test::random_zero_trace(mesh, rng);
    const DualVector full = apply_double_phase(u, single);
    const DualVector one = apply_plaplacian(u, p, 1e-9);
    for (std::size_t i = 0; i < full.size(); ++i) CHECK(full[i] == one[i]);
  }

  // r == 2 action is linear in u
  const ExponentField r2 = ExponentField::constant(mesh, 2.0);
  const GridFunction u = test::random_zero_trace(mesh, rng);
  const GridFunction w = test::random_zero_trace(mesh, rng);
  GridFunction sum = u;
  sum.add_scaled(w, 1.0);
  const DualVector au = apply_plaplacian(u, r2, 0.0);
  const DualVector aw = apply_plaplacian(w, r2, 0.0);
  const DualVector asum = apply_plaplacian(sum, r2, 0.0);
  for (std::size_t i = 0; i < asum.size(); ++i) {
    CHECK(std::abs(asum[i] - au[i] - aw[i]) <= 1e-12);
  }
}

TEST_CASE("strict monotonicity of the operator") {
  const MeshPtr mesh = unit_interval(16);
  const ExponentField p = ExponentField::affine(mesh, 2.1, 0.3);
  test::Rng rng(21);
  for (int s = 0; s < 30; ++s) {
    const GridFunction u = test::random_zero_trace(mesh, rng);
    const GridFunction w = test::random_zero_trace(mesh, rng);
    const DualVector au = apply_plaplacian(u, p, 1e-8);
    const DualVector aw = apply_plaplacian(w, p, 1e-8);
    GridFunction diff = u;
    diff.add_scaled(w, -1.0);
    DualVector adiff(au.size());
    for (std::size_t i = 0; i < au.size(); ++i) adiff[i] = au[i] - aw[i];
    CHECK(dual_pairing(adiff, diff) >= -1e-12);
  }
}

TEST_CASE("gradient consistency against central differences") {
  const MeshPtr mesh = unit_interval(32);
  const ExponentField p = ExponentField::affine(mesh, 2.0, 0.2);
  const ExponentField q = ExponentField::affine(mesh, 1.5, 0.2);
  const EnergySpec es(p, q, 1e-10);
  test::Rng rng(31);
  const double delta = 1e-6;

  for (int s = 0; s < 50; ++s) {
    const GridFunction u = test::random_zero_trace(mesh, rng);
    const GridFunction h = test::random_zero_trace(mesh, rng);
    const DualVector v = apply_double_phase(u, es);
    const double analytic = dual_pairing(v, h);

    GridFunction up = u;
    up.add_scaled(h, delta);
    GridFunction um = u;
    um.add_scaled(h, -delta);
    const double fd =
        (double_phase_energy(up, es) - double_phase_energy(um, es)) / (2.0 * delta);
    CHECK(std::abs(analytic - fd) <= 1e-6 * (1.0 + std::abs(analytic)));
  }
}

TEST_CASE("energy is convex along segments") {
  const MeshPtr mesh = unit_interval(16);
  const ExponentField p = ExponentField::affine(mesh, 2.1, 0.4);
  const ExponentField q = ExponentField::constant(mesh, 1.7);
  const EnergySpec es(p, q, 1e-9);
  test::Rng rng(55);
  for (int s = 0; s < 20; ++s) {
    const GridFunction u = test::random_zero_trace(mesh, rng);
    const GridFunction w = test::random_zero_trace(mesh, rng);
    double values[5];
    for (int k = 0; k < 5; ++k) {
      GridFunction x = u;
      GridFunction dir = w;
      dir.add_scaled(u, -1.0);
      x.add_scaled(dir, 0.25 * k);
      values[k] = double_phase_energy(x, es);
    }
    for (int k = 1; k < 4; ++k) {
      CHECK(values[k - 1] - 2.0 * values[k] + values[k + 1] >= -1e-12);
    }
  }
}

TEST_CASE("dual norm basics and an exactly solved system") {
  const MeshPtr mesh = unit_interval(16);
  CHECK(dual_norm(DualVector(mesh->node_count(), 0.0)) == 0.0);
  DualVector unit(mesh->node_count(), 0.0);
  unit[5] = 1.0;
  CHECK(dual_norm(unit) == 1.0);

  // oracle: direct tridiagonal solve of the r == 2 problem, then the residual
  // of the returned solution under the operator action is at round-off
  const int n = 16;
  const double h = 1.0 / n;
  const ExponentField r2 = ExponentField::constant(mesh, 2.0);
  DualVector rhs(mesh->node_count(), 0.0);
  for (int i = 1; i < n; ++i) rhs[i] = h; // pairing of the constant source 1
  auto k = test::interval_stiffness(n, 1.0);
  std::vector<double> rhs_int(rhs.begin() + 1, rhs.end() - 1);
  const auto sol = test::solve_tridiagonal(k.lower, k.diag, k.upper, rhs_int);
  GridFunction u(mesh);
  for (int i = 1; i < n; ++i) u[i] = sol[i - 1];
  DualVector residual = apply_plaplacian(u, r2, 0.0);
  for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= rhs[i];
  CHECK(dual_norm(residual) < 1e-10);
}
