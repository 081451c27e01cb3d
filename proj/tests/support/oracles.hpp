// Independent reference computations for the test suites: deterministic
// random fields, quadrature, direct linear solvers, classical eigensolvers,
// and a brute-force coordinate-descent minimizer. Everything here stays off
// the library's solution paths.
#pragma once

#include "apq/fields.hpp"
#include "apq/mesh.hpp"
#include "apq/problem.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace apq::test {

// splitmix64: platform-stable deterministic stream
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
  std::uint64_t state_;
};

inline GridFunction random_zero_trace(const MeshPtr& mesh, Rng& rng, double amplitude = 1.0) {
  GridFunction u(mesh);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = amplitude * rng.uniform(-1.0, 1.0);
  u.enforce_zero_trace();
  return u;
}

inline ExponentField random_exponent(const MeshPtr& mesh, Rng& rng) {
  const int pick = static_cast<int>(rng.next_u64() % 3);
  if (pick == 0) return ExponentField::constant(mesh, rng.uniform(1.1, 4.0));
  if (pick == 1) {
    const double a = rng.uniform(1.2, 3.0);
    const double b = rng.uniform(-0.15, 0.6) / mesh->lengths[0];
    const double c = mesh->dim == 2 ? rng.uniform(-0.15, 0.6) / mesh->lengths[1] : 0.0;
    // keep r_- > 1 for any sign of the slopes
    return ExponentField::affine(mesh, a + 0.2, b, c);
  }
  std::vector<double> v(mesh->node_count());
  for (double& x : v) x = rng.uniform(1.15, 3.5);
  return ExponentField::table(mesh, std::move(v));
}

// ---------------------------------------------------------------------------
// quadrature

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12, int depth = 24) {
  auto simpson = [&](double lo, double hi) {
    return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(0.5 * (lo + hi)) + f(hi));
  };
  std::function<double(double, double, double, int)> rec = [&](double lo, double hi,
                                                               double whole, int d) {
    const double mid = 0.5 * (lo + hi);
    const double left = simpson(lo, mid);
    const double right = simpson(mid, hi);
    if (d <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
      return left + right + (left + right - whole) / 15.0;
    }
    return rec(lo, mid, left, d - 1) + rec(mid, hi, right, d - 1);
  };
  return rec(a, b, simpson(a, b), depth);
}

// ---------------------------------------------------------------------------
// direct linear algebra

// Thomas algorithm for a tridiagonal system (diagonals lower/main/upper).
inline std::vector<double> solve_tridiagonal(std::vector<double> lower, std::vector<double> diag,
                                             std::vector<double> upper,
                                             std::vector<double> rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double m = lower[i] / diag[i - 1];
    diag[i] -= m * upper[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
  }
  return x;
}

struct Tridiagonal {
  std::vector<double> lower, diag, upper;

  std::vector<double> apply(const std::vector<double>& x) const {
    const std::size_t n = diag.size();
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = diag[i] * x[i];
      if (i > 0) y[i] += lower[i] * x[i - 1];
      if (i + 1 < n) y[i] += upper[i] * x[i + 1];
    }
    return y;
  }
};

// Interior-node P1 stiffness of the Laplacian on a uniform interval mesh.
inline Tridiagonal interval_stiffness(int n, double length) {
  const double h = length / n;
  Tridiagonal k;
  k.lower.assign(n - 1, -1.0 / h);
  k.diag.assign(n - 1, 2.0 / h);
  k.upper.assign(n - 1, -1.0 / h);
  return k;
}

// Interior-node mass matrix of the one-point barycenter quadrature on a
// uniform interval mesh, optionally weighted elementwise.
inline Tridiagonal interval_barycenter_mass(int n, double length,
                                            const std::function<double(double)>& weight = {}) {
  const double h = length / n;
  Tridiagonal m;
  m.lower.assign(n - 1, 0.0);
  m.diag.assign(n - 1, 0.0);
  m.upper.assign(n - 1, 0.0);
  for (int e = 0; e < n; ++e) {
    const double mid = (e + 0.5) * h;
    const double w = weight ? weight(mid) : 1.0;
    const double c = w * h / 4.0;
    // element couples nodes e and e+1; interior indices are node-1
    const int a = e - 1;
    const int b = e;
    if (a >= 0) m.diag[a] += c;
    if (b <= n - 2) m.diag[b] += c;
    if (a >= 0 && b <= n - 2) {
      m.upper[a] += c;
      m.lower[b] += c;
    }
  }
  return m;
}

// Smallest generalized eigenvalue of (K, M) by inverse power iteration with
// tridiagonal direct solves.
inline double smallest_generalized_eigenvalue(const Tridiagonal& k, const Tridiagonal& m,
                                              int iters = 400) {
  const std::size_t n = k.diag.size();
  std::vector<double> x(n, 1.0);
  double lambda = 0.0;
  for (int it = 0; it < iters; ++it) {
    std::vector<double> b = m.apply(x);
    x = solve_tridiagonal(k.lower, k.diag, k.upper, b);
    double norm = 0.0;
    for (const double v : x) norm = std::max(norm, std::abs(v));
    for (double& v : x) v /= norm;
    const std::vector<double> kx = k.apply(x);
    const std::vector<double> mx = m.apply(x);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      num += x[i] * kx[i];
      den += x[i] * mx[i];
    }
    const double next = num / den;
    if (it > 4 && std::abs(next - lambda) <= 1e-13 * next) {
      return next;
    }
    lambda = next;
  }
  return lambda;
}

// Smallest eigenvalue of the 5-point Laplacian on a rectangle, by inverse
// power iteration with conjugate-gradient solves.
inline double five_point_smallest_eigenvalue(int nx, int ny, double lx, double ly) {
  const double hx = lx / nx;
  const double hy = ly / ny;
  const int mx = nx - 1;
  const int my = ny - 1;
  const std::size_t n = static_cast<std::size_t>(mx) * my;
  auto idx = [mx](int i, int j) { return static_cast<std::size_t>(j) * mx + i; };

  auto apply = [&](const std::vector<double>& u, std::vector<double>& out) {
    for (int j = 0; j < my; ++j) {
      for (int i = 0; i < mx; ++i) {
        double v = (2.0 / (hx * hx) + 2.0 / (hy * hy)) * u[idx(i, j)];
        if (i > 0) v -= u[idx(i - 1, j)] / (hx * hx);
        if (i < mx - 1) v -= u[idx(i + 1, j)] / (hx * hx);
        if (j > 0) v -= u[idx(i, j - 1)] / (hy * hy);
        if (j < my - 1) v -= u[idx(i, j + 1)] / (hy * hy);
        out[idx(i, j)] = v;
      }
    }
  };

  auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };

  auto cg_solve = [&](const std::vector<double>& rhs) {
    std::vector<double> x(n, 0.0);
    std::vector<double> r = rhs;
    std::vector<double> p = r;
    std::vector<double> ap(n);
    double rr = dot(r, r);
    const double target = 1e-24 * rr;
    for (int it = 0; it < 20000 && rr > target; ++it) {
      apply(p, ap);
      const double alpha = rr / dot(p, ap);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += alpha * p[i];
        r[i] -= alpha * ap[i];
      }
      const double rr_new = dot(r, r);
      const double beta = rr_new / rr;
      rr = rr_new;
      for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    }
    return x;
  };

  std::vector<double> x(n, 1.0);
  std::vector<double> kx(n);
  double lambda = 0.0;
  for (int it = 0; it < 200; ++it) {
    x = cg_solve(x);
    double norm = 0.0;
    for (const double v : x) norm = std::max(norm, std::abs(v));
    for (double& v : x) v /= norm;
    apply(x, kx);
    const double next = dot(x, kx) / dot(x, x);
    if (it > 4 && std::abs(next - lambda) <= 1e-12 * next) return next;
    lambda = next;
  }
  return lambda;
}

// ---------------------------------------------------------------------------
// brute-force minimization

// Cyclic coordinate descent over interior nodes with golden-section line
// minimization; converges to a stationary point using only functional
// evaluations.
inline GridFunction coordinate_descent(GridFunction u,
                                       const std::function<double(const GridFunction&)>& energy,
                                       double tol = 1e-10, int max_sweeps = 4000) {
  const Mesh& mesh = *u.mesh();
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double moved = 0.0;
    for (std::size_t i = 0; i < mesh.node_count(); ++i) {
      if (mesh.is_boundary(i)) continue;
      const double x0 = u[i];
      auto phi = [&](double x) {
        u[i] = x;
        return energy(u);
      };
      double a = x0 - 4.0;
      double b = x0 + 4.0;
      double c = b - gr * (b - a);
      double d = a + gr * (b - a);
      double fc = phi(c);
      double fd = phi(d);
      for (int it = 0; it < 120; ++it) {
        if (fc < fd) {
          b = d;
          d = c;
          fd = fc;
          c = b - gr * (b - a);
          fc = phi(c);
        } else {
          a = c;
          c = d;
          fc = fd;
          d = a + gr * (b - a);
          fd = phi(d);
        }
      }
      const double best = 0.5 * (a + b);
      u[i] = best;
      moved = std::max(moved, std::abs(best - x0));
    }
    if (moved <= tol) return u;
  }
  throw std::runtime_error("coordinate descent oracle did not settle");
}

// ---------------------------------------------------------------------------
// shared configurations

// 1D reference configuration used across the pipeline tests.
inline ProblemSpec standard_spec(int resolution = 128) {
  ProblemSpec spec;
  spec.domain.dim = 1;
  spec.domain.lengths = {1.0};
  spec.domain.resolution = {resolution};
  spec.p = {FieldSpec::Kind::Constant, 2.2};
  spec.q = {FieldSpec::Kind::Constant, 1.8};
  spec.tau = {FieldSpec::Kind::Constant, 1.5};
  spec.mu = {FieldSpec::Kind::Constant, 1.4};
  spec.coefficients.r_hat = {FieldSpec::Kind::Constant, 0.1};
  spec.coefficients.c0 = 1.0;
  spec.coefficients.delta = 1.0;
  return spec;
}

// 2D variant at desk scale.
inline ProblemSpec standard_spec_2d(int resolution = 16) {
  ProblemSpec spec = standard_spec();
  spec.domain.dim = 2;
  spec.domain.lengths = {1.0, 1.0};
  spec.domain.resolution = {resolution, resolution};
  return spec;
}

} // namespace apq::test
