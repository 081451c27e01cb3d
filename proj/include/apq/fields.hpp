#pragma once

#include "apq/mesh.hpp"

#include <limits>
#include <span>
#include <vector>

namespace apq {

/// Spatially varying exponent r(z) with 1 < r_- <= r_+ < inf (membership in
/// the admissible class E1). Nodal storage; element values are taken at the
/// barycenter (arithmetic mean of vertex values). Immutable.
class ExponentField {
public:
  enum class Kind { Constant, Affine, Table };

  ExponentField(MeshPtr mesh, std::vector<double> nodal_values, Kind kind);

  static ExponentField constant(MeshPtr mesh, double value);
  /// r(x, y) = a + b*x + c*y (c ignored in 1D).
  static ExponentField affine(MeshPtr mesh, double a, double b, double c = 0.0);
  static ExponentField table(MeshPtr mesh, std::vector<double> nodal_values);

  Kind kind() const { return kind_; }
  const MeshPtr& mesh() const { return mesh_; }
  double min_value() const { return min_; }  // r_-
  double max_value() const { return max_; }  // r_+
  double at_node(std::size_t i) const { return values_[i]; }
  double at_barycenter(std::size_t e) const { return barycenter_[e]; }
  std::span<const double> node_values() const { return values_; }
  std::span<const double> barycenter_values() const { return barycenter_; }

  /// Conjugate exponent field r' = r / (r - 1).
  ExponentField conjugate() const;

  /// Critical exponent r* = N r / (N - r) where r < N, +inf sentinel
  /// otherwise. Nodal values; not an ExponentField since it may be infinite.
  std::vector<double> critical_values(int space_dim) const;

  /// Affine coefficients (a, b, c); only meaningful for Kind::Affine.
  std::array<double, 3> affine_coefficients() const { return affine_; }

private:
  MeshPtr mesh_;
  std::vector<double> values_;
  std::vector<double> barycenter_;
  double min_ = 0.0;
  double max_ = 0.0;
  Kind kind_ = Kind::Table;
  std::array<double, 3> affine_{0.0, 0.0, 0.0};
};

/// Nodal P1 field on a mesh. Value semantics; the mesh is shared.
class GridFunction {
public:
  explicit GridFunction(MeshPtr mesh, double fill = 0.0);
  GridFunction(MeshPtr mesh, std::vector<double> nodal_values);

  const MeshPtr& mesh() const { return mesh_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::span<const double> values() const { return values_; }
  std::vector<double>& mutable_values() { return values_; }

  /// Constant P1 gradient of the nodal interpolant on element e.
  std::array<double, 2> gradient_on(std::size_t e) const;
  double gradient_norm_on(std::size_t e) const;
  /// Interpolant value at the element barycenter (mean of vertex values).
  double at_barycenter(std::size_t e) const;

  /// Zeroes boundary nodes (discrete zero-trace enforcement; idempotent).
  void enforce_zero_trace();
  bool is_zero_trace() const;

  // in-place arithmetic
  void fill(double v);
  void scale(double s);
  void add_scaled(const GridFunction& other, double s);
  void clamp_nonnegative();

  double max_abs() const;
  double min_value() const;
  double max_value() const;

private:
  MeshPtr mesh_;
  std::vector<double> values_;
};

/// Discrete C1 surrogate norm: max_nodes |u| + max_elements |grad u|.
double discrete_c1_norm(const GridFunction& u);

} // namespace apq
