#include "apq/fields.hpp"

#include "apq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace apq {

namespace {

std::vector<double> barycenter_means(const Mesh& mesh, std::span<const double> nodal) {
  std::vector<double> out(mesh.element_count());
  const int nv = mesh.verts_per_element();
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    double s = 0.0;
    for (int v = 0; v < nv; ++v) s += nodal[mesh.elements[e][v]];
    out[e] = s / nv;
  }
  return out;
}

} // namespace

ExponentField::ExponentField(MeshPtr mesh, std::vector<double> nodal_values, Kind kind)
    : mesh_(std::move(mesh)), values_(std::move(nodal_values)), kind_(kind) {
  if (values_.size() != mesh_->node_count()) {
    throw ValidationError("exponent field has " + std::to_string(values_.size()) +
                          " values for " + std::to_string(mesh_->node_count()) + " nodes");
  }
  auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
  min_ = *lo;
  max_ = *hi;
  if (!(min_ > 1.0) || !std::isfinite(max_)) {
    throw ValidationError("exponent field outside E1: requires 1 < r_- <= r_+ < inf, got r_- = " +
                          std::to_string(min_) + ", r_+ = " + std::to_string(max_));
  }
  barycenter_ = barycenter_means(*mesh_, values_);
}

ExponentField ExponentField::constant(MeshPtr mesh, double value) {
  std::vector<double> v(mesh->node_count(), value);
  ExponentField f(std::move(mesh), std::move(v), Kind::Constant);
  return f;
}

ExponentField ExponentField::affine(MeshPtr mesh, double a, double b, double c) {
  std::vector<double> v(mesh->node_count());
  for (std::size_t i = 0; i < mesh->node_count(); ++i) {
    v[i] = a + b * mesh->nodes[i][0] + (mesh->dim == 2 ? c * mesh->nodes[i][1] : 0.0);
  }
  ExponentField f(std::move(mesh), std::move(v), Kind::Affine);
  f.affine_ = {a, b, c};
  return f;
}

ExponentField ExponentField::table(MeshPtr mesh, std::vector<double> nodal_values) {
  return ExponentField(std::move(mesh), std::move(nodal_values), Kind::Table);
}

ExponentField ExponentField::conjugate() const {
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) v[i] = values_[i] / (values_[i] - 1.0);
  return ExponentField(mesh_, std::move(v), Kind::Table);
}

std::vector<double> ExponentField::critical_values(int space_dim) const {
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double r = values_[i];
    v[i] = r < space_dim ? space_dim * r / (space_dim - r)
                         : std::numeric_limits<double>::infinity();
  }
  return v;
}

GridFunction::GridFunction(MeshPtr mesh, double fill)
    : mesh_(std::move(mesh)), values_(mesh_->node_count(), fill) {}

GridFunction::GridFunction(MeshPtr mesh, std::vector<double> nodal_values)
    : mesh_(std::move(mesh)), values_(std::move(nodal_values)) {
  if (values_.size() != mesh_->node_count()) {
    throw ValidationError("grid function has " + std::to_string(values_.size()) +
                          " values for " + std::to_string(mesh_->node_count()) + " nodes");
  }
}

std::array<double, 2> GridFunction::gradient_on(std::size_t e) const {
  const auto& el = mesh_->elements[e];
  const auto& bg = mesh_->basis_grad[e];
  const int nv = mesh_->verts_per_element();
  std::array<double, 2> g{0.0, 0.0};
  for (int v = 0; v < nv; ++v) {
    g[0] += values_[el[v]] * bg[v][0];
    g[1] += values_[el[v]] * bg[v][1];
  }
  return g;
}

double GridFunction::gradient_norm_on(std::size_t e) const {
  const auto g = gradient_on(e);
  return std::hypot(g[0], g[1]);
}

double GridFunction::at_barycenter(std::size_t e) const {
  const auto& el = mesh_->elements[e];
  const int nv = mesh_->verts_per_element();
  double s = 0.0;
  for (int v = 0; v < nv; ++v) s += values_[el[v]];
  return s / nv;
}

void GridFunction::enforce_zero_trace() {
  for (const NodeIndex i : mesh_->boundary_nodes) values_[i] = 0.0;
}

bool GridFunction::is_zero_trace() const {
  for (const NodeIndex i : mesh_->boundary_nodes) {
    if (values_[i] != 0.0) return false;
  }
  return true;
}

void GridFunction::fill(double v) { std::fill(values_.begin(), values_.end(), v); }

void GridFunction::scale(double s) {
  for (double& v : values_) v *= s;
}

void GridFunction::add_scaled(const GridFunction& other, double s) {
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += s * other.values_[i];
}

void GridFunction::clamp_nonnegative() {
  for (double& v : values_) v = std::max(v, 0.0);
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (const double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double GridFunction::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}

double GridFunction::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}

double discrete_c1_norm(const GridFunction& u) {
  double grad = 0.0;
  for (std::size_t e = 0; e < u.mesh()->element_count(); ++e) {
    grad = std::max(grad, u.gradient_norm_on(e));
  }
  return u.max_abs() + grad;
}

} // namespace apq
