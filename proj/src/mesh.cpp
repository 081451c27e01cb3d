#include "apq/mesh.hpp"

#include "apq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace apq {

std::array<double, 2> Mesh::barycenter(std::size_t e) const {
  const auto& el = elements[e];
  const int nv = verts_per_element();
  std::array<double, 2> b{0.0, 0.0};
  for (int v = 0; v < nv; ++v) {
    b[0] += nodes[el[v]][0];
    b[1] += nodes[el[v]][1];
  }
  b[0] /= nv;
  b[1] /= nv;
  return b;
}

void Mesh::validate() const {
  const auto n_nodes = static_cast<NodeIndex>(node_count());
  std::vector<int> adjacency(node_count(), 0);
  for (std::size_t e = 0; e < element_count(); ++e) {
    if (!(measure[e] > 0.0)) {
      throw InvalidMesh("element " + std::to_string(e) + " has nonpositive measure");
    }
    for (int v = 0; v < verts_per_element(); ++v) {
      const NodeIndex idx = elements[e][v];
      if (idx < 0 || idx >= n_nodes) {
        throw InvalidMesh("element " + std::to_string(e) + " references node out of bounds");
      }
      ++adjacency[idx];
    }
  }
  const double eps = 1e-12 * std::max(lengths[0], lengths[1]);
  for (std::size_t i = 0; i < node_count(); ++i) {
    const double x = nodes[i][0];
    const double y = nodes[i][1];
    bool on = std::abs(x) <= eps || std::abs(x - lengths[0]) <= eps;
    if (dim == 2) on = on || std::abs(y) <= eps || std::abs(y - lengths[1]) <= eps;
    if (on != is_boundary(i)) {
      throw InvalidMesh("boundary classification mismatch at node " + std::to_string(i));
    }
    if (!on && adjacency[i] == 0) {
      throw InvalidMesh("interior node " + std::to_string(i) + " belongs to no element");
    }
  }
}

namespace {

MeshPtr build_interval(double length, int n) {
  auto mesh = std::make_shared<Mesh>();
  mesh->dim = 1;
  mesh->lengths = {length, 0.0};
  mesh->resolution = {n, 0};
  const double h = length / n;
  mesh->nodes.resize(n + 1);
  for (int i = 0; i <= n; ++i) mesh->nodes[i] = {i * h, 0.0};
  mesh->elements.resize(n);
  mesh->measure.assign(n, h);
  mesh->basis_grad.resize(n);
  for (int e = 0; e < n; ++e) {
    mesh->elements[e] = {static_cast<NodeIndex>(e), static_cast<NodeIndex>(e + 1), -1};
    mesh->basis_grad[e][0] = {-1.0 / h, 0.0};
    mesh->basis_grad[e][1] = {1.0 / h, 0.0};
    mesh->basis_grad[e][2] = {0.0, 0.0};
  }
  mesh->node_on_boundary.assign(n + 1, 0);
  mesh->node_on_boundary.front() = 1;
  mesh->node_on_boundary.back() = 1;
  mesh->boundary_nodes = {0, static_cast<NodeIndex>(n)};
  return mesh;
}

MeshPtr build_rectangle(double lx, double ly, int nx, int ny) {
  auto mesh = std::make_shared<Mesh>();
  mesh->dim = 2;
  mesh->lengths = {lx, ly};
  mesh->resolution = {nx, ny};
  const double hx = lx / nx;
  const double hy = ly / ny;
  const int nxx = nx + 1;
  mesh->nodes.resize(static_cast<std::size_t>(nxx) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      mesh->nodes[static_cast<std::size_t>(j) * nxx + i] = {i * hx, j * hy};
    }
  }
  auto node_id = [nxx](int i, int j) { return static_cast<NodeIndex>(j * nxx + i); };

  mesh->elements.reserve(static_cast<std::size_t>(nx) * ny * 2);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const NodeIndex a = node_id(i, j);
      const NodeIndex b = node_id(i + 1, j);
      const NodeIndex c = node_id(i + 1, j + 1);
      const NodeIndex d = node_id(i, j + 1);
      mesh->elements.push_back({a, b, c});
      mesh->elements.push_back({a, c, d});
    }
  }
  mesh->measure.resize(mesh->elements.size());
  mesh->basis_grad.resize(mesh->elements.size());
  for (std::size_t e = 0; e < mesh->elements.size(); ++e) {
    const auto& el = mesh->elements[e];
    const auto& p0 = mesh->nodes[el[0]];
    const auto& p1 = mesh->nodes[el[1]];
    const auto& p2 = mesh->nodes[el[2]];
    const double twice_area =
        (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
    mesh->measure[e] = 0.5 * twice_area;
    // grad lambda_i = ((y_j - y_k), (x_k - x_j)) / (2A), (i,j,k) cyclic
    const std::array<const std::array<double, 2>*, 3> p{&p0, &p1, &p2};
    for (int v = 0; v < 3; ++v) {
      const auto& pj = *p[(v + 1) % 3];
      const auto& pk = *p[(v + 2) % 3];
      mesh->basis_grad[e][v] = {(pj[1] - pk[1]) / twice_area, (pk[0] - pj[0]) / twice_area};
    }
  }
  mesh->node_on_boundary.assign(mesh->node_count(), 0);
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      if (i == 0 || i == nx || j == 0 || j == ny) {
        mesh->node_on_boundary[node_id(i, j)] = 1;
        mesh->boundary_nodes.push_back(node_id(i, j));
      }
    }
  }
  std::sort(mesh->boundary_nodes.begin(), mesh->boundary_nodes.end());
  return mesh;
}

} // namespace

MeshPtr build_mesh(int dim, std::span<const double> lengths, std::span<const int> resolution) {
  if (dim != 1 && dim != 2) {
    throw InvalidMesh("dim must be 1 or 2, got " + std::to_string(dim));
  }
  if (lengths.size() < static_cast<std::size_t>(dim) ||
      resolution.size() < static_cast<std::size_t>(dim)) {
    throw InvalidMesh("lengths/resolution must supply one entry per axis");
  }
  for (int a = 0; a < dim; ++a) {
    if (!(lengths[a] > 0.0)) {
      throw InvalidMesh("axis " + std::to_string(a) + " extent must be positive");
    }
    if (resolution[a] < 2) {
      throw InvalidMesh("axis " + std::to_string(a) + " needs at least 2 cells, got " +
                        std::to_string(resolution[a]));
    }
  }
  MeshPtr mesh = dim == 1 ? build_interval(lengths[0], resolution[0])
                          : build_rectangle(lengths[0], lengths[1], resolution[0], resolution[1]);
  mesh->validate();
  return mesh;
}

} // namespace apq
