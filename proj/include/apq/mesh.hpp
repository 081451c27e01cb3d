#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace apq {

using NodeIndex = std::int32_t;

/// Structured simplicial mesh of an interval (dim 1) or an axis-aligned
/// rectangle (dim 2, each cell split into two triangles). Immutable after
/// construction; safe to share read-only across threads.
class Mesh {
public:
  int dim = 1;
  std::array<double, 2> lengths{1.0, 0.0};
  std::array<int, 2> resolution{1, 0};

  std::vector<std::array<double, 2>> nodes;            // y = 0 in 1D
  std::vector<std::array<NodeIndex, 3>> elements;      // segments use [0..1], [2] = -1
  std::vector<double> measure;                         // element length / area
  std::vector<std::array<std::array<double, 2>, 3>> basis_grad; // P1 shape gradients
  std::vector<NodeIndex> boundary_nodes;               // sorted
  std::vector<char> node_on_boundary;                  // per-node flag

  std::size_t node_count() const { return nodes.size(); }
  std::size_t element_count() const { return elements.size(); }
  int verts_per_element() const { return dim + 1; }
  bool is_boundary(std::size_t node) const { return node_on_boundary[node] != 0; }

  std::array<double, 2> barycenter(std::size_t e) const;

  /// Checks element measures, boundary classification and index bounds;
  /// throws InvalidMesh on violation.
  void validate() const;
};

using MeshPtr = std::shared_ptr<const Mesh>;

/// Builds a structured mesh: segments in 1D, two consistently oriented
/// triangles per cell in 2D. Throws InvalidMesh on nonpositive extent or
/// resolution < 2 per axis.
MeshPtr build_mesh(int dim, std::span<const double> lengths, std::span<const int> resolution);

} // namespace apq
