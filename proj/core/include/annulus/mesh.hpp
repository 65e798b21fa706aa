#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "annulus/geometry.hpp"

namespace annulus {

struct BoundaryEdge {
  int a = 0;
  int b = 0;
  Side tag = Side::outer;
};

/// P1 triangulation of an annular domain. Boundary edges are oriented with the
/// domain on their left, so (e.y, -e.x) is the outward normal of the domain on
/// both boundary components.
struct Mesh {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;
  int n_radial = 0;   // 0 for meshes read from file
  int n_angular = 0;

  std::size_t node_count() const noexcept { return nodes.size(); }
  /// Node index of ring i (0 = hole boundary) and column j, structured meshes only.
  int node(int ring, int column) const noexcept { return ring * n_angular + ((column % n_angular) + n_angular) % n_angular; }

  double area() const;
  double boundary_length(Side side) const;
  double max_edge_length() const;
  /// Per-node tag: nullopt for interior nodes.
  std::vector<std::optional<Side>> node_sides() const;

  /// Checks orientation, minimum area, conformity and the two boundary loops;
  /// with a domain, also that boundary nodes lie on their curves. Returns the
  /// first violation.
  std::optional<std::string> validate(const AnnularDomain* domain = nullptr) const;
};

/// Structured (n_r + 1) x n_a mesh: column j joins the j-th of n_a points spaced
/// by arc length on the hole to the j-th such point on the outer curve, both
/// counted counterclockwise from the polar direction 0 about the domain center;
/// rings are linear blends. Quads are split along the shorter diagonal and
/// polygon corners are snapped onto the nearest column.
Mesh mesh_annular(const AnnularDomain& domain, int n_radial, int n_angular);

/// Text format: `nodes N triangles T edges E`, then N lines `x y`, T lines
/// `i j k`, E lines `i j tag` with tag in {outer, inner}.
void write_mesh(std::ostream& os, const Mesh& mesh);
Mesh read_mesh(std::istream& is);

}  // namespace annulus
