#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace wrom::fom {

enum class BoundaryTag { Inlet, Outlet, Wall };

struct BoundaryEdge {
  int a;
  int b;
  BoundaryTag tag;
};

/// Conforming triangulation of the reference rectangle with quadratic-node
/// numbering: vertices first, then one node per edge.
struct Mesh {
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> triangles;  // counter-clockwise
  std::vector<int> subdomain;                 // per triangle
  std::vector<BoundaryEdge> boundary;

  std::vector<std::array<int, 2>> edges;          // vertex pairs, a < b
  std::vector<std::array<int, 3>> triangle_edges;  // edge ids opposite local (2,0,1): (01, 12, 20)
  int refinement = 0;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int node_count() const { return static_cast<int>(vertices.size() + edges.size()); }
  /// Coordinates of a quadratic node (vertex or edge midpoint).
  Eigen::Vector2d node(int k) const;
  /// Six quadratic nodes of a triangle: three vertices then edge midpoints 01, 12, 20.
  std::array<int, 6> local_nodes(int t) const;

  /// FNV-1a hash of connectivity and coordinates, as 16 hex digits.
  std::string hash() const;
};

/// Structured mesh with 4*refinement x 6*refinement cells, two triangles per
/// cell, diagonals alternating so that every corner cell is cut through its
/// corner vertex.
Mesh build_mesh(int refinement);

}  // namespace wrom::fom
