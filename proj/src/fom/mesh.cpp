#include "wrom/fom/mesh.hpp"

#include <cstdio>
#include <cstring>
#include <map>
#include <stdexcept>

#include "wrom/fom/geometry.hpp"

namespace wrom::fom {

Eigen::Vector2d Mesh::node(int k) const {
  if (k < vertex_count()) return vertices[k];
  const auto& e = edges[k - vertex_count()];
  return 0.5 * (vertices[e[0]] + vertices[e[1]]);
}

std::array<int, 6> Mesh::local_nodes(int t) const {
  const auto& v = triangles[t];
  const auto& e = triangle_edges[t];
  const int nv = vertex_count();
  return {v[0], v[1], v[2], nv + e[0], nv + e[1], nv + e[2]};
}

std::string Mesh::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  const auto mix = [&h](const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  };
  for (const auto& v : vertices) mix(v.data(), 2 * sizeof(double));
  for (const auto& t : triangles) mix(t.data(), 3 * sizeof(int));
  for (int s : subdomain) mix(&s, sizeof(int));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Mesh build_mesh(int refinement) {
  if (refinement < 1) throw std::invalid_argument("build_mesh: refinement must be >= 1");
  Mesh mesh;
  mesh.refinement = refinement;
  const int nx = 4 * refinement;
  const int ny = 6 * refinement;
  const double hx = kReferenceWidth / nx;
  const double hy = kReferenceHeight / ny;
  const auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };

  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) mesh.vertices.emplace_back(i * hx, j * hy);
  }
  // cells are aligned with both interfaces because nx/2 and ny/2 are integers
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j), v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      const Eigen::Vector2d centre((i + 0.5) * hx, (j + 0.5) * hy);
      const int r = geometry::subdomain_of(centre);
      if ((i + j) % 2 == 0) {
        mesh.triangles.push_back({v00, v10, v11});
        mesh.triangles.push_back({v00, v11, v01});
      } else {
        mesh.triangles.push_back({v00, v10, v01});
        mesh.triangles.push_back({v10, v11, v01});
      }
      mesh.subdomain.push_back(r);
      mesh.subdomain.push_back(r);
    }
  }

  std::map<std::pair<int, int>, int> edge_ids;
  const auto edge_id = [&](int a, int b) {
    const auto key = std::make_pair(std::min(a, b), std::max(a, b));
    auto it = edge_ids.find(key);
    if (it != edge_ids.end()) return it->second;
    const int id = static_cast<int>(mesh.edges.size());
    mesh.edges.push_back({key.first, key.second});
    edge_ids.emplace(key, id);
    return id;
  };
  for (const auto& t : mesh.triangles) {
    mesh.triangle_edges.push_back({edge_id(t[0], t[1]), edge_id(t[1], t[2]), edge_id(t[2], t[0])});
  }

  for (int j = 0; j < ny; ++j) {
    mesh.boundary.push_back({vid(0, j), vid(0, j + 1), BoundaryTag::Inlet});
    mesh.boundary.push_back({vid(nx, j), vid(nx, j + 1), BoundaryTag::Outlet});
  }
  for (int i = 0; i < nx; ++i) {
    mesh.boundary.push_back({vid(i, 0), vid(i + 1, 0), BoundaryTag::Wall});
    mesh.boundary.push_back({vid(i, ny), vid(i + 1, ny), BoundaryTag::Wall});
  }
  return mesh;
}

}  // namespace wrom::fom
