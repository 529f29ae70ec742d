#include "soliton/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <unordered_map>

#include "soliton/errors.hpp"

namespace soliton {

Eigen::AlignedBox3d SurfaceMesh::bounding_box() const {
    Eigen::AlignedBox3d box;
    for (const auto& v : vertices) box.extend(v);
    return box;
}

double SurfaceMesh::total_area() const {
    double area = 0.0;
    for (const auto& t : triangles) {
        const Eigen::Vector3d e1 = vertices[t[1]] - vertices[t[0]];
        const Eigen::Vector3d e2 = vertices[t[2]] - vertices[t[0]];
        area += 0.5 * e1.cross(e2).norm();
    }
    return area;
}

void SurfaceMesh::flip_orientation() {
    for (auto& t : triangles) std::swap(t[1], t[2]);
}

void SurfaceMesh::transform(const Eigen::Matrix3d& R, const Eigen::Vector3d& t) {
    for (auto& v : vertices) v = R * v + t;
}

Eigen::Matrix3d rotation_about_e3(double angle) {
    Eigen::Matrix3d R;
    const double c = std::cos(angle), s = std::sin(angle);
    R << c, -s, 0, s, c, 0, 0, 0, 1;
    return R;
}

MeshConnectivity build_connectivity(const SurfaceMesh& mesh) {
    const auto nv = static_cast<std::int32_t>(mesh.n_vertices());
    if (nv < 3 || mesh.triangles.empty())
        throw BadInput("mesh has fewer than 3 vertices or no triangles");

    const double diag = mesh.bounding_box().diagonal().norm();
    const double area_eps = 1e-12 * diag * diag;

    MeshConnectivity conn;
    conn.vertex_triangles.resize(nv);
    conn.vertex_ring.resize(nv);
    conn.boundary_vertex.assign(nv, 0);
    conn.near_boundary.assign(nv, 0);

    // Directed half-edge census: a repeat means inconsistent winding or a
    // non-manifold fan. Undirected count > 2 means a non-manifold edge.
    std::unordered_map<std::uint64_t, int> directed;
    directed.reserve(mesh.triangles.size() * 3);
    auto key = [nv](std::int32_t a, std::int32_t b) {
        return static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(nv) +
               static_cast<std::uint64_t>(b);
    };

    for (std::size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
        const auto& t = mesh.triangles[ti];
        for (int k = 0; k < 3; ++k) {
            const std::int32_t a = t[k];
            if (a < 0 || a >= nv) throw BadInput("triangle index out of range");
        }
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
            throw NonManifoldMesh("triangle with repeated vertex");
        const Eigen::Vector3d e1 = mesh.vertices[t[1]] - mesh.vertices[t[0]];
        const Eigen::Vector3d e2 = mesh.vertices[t[2]] - mesh.vertices[t[0]];
        if (0.5 * e1.cross(e2).norm() <= area_eps)
            throw NonManifoldMesh("degenerate triangle below area tolerance");
        for (int k = 0; k < 3; ++k) {
            const std::int32_t a = t[k], b = t[(k + 1) % 3];
            if (++directed[key(a, b)] > 1)
                throw NonManifoldMesh("repeated directed edge (inconsistent orientation or fan)");
            conn.vertex_triangles[a].push_back(static_cast<std::int32_t>(ti));
        }
    }

    // Rings and boundary edges. An edge is boundary when its opposite
    // direction never occurs.
    for (std::size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
        const auto& t = mesh.triangles[ti];
        for (int k = 0; k < 3; ++k) {
            const std::int32_t a = t[k], b = t[(k + 1) % 3];
            conn.vertex_ring[a].push_back(b);
            conn.vertex_ring[b].push_back(a);
            if (directed.find(key(b, a)) == directed.end()) {
                conn.boundary_vertex[a] = 1;
                conn.boundary_vertex[b] = 1;
            }
        }
    }
    for (auto& ring : conn.vertex_ring) {
        std::sort(ring.begin(), ring.end());
        ring.erase(std::unique(ring.begin(), ring.end()), ring.end());
    }

    // Two-ring distance flag via a short BFS from all boundary vertices.
    std::queue<std::pair<std::int32_t, int>> bfs;
    std::vector<int> dist(nv, 3);
    for (std::int32_t v = 0; v < nv; ++v)
        if (conn.boundary_vertex[v]) {
            dist[v] = 0;
            bfs.emplace(v, 0);
        }
    while (!bfs.empty()) {
        auto [v, d] = bfs.front();
        bfs.pop();
        if (d >= 2) continue;
        for (std::int32_t u : conn.vertex_ring[v])
            if (dist[u] > d + 1) {
                dist[u] = d + 1;
                bfs.emplace(u, d + 1);
            }
    }
    for (std::int32_t v = 0; v < nv; ++v) conn.near_boundary[v] = dist[v] <= 2 ? 1 : 0;

    return conn;
}

SurfaceMesh merge_meshes(const SurfaceMesh& a, const SurfaceMesh& b) {
    SurfaceMesh m;
    m.vertices = a.vertices;
    m.vertices.insert(m.vertices.end(), b.vertices.begin(), b.vertices.end());
    m.triangles = a.triangles;
    const auto off = static_cast<std::int32_t>(a.n_vertices());
    for (const auto& t : b.triangles)
        m.triangles.push_back({t[0] + off, t[1] + off, t[2] + off});
    m.meta.generator = "union";
    m.meta.grid_h = std::max(a.meta.grid_h, b.meta.grid_h);
    m.meta.height_cap = std::min(a.meta.height_cap, b.meta.height_cap);
    m.meta.area_growth_c =
        (a.meta.area_growth_c > 0 && b.meta.area_growth_c > 0)
            ? a.meta.area_growth_c + b.meta.area_growth_c
            : 0.0;
    m.meta.is_translator = a.meta.is_translator && b.meta.is_translator;
    m.meta.closed = a.meta.closed && b.meta.closed;
    return m;
}

} // namespace soliton
