#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace soliton {

// Facts about how a mesh was produced that downstream consumers cannot
// recover from the vertex data alone: truncation levels (for Gaussian tail
// bounds), the sampling pitch (for snapping tolerances), and an admissible
// quadratic area-growth constant.
struct MeshMetadata {
    std::string generator;                   // empty = unknown provenance
    std::map<std::string, double> params;
    double grid_h = 0.0;                     // sampling pitch, 0 = unknown
    double height_cap = std::numeric_limits<double>::infinity();
    double area_growth_c = 0.0;              // Area(Σ∩B_R) ≤ c·R² for all R; 0 = unknown
    bool is_translator = false;
    bool closed = false;                     // generator promises empty boundary
};

// Triangle soup with shared vertices. Orientation is part of the data:
// triangle winding determines the vertex normals and hence the sign of every
// curvature quantity computed on the mesh.
struct SurfaceMesh {
    std::vector<Eigen::Vector3d> vertices;
    std::vector<std::array<std::int32_t, 3>> triangles;
    MeshMetadata meta;

    std::size_t n_vertices() const { return vertices.size(); }
    std::size_t n_triangles() const { return triangles.size(); }

    Eigen::AlignedBox3d bounding_box() const;
    double total_area() const;
    void flip_orientation();
    // Rigid motion x ↦ R x + t applied in place; metadata is kept.
    void transform(const Eigen::Matrix3d& R, const Eigen::Vector3d& t);
};

// Adjacency derived from the triangle list. Built once per mesh where
// needed; holds everything the pointwise fits and discrete operators ask for.
struct MeshConnectivity {
    std::vector<std::vector<std::int32_t>> vertex_triangles;
    std::vector<std::vector<std::int32_t>> vertex_ring;  // one-ring vertices
    std::vector<std::uint8_t> boundary_vertex;           // touches a boundary edge
    std::vector<std::uint8_t> near_boundary;             // within two rings of one
};

// Validates manifoldness, consistent orientation and non-degeneracy, then
// returns adjacency. Throws NonManifoldMesh / BadInput.
//   - every undirected edge borders at most two triangles
//   - each directed half-edge appears at most once (consistent winding)
//   - triangle areas exceed 1e-12 · (bbox diagonal)²
MeshConnectivity build_connectivity(const SurfaceMesh& mesh);

// Rotation by angle about the vertical line through (axis_point, x3 arbitrary),
// composed with an optional translation. Convenience for the generators/tests.
Eigen::Matrix3d rotation_about_e3(double angle);

// Concatenates two meshes (disjointness is the caller's business; see
// check_additivity for the guarded union). Metadata: generator "union",
// caps/growth constants combined conservatively.
SurfaceMesh merge_meshes(const SurfaceMesh& a, const SurfaceMesh& b);

} // namespace soliton
