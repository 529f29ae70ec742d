#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "soliton/mesh.hpp"

namespace soliton {

// Zero set of a per-vertex scalar, traced triangle by triangle into a
// polyline graph. Vertices whose value sits within the snap tolerance of the
// level are treated as exactly on it, so nodal lines running through mesh
// vertices (saddle points in particular) come out with the right incidence
// structure instead of splintering.
struct NodalComponent {
    std::int32_t nodes = 0;
    std::int32_t segments = 0;
    bool has_cycle = false;  // a connected graph has a cycle iff E >= V
};

struct NodalJunction {
    std::int32_t node = -1;
    std::int32_t degree = 0;
    std::int32_t multiplicity = 0;  // arcs through the point = degree / 2
};

struct LevelSetResult {
    std::vector<Eigen::Vector3d> nodes;
    std::vector<std::int32_t> node_source_vertex;   // mesh vertex id, -1 for edge crossings
    std::vector<std::int32_t> node_nearest_vertex;  // always a mesh vertex id
    std::vector<std::array<std::int32_t, 2>> segments;
    std::vector<std::int32_t> degree;          // per node
    std::vector<std::int32_t> node_component;  // per node
    std::vector<NodalComponent> components;
    std::vector<NodalJunction> junctions;  // nodes of degree >= 3

    bool empty() const { return segments.empty(); }
    bool acyclic() const {
        for (const auto& c : components)
            if (c.has_cycle) return false;
        return true;
    }
};

LevelSetResult level_set_on_mesh(const SurfaceMesh& mesh, const std::vector<double>& values,
                                 double level = 0.0);

struct PlaneSpec {
    Eigen::Vector3d point{0, 0, 0};
    Eigen::Vector3d normal{1, 0, 0};
    bool vertical() const { return normal.z() == 0.0; }
};

// Section of the surface by the plane through spec.point with spec.normal,
// as the zero set of x ↦ ⟨normal, x − point⟩. Throws EmptySection when the
// plane misses the mesh.
LevelSetResult plane_section(const SurfaceMesh& mesh, const PlaneSpec& spec);

// max over strict-interior vertices of |Δf + ⟨∇f, e₃⟩| for the discrete
// Laplace-Beltrami and per-vertex tangential gradient. For f = ⟨V, x − p⟩
// with horizontal V this vanishes on exact translators; the discrete value
// measures the mesh. Strict interior keeps two rings plus the stencil off
// the boundary.
double nodal_pde_residual(const SurfaceMesh& mesh, const std::vector<double>& f);

// Same residual for the mean curvature equation ΔH + ⟨∇H, e₃⟩ + |A|²H with
// H, |A|² from the pointwise quadric fits.
double h_equation_residual(const SurfaceMesh& mesh);

// Zero set of the fitted mean curvature, with the total variation of the
// fitted normal along each component (small variation = the H = 0 piece is
// nearly planar).
struct HZeroResult {
    LevelSetResult curves;
    std::vector<double> normal_variation;  // per component
};
HZeroResult extract_H_zero(const SurfaceMesh& mesh);

} // namespace soliton
