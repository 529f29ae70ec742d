#pragma once

#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "soliton/mesh.hpp"

namespace soliton {

// Cotangent Laplace–Beltrami with barycentric vertex areas, plus per-triangle
// tangential gradients averaged to vertices by triangle area. Exact for
// linear fields on planar meshes; the uniform-grid triangulations reduce to
// the classic five-point stencil.
struct SurfaceCalculus {
    Eigen::SparseMatrix<double> cotan;   // Σ_u w_uv (f_u − f_v), rows = vertices
    Eigen::VectorXd vertex_area;         // barycentric (1/3 of incident triangles)

    // Δf per vertex: cotan row sum divided by vertex area.
    Eigen::VectorXd laplacian(const Eigen::VectorXd& f) const;
};

SurfaceCalculus build_surface_calculus(const SurfaceMesh& mesh);

// Area-weighted average of per-triangle P1 gradients.
std::vector<Eigen::Vector3d> tangential_gradient(const SurfaceMesh& mesh,
                                                 const Eigen::VectorXd& f);

} // namespace soliton
