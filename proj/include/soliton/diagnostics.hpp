#pragma once

#include <vector>

#include <Eigen/Core>

#include "soliton/mesh.hpp"

namespace soliton {

// Pointwise second-order data recovered from the mesh. Conventions:
//   - S = dν (sphere with outward normal: H = 2/r > 0)
//   - H = κ₁ + κ₂, K = κ₁·κ₂, |A|² = κ₁² + κ₂²
//   - residual = H + ⟨ν, e₃⟩, identically 0 on a translator oriented with
//     the downward normal. The residual is odd under orientation flip.
struct VertexDiagnostics {
    Eigen::Vector3d normal{0, 0, 0};
    double k1 = 0, k2 = 0;   // κ₁ ≥ κ₂
    double H = 0;            // trace of the shape operator
    double K = 0;            // determinant of the shape operator
    double A2 = 0;           // κ₁² + κ₂²
    double residual = 0;
    bool near_boundary = false;
};

struct DiagnosticsField {
    std::vector<VertexDiagnostics> vertex;
    // Max of |residual| over vertices at least three rings from the boundary.
    double max_interior_residual = 0.0;
    int interior_count = 0;
};

// Quadric fit over the two-ring neighborhood in an estimated tangent frame,
// then shape operator of the fitted Monge patch. Throws DegenerateNeighborhood
// when a fit is rank-deficient (fewer than five usable neighbors or a
// collapsed projection).
DiagnosticsField compute_diagnostics(const SurfaceMesh& mesh,
                                     const MeshConnectivity& conn);
DiagnosticsField compute_diagnostics(const SurfaceMesh& mesh);

// max over vertices of | |A|² + 2K − H² | plus the largest violation of the
// translator bound |A|² + 2K ≤ 1 (reported separately; meaningful only when
// the mesh is a translator).
struct QuasiconformalReport {
    double max_identity_defect = 0.0;
    double max_inequality_slack = 0.0;  // max over interior of |A|²+2K−1
};
QuasiconformalReport quasiconformal_defect(const DiagnosticsField& field);

} // namespace soliton
