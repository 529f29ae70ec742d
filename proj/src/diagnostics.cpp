#include "soliton/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "soliton/errors.hpp"
#include "soliton/parallel.hpp"

namespace soliton {

namespace {

// Angle-weighted triangle normals: robust on the anisotropic graded meshes.
Eigen::Vector3d estimated_normal(const SurfaceMesh& mesh, const MeshConnectivity& conn,
                                 std::int32_t v) {
    Eigen::Vector3d n = Eigen::Vector3d::Zero();
    for (std::int32_t ti : conn.vertex_triangles[v]) {
        const auto& t = mesh.triangles[ti];
        int k = 0;
        while (t[k] != v) ++k;
        const Eigen::Vector3d& p = mesh.vertices[v];
        const Eigen::Vector3d a = mesh.vertices[t[(k + 1) % 3]] - p;
        const Eigen::Vector3d b = mesh.vertices[t[(k + 2) % 3]] - p;
        const Eigen::Vector3d cr = a.cross(b);
        const double cn = cr.norm();
        if (cn <= 0) continue;
        const double angle = std::atan2(cn, a.dot(b));
        n += (angle / cn) * cr;
    }
    const double nn = n.norm();
    if (nn <= 0) throw DegenerateNeighborhood("vanishing normal estimate");
    return n / nn;
}

void two_ring(const MeshConnectivity& conn, std::int32_t v, std::vector<std::int32_t>& out) {
    out.clear();
    for (std::int32_t u : conn.vertex_ring[v]) out.push_back(u);
    const std::size_t one_ring = out.size();
    for (std::size_t i = 0; i < one_ring; ++i)
        for (std::int32_t w : conn.vertex_ring[out[i]])
            if (w != v) out.push_back(w);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
}

} // namespace

DiagnosticsField compute_diagnostics(const SurfaceMesh& mesh, const MeshConnectivity& conn) {
    const std::size_t nv = mesh.n_vertices();
    DiagnosticsField field;
    field.vertex.resize(nv);

    std::vector<std::string> failure(chunk_count(nv, 1024));
    parallel_chunks(nv, 1024, [&](std::size_t b, std::size_t e, std::size_t chunk) {
        std::vector<std::int32_t> nbrs;
        for (std::size_t vi = b; vi < e && failure[chunk].empty(); ++vi) {
            const auto v = static_cast<std::int32_t>(vi);
            VertexDiagnostics& d = field.vertex[vi];
            d.near_boundary = conn.near_boundary[vi] != 0;
            try {
                const Eigen::Vector3d n0 = estimated_normal(mesh, conn, v);
                // Tangent frame: pick the coordinate axis least aligned with n0.
                int axis = 0;
                for (int k = 1; k < 3; ++k)
                    if (std::abs(n0[k]) < std::abs(n0[axis])) axis = k;
                const Eigen::Vector3d t1 =
                    (Eigen::Vector3d::Unit(axis) - n0[axis] * n0).normalized();
                const Eigen::Vector3d t2 = n0.cross(t1);

                two_ring(conn, v, nbrs);
                if (nbrs.size() < 5)
                    throw DegenerateNeighborhood("fewer than 5 two-ring neighbors");

                // Scale by the mean tangential spread for conditioning.
                const Eigen::Vector3d& p = mesh.vertices[vi];
                double scale = 0.0;
                for (std::int32_t u : nbrs) scale += (mesh.vertices[u] - p).norm();
                scale /= static_cast<double>(nbrs.size());
                if (scale <= 0) throw DegenerateNeighborhood("coincident neighborhood");

                Eigen::MatrixXd A(nbrs.size(), 5);
                Eigen::VectorXd z(nbrs.size());
                for (std::size_t i = 0; i < nbrs.size(); ++i) {
                    const Eigen::Vector3d q = (mesh.vertices[nbrs[i]] - p) / scale;
                    const double x = q.dot(t1), y = q.dot(t2);
                    A(i, 0) = x * x;
                    A(i, 1) = x * y;
                    A(i, 2) = y * y;
                    A(i, 3) = x;
                    A(i, 4) = y;
                    z(i) = q.dot(n0);
                }
                Eigen::JacobiSVD<Eigen::MatrixXd> svd(
                    A, Eigen::ComputeThinU | Eigen::ComputeThinV);
                if (svd.singularValues()(4) <
                    1e-9 * svd.singularValues()(0))
                    throw DegenerateNeighborhood("rank-deficient quadric fit");
                const Eigen::VectorXd c = svd.solve(z);

                // Monge patch of the fit (heights along n0, gradient g at the
                // origin). Scale cancels out of g; Hessian carries 1/scale.
                const Eigen::Vector2d g(c(3), c(4));
                const double W2 = 1.0 + g.squaredNorm();
                const double W = std::sqrt(W2);
                Eigen::Matrix2d hess;
                hess << 2.0 * c(0), c(1), c(1), 2.0 * c(2);
                hess /= scale;
                Eigen::Matrix2d I;
                I << 1.0 + g(0) * g(0), g(0) * g(1), g(0) * g(1), 1.0 + g(1) * g(1);

                // S = dν = −I⁻¹·(Hess/W) for the frame-up normal. Eigenvalues
                // via the symmetric similar matrix I^{-1/2}·(−Hess/W)·I^{-1/2}.
                const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> isol(I);
                const Eigen::Matrix2d I_mhalf =
                    isol.operatorInverseSqrt();
                const Eigen::Matrix2d Ssym = I_mhalf * (-hess / W) * I_mhalf;
                Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> ssol(Ssym);
                d.k2 = ssol.eigenvalues()(0);
                d.k1 = ssol.eigenvalues()(1);
                // Independent formula paths: trace/det of S vs κ from eigenvalues.
                const Eigen::Matrix2d S = -I.inverse() * hess / W;
                d.H = S.trace();
                d.K = S.determinant();
                d.A2 = d.k1 * d.k1 + d.k2 * d.k2;
                d.normal = (t1 * (-g(0)) + t2 * (-g(1)) + n0) / W;
                d.normal.normalize();
                d.residual = d.H + d.normal.z();
            } catch (const error& err) {
                failure[chunk] = std::string(err.what()) + " (vertex " +
                                 std::to_string(vi) + ")";
            }
        }
    });
    for (const auto& msg : failure)
        if (!msg.empty()) throw DegenerateNeighborhood(msg);

    field.max_interior_residual = 0.0;
    field.interior_count = 0;
    for (std::size_t vi = 0; vi < nv; ++vi) {
        if (field.vertex[vi].near_boundary) continue;
        ++field.interior_count;
        field.max_interior_residual =
            std::max(field.max_interior_residual, std::abs(field.vertex[vi].residual));
    }
    return field;
}

DiagnosticsField compute_diagnostics(const SurfaceMesh& mesh) {
    return compute_diagnostics(mesh, build_connectivity(mesh));
}

QuasiconformalReport quasiconformal_defect(const DiagnosticsField& field) {
    QuasiconformalReport rep;
    for (const auto& d : field.vertex) {
        rep.max_identity_defect =
            std::max(rep.max_identity_defect, std::abs(d.A2 + 2.0 * d.K - d.H * d.H));
        if (!d.near_boundary)
            rep.max_inequality_slack =
                std::max(rep.max_inequality_slack, d.A2 + 2.0 * d.K - 1.0);
    }
    return rep;
}

} // namespace soliton
