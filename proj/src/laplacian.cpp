#include "soliton/laplacian.hpp"

#include <vector>

#include "soliton/errors.hpp"

namespace soliton {

Eigen::VectorXd SurfaceCalculus::laplacian(const Eigen::VectorXd& f) const {
    if (f.size() != cotan.rows()) throw BadInput("laplacian: field size mismatch");
    Eigen::VectorXd out = cotan * f;
    return out.cwiseQuotient(vertex_area);
}

SurfaceCalculus build_surface_calculus(const SurfaceMesh& mesh) {
    const auto nv = static_cast<Eigen::Index>(mesh.n_vertices());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(mesh.n_triangles() * 12);
    Eigen::VectorXd area = Eigen::VectorXd::Zero(nv);

    for (const auto& t : mesh.triangles) {
        const Eigen::Vector3d& p0 = mesh.vertices[t[0]];
        const Eigen::Vector3d& p1 = mesh.vertices[t[1]];
        const Eigen::Vector3d& p2 = mesh.vertices[t[2]];
        const double a2 = (p1 - p0).cross(p2 - p0).norm();  // twice the area
        if (a2 <= 0) throw BadInput("zero-area triangle in cotan assembly");
        for (int k = 0; k < 3; ++k) {
            area[t[k]] += a2 / 6.0;
            // cotangent at corner k weights the opposite edge (k+1, k+2)
            const Eigen::Vector3d& a = mesh.vertices[t[k]];
            const Eigen::Vector3d& b = mesh.vertices[t[(k + 1) % 3]];
            const Eigen::Vector3d& c = mesh.vertices[t[(k + 2) % 3]];
            const double cot = (b - a).dot(c - a) / a2;
            const double w = 0.5 * cot;
            const int i = t[(k + 1) % 3], j = t[(k + 2) % 3];
            trip.emplace_back(i, j, w);
            trip.emplace_back(j, i, w);
            trip.emplace_back(i, i, -w);
            trip.emplace_back(j, j, -w);
        }
    }

    SurfaceCalculus calc;
    calc.cotan.resize(nv, nv);
    calc.cotan.setFromTriplets(trip.begin(), trip.end());
    calc.vertex_area = area;
    for (Eigen::Index i = 0; i < nv; ++i)
        if (calc.vertex_area[i] <= 0)
            throw DegenerateNeighborhood("isolated vertex in cotan assembly");
    return calc;
}

std::vector<Eigen::Vector3d> tangential_gradient(const SurfaceMesh& mesh,
                                                 const Eigen::VectorXd& f) {
    if (f.size() != static_cast<Eigen::Index>(mesh.n_vertices()))
        throw BadInput("tangential_gradient: field size mismatch");
    std::vector<Eigen::Vector3d> grad(mesh.n_vertices(), Eigen::Vector3d::Zero());
    std::vector<double> weight(mesh.n_vertices(), 0.0);
    for (const auto& t : mesh.triangles) {
        const Eigen::Vector3d& p0 = mesh.vertices[t[0]];
        const Eigen::Vector3d& p1 = mesh.vertices[t[1]];
        const Eigen::Vector3d& p2 = mesh.vertices[t[2]];
        const Eigen::Vector3d n = (p1 - p0).cross(p2 - p0);
        const double a2 = n.norm();
        if (a2 <= 0) continue;
        const Eigen::Vector3d nh = n / a2;
        // ∇λ_k = n̂ × e_k / (2A), e_k the edge opposite vertex k, oriented
        // with the triangle.
        const Eigen::Vector3d g = (f[t[0]] * nh.cross(p2 - p1) + f[t[1]] * nh.cross(p0 - p2) +
                                   f[t[2]] * nh.cross(p1 - p0)) /
                                  a2;
        const double A = 0.5 * a2;
        for (int k = 0; k < 3; ++k) {
            grad[t[k]] += A * g;
            weight[t[k]] += A;
        }
    }
    for (std::size_t i = 0; i < grad.size(); ++i)
        if (weight[i] > 0) grad[i] /= weight[i];
    return grad;
}

} // namespace soliton
