#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "soliton/diagnostics.hpp"
#include "soliton/errors.hpp"
#include "soliton/generators.hpp"
#include "soliton/mesh.hpp"

using namespace soliton;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> axis(double extent, double h) {
    std::vector<double> xs;
    const int n = static_cast<int>(std::lround(extent / h));
    for (int k = -n; k <= n; ++k) xs.push_back(k * h);
    return xs;
}

} // namespace

TEST_CASE("vertical plane carries no curvature and no residual") {
    const SurfaceMesh m = make_vertical_plane(1.5, 0.15);
    const DiagnosticsField f = compute_diagnostics(m);
    for (std::size_t v = 0; v < m.n_vertices(); ++v) {
        if (f.vertex[v].near_boundary) continue;
        CHECK(std::abs(f.vertex[v].H) < 1e-10);
        CHECK(std::abs(f.vertex[v].K) < 1e-10);
        CHECK(std::abs(f.vertex[v].residual) < 1e-10);
        CHECK(std::abs(f.vertex[v].normal.x()) == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK(f.max_interior_residual < 1e-10);
    CHECK(f.interior_count > 0);
}

TEST_CASE("horizontal plane residual is the normal's vertical part") {
    const auto xs = axis(1.0, 0.1);
    SurfaceMesh m = graph_mesh(xs, xs, std::vector<double>(xs.size() * xs.size(), 0.0),
                               false, /*downward=*/true);
    const DiagnosticsField down = compute_diagnostics(m);
    m.flip_orientation();
    const DiagnosticsField up = compute_diagnostics(m);
    for (std::size_t v = 0; v < m.n_vertices(); ++v) {
        if (down.vertex[v].near_boundary) continue;
        CHECK(down.vertex[v].residual == doctest::Approx(-1.0).epsilon(1e-12));
        // orientation flip negates the residual exactly
        CHECK(std::abs(down.vertex[v].residual + up.vertex[v].residual) < 1e-12);
    }
}

TEST_CASE("cylinder curvatures follow the radius") {
    for (const double r : {0.5, 1.0, 2.0}) {
        const SurfaceMesh m = make_round_cylinder(r, 2.0 * r, r / 30);
        const DiagnosticsField f = compute_diagnostics(m);
        double worst_h = 0, worst_k = 0, worst_a2 = 0, worst_res = 0;
        int n = 0;
        for (std::size_t v = 0; v < m.n_vertices(); ++v) {
            const auto& d = f.vertex[v];
            if (d.near_boundary) continue;
            ++n;
            worst_h = std::max(worst_h, std::abs(d.H * r - 1.0));
            worst_k = std::max(worst_k, std::abs(d.K * r * r));
            worst_a2 = std::max(worst_a2, std::abs(d.A2 * r * r - 1.0));
            worst_res = std::max(worst_res, std::abs(d.residual * r - 1.0));
        }
        REQUIRE(n > 0);
        CHECK(worst_h < 5e-3);
        CHECK(worst_k < 5e-3);
        CHECK(worst_a2 < 1e-2);
        CHECK(worst_res < 5e-3);  // H + <nu,e3> = 1/r, the normal is horizontal
    }
}

TEST_CASE("grim reaper translator residual vanishes under refinement") {
    const DiagnosticsField c = compute_diagnostics(make_grim_reaper(1.0, 1.5, 0.08));
    const DiagnosticsField fgrid = compute_diagnostics(make_grim_reaper(1.0, 1.5, 0.04));
    CHECK(fgrid.max_interior_residual < c.max_interior_residual);
    CHECK(c.max_interior_residual / fgrid.max_interior_residual > 1.7);
    CHECK(fgrid.max_interior_residual < 2e-2);
}

TEST_CASE("diagnostics are invariant under rigid motions") {
    SurfaceMesh a = make_grim_reaper(0.8, 1.2, 0.06);
    const DiagnosticsField fa = compute_diagnostics(a);
    SurfaceMesh b = a;
    b.transform(rotation_about_e3(kPi / 7), {0.3, -0.8, 1.1});
    const DiagnosticsField fb = compute_diagnostics(b);
    double dh = 0, dres = 0;
    for (std::size_t v = 0; v < a.n_vertices(); ++v) {
        if (fa.vertex[v].near_boundary) continue;
        dh = std::max(dh, std::abs(fa.vertex[v].H - fb.vertex[v].H));
        dres = std::max(dres, std::abs(fa.vertex[v].residual - fb.vertex[v].residual));
    }
    CHECK(dh < 1e-10);
    CHECK(dres < 1e-10);
}

TEST_CASE("rotated reaper matches the rotated closed form") {
    // rotate by pi/2 about e3: the graph over x1 becomes a graph over x2
    SurfaceMesh m = make_grim_reaper(0.5, 1.0, 0.1);
    m.transform(rotation_about_e3(kPi / 2), Eigen::Vector3d::Zero());
    for (const auto& v : m.vertices)
        CHECK(std::abs(v.z() + std::log(std::cos(v.y() + kPi / 2))) < 1e-10);
}

TEST_CASE("saddle fixtures recover exact second-order data at the origin") {
    const SurfaceMesh q = make_saddle(SaddleKind::quadratic, 1.0, 0.1);
    const DiagnosticsField fq = compute_diagnostics(q);
    const SurfaceMesh mk = make_saddle(SaddleKind::monkey, 1.0, 0.1);
    const DiagnosticsField fm = compute_diagnostics(mk);
    for (std::size_t v = 0; v < q.n_vertices(); ++v) {
        if (q.vertices[v].norm() != 0.0) continue;
        CHECK(std::abs(fq.vertex[v].H) < 1e-9);
        CHECK(fq.vertex[v].K == doctest::Approx(-4.0).epsilon(1e-8));
        CHECK(std::abs(fq.vertex[v].k1 - 2.0) < 1e-8);
        CHECK(std::abs(fq.vertex[v].k2 + 2.0) < 1e-8);
    }
    for (std::size_t v = 0; v < mk.n_vertices(); ++v) {
        if (mk.vertices[v].norm() != 0.0) continue;
        CHECK(std::abs(fm.vertex[v].H) < 1e-9);
        CHECK(std::abs(fm.vertex[v].K) < 1e-9);
    }
}

TEST_CASE("quasiconformal identity holds to rounding") {
    const QuasiconformalReport r =
        quasiconformal_defect(compute_diagnostics(make_grim_reaper(0.6, 1.0, 0.05)));
    CHECK(r.max_identity_defect < 1e-10);
    // on a translator |A|^2 + 2K = 1 - <nu,e3>^2 <= 1
    CHECK(r.max_inequality_slack < 1e-2);
}

TEST_CASE("tiny neighborhoods are rejected") {
    SurfaceMesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    m.triangles = {{0, 1, 2}};
    CHECK_THROWS_AS(compute_diagnostics(m), DegenerateNeighborhood);
}
