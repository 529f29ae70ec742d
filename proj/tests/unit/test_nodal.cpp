#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "soliton/errors.hpp"
#include "soliton/generators.hpp"
#include "soliton/mesh.hpp"
#include "soliton/nodal.hpp"

using namespace soliton;

namespace {

constexpr double kPi = std::numbers::pi;

SurfaceMesh torus(double R, double r, int nu, int nv) {
    SurfaceMesh m;
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nv; ++j) {
            const double u = 2.0 * kPi * i / nu;
            const double v = 2.0 * kPi * j / nv;
            m.vertices.push_back({(R + r * std::cos(v)) * std::cos(u),
                                  (R + r * std::cos(v)) * std::sin(u), r * std::sin(v)});
        }
    auto vid = [&](int i, int j) {
        return static_cast<std::int32_t>(((i + nu) % nu) * nv + (j + nv) % nv);
    };
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nv; ++j) {
            m.triangles.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
            m.triangles.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
        }
    m.meta.generator = "torus";
    m.meta.closed = true;
    return m;
}

} // namespace

TEST_CASE("quadratic saddle nodal set is two crossing lines") {
    const SurfaceMesh m = make_saddle(SaddleKind::quadratic, 1.0, 0.1);
    std::vector<double> f(m.n_vertices());
    for (std::size_t v = 0; v < m.n_vertices(); ++v) f[v] = m.vertices[v].z();
    const LevelSetResult r = level_set_on_mesh(m, f);
    REQUIRE(!r.empty());
    REQUIRE(r.junctions.size() == 1);
    CHECK(r.junctions[0].degree == 4);
    CHECK(r.junctions[0].multiplicity == 2);
    CHECK(r.acyclic());
    // nodes lie on |x1| = |x2|
    for (const auto& p : r.nodes)
        CHECK(std::abs(std::abs(p.x()) - std::abs(p.y())) < 1e-9);
    const Eigen::Vector3d j = r.nodes[r.junctions[0].node];
    CHECK(j.norm() < 1e-12);
}

TEST_CASE("monkey saddle nodal set is three crossing lines") {
    const SurfaceMesh m = make_saddle(SaddleKind::monkey, 1.0, 0.1);
    std::vector<double> f(m.n_vertices());
    for (std::size_t v = 0; v < m.n_vertices(); ++v) f[v] = m.vertices[v].z();
    const LevelSetResult r = level_set_on_mesh(m, f);
    REQUIRE(r.junctions.size() == 1);
    CHECK(r.junctions[0].degree == 6);
    CHECK(r.junctions[0].multiplicity == 3);
    CHECK(r.acyclic());
}

TEST_CASE("circle level set closes into a cycle") {
    std::vector<double> xs;
    for (int k = -20; k <= 20; ++k) xs.push_back(k * 0.1);
    SurfaceMesh m = graph_mesh(xs, xs, std::vector<double>(xs.size() * xs.size(), 0.0), true);
    std::vector<double> f(m.n_vertices());
    for (std::size_t v = 0; v < m.n_vertices(); ++v)
        f[v] = m.vertices[v].head<2>().squaredNorm() - 1.0;
    const LevelSetResult r = level_set_on_mesh(m, f);
    REQUIRE(r.components.size() == 1);
    CHECK(r.components[0].has_cycle);
    CHECK(!r.acyclic());
    for (const auto& p : r.nodes)
        CHECK(std::abs(p.head<2>().norm() - 1.0) < 1e-2);
}

TEST_CASE("plane sections of a torus by its equator are two circles") {
    const SurfaceMesh m = torus(2.0, 0.7, 48, 24);
    const LevelSetResult r = plane_section(m, PlaneSpec{{0, 0, 0}, {0, 0, 1}});
    REQUIRE(r.components.size() == 2);
    CHECK(r.components[0].has_cycle);
    CHECK(r.components[1].has_cycle);
    for (const auto& p : r.nodes) {
        const double rho = p.head<2>().norm();
        CHECK(std::abs(p.z()) < 1e-12);
        CHECK((std::abs(rho - 1.3) < 1e-2 || std::abs(rho - 2.7) < 1e-2));
    }
}

TEST_CASE("vertical section of a grim reaper is one arc") {
    const SurfaceMesh m = make_grim_reaper(1.0, 2.0, 0.1);
    const LevelSetResult r = plane_section(m, PlaneSpec{{0, 0, 0}, {0, 1, 0}});
    REQUIRE(r.components.size() == 1);
    CHECK(r.acyclic());
    CHECK(r.junctions.empty());
    for (const auto& p : r.nodes)
        CHECK(std::abs(p.z() + std::log(std::cos(p.x() + kPi / 2))) < 1e-9);
}

TEST_CASE("sections that miss the mesh are reported") {
    const SurfaceMesh m = make_grim_reaper(1.0, 2.0, 0.1);
    CHECK_THROWS_AS(plane_section(m, PlaneSpec{{50, 0, 0}, {1, 0, 0}}), EmptySection);
    CHECK_THROWS_AS(plane_section(m, PlaneSpec{{0, 0, 0}, {0, 0, 0}}), BadInput);
}

TEST_CASE("level set input sizes are checked") {
    const SurfaceMesh m = make_saddle(SaddleKind::quadratic, 1.0, 0.25);
    CHECK_THROWS_AS(level_set_on_mesh(m, std::vector<double>(3, 0.0)), BadInput);
}

TEST_CASE("drift equation residual of a horizontal coordinate shrinks with the mesh") {
    auto residual = [](double h) {
        const SurfaceMesh m = make_grim_reaper(1.0, 1.5, h);
        std::vector<double> f(m.n_vertices());
        for (std::size_t v = 0; v < m.n_vertices(); ++v) f[v] = m.vertices[v].x();
        return nodal_pde_residual(m, f);
    };
    const double coarse = residual(0.08);
    const double fine = residual(0.04);
    CHECK(fine < coarse);
    CHECK(coarse < 0.2);
}

TEST_CASE("curvature equation residual shrinks with the mesh") {
    const double coarse = h_equation_residual(make_grim_reaper(1.0, 1.5, 0.08));
    const double fine = h_equation_residual(make_grim_reaper(1.0, 1.5, 0.04));
    CHECK(std::isfinite(coarse));
    CHECK(fine < coarse);
}

TEST_CASE("mean convex surfaces have no curvature zero set") {
    const HZeroResult bowl = extract_H_zero(make_bowl_graph(1.2, 0.08));
    CHECK(bowl.curves.empty());
    CHECK(bowl.normal_variation.empty());
    const HZeroResult reaper = extract_H_zero(make_grim_reaper(1.0, 1.5, 0.08));
    CHECK(reaper.curves.empty());
}

TEST_CASE("saddles change mean curvature sign across straight lines") {
    const HZeroResult r = extract_H_zero(make_saddle(SaddleKind::quadratic, 1.0, 0.05));
    REQUIRE(!r.curves.empty());
    REQUIRE(!r.normal_variation.empty());
    for (const double v : r.normal_variation) CHECK(v >= 0.0);
}
