#include <cmath>
#include <numbers>

#include "doctest.h"
#include "soliton/errors.hpp"
#include "soliton/generators.hpp"
#include "soliton/mesh.hpp"

using namespace soliton;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("grim reaper vertices satisfy the closed form") {
    const SurfaceMesh m = make_grim_reaper(0.5, 4.0, 0.05);
    double max_err = 0, min_x = 1e9, max_x = -1e9, min_z = 1e9;
    for (const auto& v : m.vertices) {
        max_err = std::max(max_err, std::abs(v.z() + std::log(std::cos(v.x() + kPi / 2))));
        min_x = std::min(min_x, v.x());
        max_x = std::max(max_x, v.x());
        min_z = std::min(min_z, v.z());
    }
    CHECK(max_err < 1e-10);
    CHECK(max_x - min_x < kPi);
    CHECK(max_x - min_x > kPi - 0.2);
    CHECK(min_z == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(m.meta.params.at("width") == doctest::Approx(kPi));
    CHECK(m.meta.height_cap == doctest::Approx(4.0));
    CHECK(m.meta.is_translator);
    build_connectivity(m);  // manifold, consistently wound
}

TEST_CASE("grim reaper shift moves the apex line") {
    const SurfaceMesh m = make_grim_reaper(0.3, 1.0, 0.1, /*shift=*/1.25);
    double apex_x = 0, best_z = 1e9;
    for (const auto& v : m.vertices)
        if (v.z() < best_z) {
            best_z = v.z();
            apex_x = v.x();
        }
    CHECK(apex_x == doctest::Approx(1.25 - kPi / 2).epsilon(1e-9));
}

TEST_CASE("reaper profile cap guards") {
    CHECK_THROWS_AS(make_grim_reaper(1.0, 250.0, 0.1), ClippedHeight);
    CHECK_THROWS_AS(make_grim_reaper(1.0, -1.0, 0.1), BadInput);
    CHECK_THROWS_AS(make_tilted_grim_reaper(kPi / 2, 1.0, 1.0, 0.1), InvalidAngle);
}

TEST_CASE("tilted reaper is a graph of the tilted profile") {
    const double theta = kPi / 6;
    const SurfaceMesh m = make_tilted_grim_reaper(theta, 1.0, 2.0, 0.05);
    const double c = std::cos(theta), t = std::tan(theta);
    double max_err = 0;
    for (const auto& v : m.vertices) {
        const double u = -std::log(std::cos(v.x() * c)) / (c * c) + v.y() * t;
        max_err = std::max(max_err, std::abs(v.z() - u));
    }
    CHECK(max_err < 1e-9);
    CHECK(m.meta.params.at("width") == doctest::Approx(kPi / c));
    build_connectivity(m);
}

TEST_CASE("bowl profile matches series and far-field asymptotics") {
    const BowlProfile prof = solve_bowl_profile(9.0);
    CHECK(std::abs(prof.u_at(0.1) - 0.0025) < 5e-6);        // u ~ r^2/4 near 0
    CHECK(std::abs(prof.du_at(8.0) - (8.0 - 1.0 / 8.0)) < 2e-2);  // u' ~ r - 1/r
    CHECK(prof.u_at(0.0) == doctest::Approx(0.0));
    CHECK(prof.du_at(0.0) == doctest::Approx(0.0));
    const double r3 = prof.radius_for_height(3.0);
    CHECK(prof.u_at(r3) == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(prof.arclength_to(5.0) > prof.arclength_to(3.0));
}

TEST_CASE("revolved bowl mesh is manifold with sane edge lengths") {
    const double h = 0.1;
    const SurfaceMesh m = make_bowl(3.0, h);
    build_connectivity(m);
    double lo = 1e9, hi = 0, apex = 1e9;
    for (const auto& t : m.triangles)
        for (int k = 0; k < 3; ++k) {
            const double len = (m.vertices[t[k]] - m.vertices[t[(k + 1) % 3]]).norm();
            lo = std::min(lo, len);
            hi = std::max(hi, len);
        }
    for (const auto& v : m.vertices) apex = std::min(apex, v.norm());
    CHECK(apex == doctest::Approx(0.0));   // pole vertex present
    CHECK(lo > 0.3 * h);
    CHECK(hi < 2.5 * h);
    CHECK(m.meta.is_translator);
    CHECK(m.meta.area_growth_c > 0);
}

TEST_CASE("bowl to height hits the requested cap") {
    const SurfaceMesh m = make_bowl_to_height(4.0, 0.12);
    double top = -1e9;
    for (const auto& v : m.vertices) top = std::max(top, v.z());
    CHECK(top == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(m.meta.height_cap == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("bowl graph samples the profile over the square") {
    const SurfaceMesh m = make_bowl_graph(1.0, 0.1);
    build_connectivity(m);
    const BowlProfile prof = solve_bowl_profile(2.0);
    double max_err = 0;
    for (const auto& v : m.vertices)
        max_err = std::max(max_err, std::abs(v.z() - prof.u_at(std::hypot(v.x(), v.y()))));
    CHECK(max_err < 1e-8);
    CHECK(m.meta.is_translator);
}

TEST_CASE("cylinder closes in the angular direction") {
    const SurfaceMesh m = make_round_cylinder(1.0, 2.0, 0.1);
    const MeshConnectivity conn = build_connectivity(m);
    std::size_t nb = 0;
    for (std::size_t v = 0; v < m.n_vertices(); ++v)
        if (conn.boundary_vertex[v]) ++nb;
    CHECK(nb > 0);                      // top and bottom rims only
    CHECK(nb * 4 < m.n_vertices());     // the wall interior dominates
    CHECK(!m.meta.is_translator);
    for (const auto& v : m.vertices)
        CHECK(std::hypot(v.x(), v.y()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("saddle fixtures put the origin on a vertex") {
    for (const auto kind : {SaddleKind::quadratic, SaddleKind::monkey}) {
        const SurfaceMesh m = make_saddle(kind, 1.0, 0.25);
        build_connectivity(m);
        bool origin = false;
        for (const auto& v : m.vertices)
            if (v.norm() == 0.0) origin = true;
        CHECK(origin);
        CHECK(!m.meta.is_translator);
    }
}

TEST_CASE("graph_mesh validates its grid") {
    const std::vector<double> xs{0, 1}, ys{0, 1, 2};
    CHECK_THROWS_AS(graph_mesh(xs, ys, std::vector<double>(5, 0.0)), BadInput);
    const SurfaceMesh m = graph_mesh(xs, ys, std::vector<double>(6, 0.0), false, true);
    CHECK(m.n_triangles() == 4);
    // downward orientation: first triangle normal points below the plane
    const auto& t = m.triangles.front();
    const Eigen::Vector3d n = (m.vertices[t[1]] - m.vertices[t[0]])
                                  .cross(m.vertices[t[2]] - m.vertices[t[0]]);
    CHECK(n.z() < 0);
}
