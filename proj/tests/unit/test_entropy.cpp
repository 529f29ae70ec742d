#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "doctest.h"
#include "soliton/entropy.hpp"
#include "soliton/errors.hpp"
#include "soliton/generators.hpp"
#include "soliton/mesh.hpp"

using namespace soliton;

namespace {

constexpr double kPi = std::numbers::pi;

SurfaceMesh octahedron() {
    SurfaceMesh m;
    m.vertices = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    m.triangles = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                   {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
    m.meta.generator = "octahedron";
    m.meta.closed = true;
    return m;
}

} // namespace

TEST_CASE("midedge rule agrees with the dense quadrature on a small mesh") {
    const SurfaceMesh m = make_grim_reaper(0.2, 0.35, 0.1);
    REQUIRE(m.n_triangles() <= 200);
    const Eigen::Vector3d x0(0.1, -0.2, 0.3);
    for (const double t0 : {0.5, 2.0}) {
        const double coarse = f_functional(m, {x0, t0}).value;
        const double dense = f_functional_dense(m, {x0, t0});
        CHECK(std::abs(coarse - dense) <= 1e-6);
    }
}

TEST_CASE("gaussian area of planes matches the closed forms") {
    const SurfaceMesh m = make_vertical_plane(6.4, 0.1);
    const GaussianQuadrature q(m);
    const double t0 = 0.4;
    const FResult on = q.value({Eigen::Vector3d::Zero(), t0});
    CHECK(std::abs(on.value - 1.0) <= 1e-4);
    CHECK(on.tail_bound < 1e-6);

    const double d = 0.8;
    const FResult off = q.value({Eigen::Vector3d(d, 0, 0), t0});
    CHECK(std::abs(off.value - std::exp(-d * d / (4.0 * t0))) <= 1e-4);

    CHECK(q.boundary_distance(Eigen::Vector3d::Zero()) == doctest::Approx(6.4).epsilon(1e-12));
}

TEST_CASE("gaussian area of a cylinder at the axis scale") {
    const SurfaceMesh m = make_round_cylinder(1.0, 10.0, 0.04);
    const Eigen::AlignedBox3d box = m.bounding_box();
    const Eigen::Vector3d mid(0, 0, 0.5 * (box.min().z() + box.max().z()));
    const FResult r = f_functional(m, {mid, 0.5});
    CHECK(std::abs(r.value - std::sqrt(2.0 * kPi / std::numbers::e)) <= 1e-3);
}

TEST_CASE("closed meshes carry no truncation tail") {
    const FResult r = f_functional(octahedron(), {Eigen::Vector3d::Zero(), 1.0});
    CHECK(r.tail_bound == 0.0);
    CHECK(r.value > 0.1);
}

TEST_CASE("open meshes without a growth constant are rejected") {
    const std::vector<double> xs = {0.0, 0.5, 1.0};
    const SurfaceMesh g = graph_mesh(xs, xs, std::vector<double>(9, 0.0), false);
    CHECK_THROWS_AS(f_functional(g, {Eigen::Vector3d::Zero(), 1.0}),
                    MissingTruncationMetadata);
}

TEST_CASE("gaussian area converges under mesh refinement") {
    const GaussianCenter c{Eigen::Vector3d(-kPi / 2, 0, 0.3), 0.7};
    auto val = [&](double h) { return f_functional(make_grim_reaper(1.0, 1.0, h), c).value; };
    const double d1 = val(0.2) - val(0.1);
    const double d2 = val(0.1) - val(0.05);
    CHECK(std::abs(d2) < std::abs(d1));
    CHECK(std::abs(d1) / std::max(std::abs(d2), 1e-15) > 2.0);
}

TEST_CASE("entropy of a truncated plane is one") {
    const SurfaceMesh m = make_vertical_plane(5.0, 0.125);
    const EntropyResult r = entropy(m);
    CHECK(std::abs(r.value - 1.0) <= 2e-2);
    CHECK(std::abs(r.argmax.x0.x()) < 0.2);
    CHECK(!r.trace.empty());
}

TEST_CASE("entropy of a grim reaper patch exceeds the plane") {
    const SurfaceMesh m = make_grim_reaper(3.0, 3.0, 0.15);
    const EntropyResult r = entropy(m);
    CHECK(r.value > 1.02);
    CHECK(r.value < 2.05);
    CHECK(r.tail_bound >= 0.0);
    bool saw_grid = false, saw_refine = false;
    for (const auto& row : r.trace) {
        if (std::strcmp(row.phase, "grid") == 0) saw_grid = true;
        if (std::strcmp(row.phase, "refine") == 0) saw_refine = true;
    }
    CHECK(saw_grid);
    CHECK(saw_refine);
}

TEST_CASE("entropy search respects its evaluation budget") {
    EntropyConfig cfg;
    cfg.eval_budget = 10;
    CHECK_THROWS_AS(entropy(make_vertical_plane(1.0, 0.5), cfg), SearchBudgetExceeded);
}

TEST_CASE("blow-down of a plane keeps unit gaussian area") {
    const SurfaceMesh m = make_vertical_plane(17.0, 0.25);
    CHECK(std::abs(blowdown_value(m, 2.0) - 1.0) <= 1e-4);
}

TEST_CASE("blow-down refuses meshes shorter than the rescaling needs") {
    const SurfaceMesh m = make_grim_reaper(1.0, 3.0, 0.2);
    CHECK_THROWS_AS(blowdown_value(m, 5.0), GeneratorHeightInsufficient);
}

TEST_CASE("gaussian area is monotone along the translation of a translator") {
    const SurfaceMesh m = make_grim_reaper(8.0, 10.0, 0.2);
    const HuiskenResult r = huisken_check(m, Eigen::Vector3d::Zero(), 1.0, {0.0, 0.5, 1.0});
    REQUIRE(r.values.size() == 3);
    CHECK(r.translator_metadata);
    CHECK(r.values[1] > r.values[0] - 1e-3);
    CHECK(r.values[2] > r.values[1] - 1e-3);
    CHECK(r.values[2] > r.values[0]);
}

TEST_CASE("the translation check is constant on planes and flags non-translators") {
    const SurfaceMesh plane = make_vertical_plane(8.0, 0.2);
    const HuiskenResult p = huisken_check(plane, Eigen::Vector3d::Zero(), 0.5, {0.0, 0.5, 1.0});
    CHECK(p.translator_metadata);
    for (const double v : p.values) CHECK(std::abs(v - 1.0) <= 1e-3);

    const SurfaceMesh cyl = make_round_cylinder(0.5, 1.0, 0.05);
    const HuiskenResult c = huisken_check(cyl, Eigen::Vector3d(0, 0, 0.5), 0.25, {0.0, 0.5});
    CHECK(!c.translator_metadata);
}

TEST_CASE("additivity check refuses meshes that touch") {
    const SurfaceMesh a = make_vertical_plane(2.0, 0.25);
    SurfaceMesh b = a;
    b.transform(rotation_about_e3(kPi / 2), Eigen::Vector3d::Zero());
    CHECK_THROWS_AS(check_additivity(a, b), MeshesIntersect);
}

TEST_CASE("triangle and disk overlap handles the containment cases exactly") {
    using V = Eigen::Vector2d;
    // triangle inside the disk
    CHECK(triangle_disk_area(V(0.1, 0.1), V(0.3, 0.1), V(0.1, 0.4), 1.0) ==
          doctest::Approx(0.03).epsilon(1e-12));
    // disk inside the triangle
    CHECK(triangle_disk_area(V(-10, -10), V(10, -10), V(0, 17), 1.0) ==
          doctest::Approx(kPi).epsilon(1e-12));
    // edge through the center cuts the disk in half
    CHECK(triangle_disk_area(V(-10, 0), V(10, 0), V(0, 17), 1.0) ==
          doctest::Approx(kPi / 2).epsilon(1e-12));
    // far away
    CHECK(triangle_disk_area(V(5, 5), V(6, 5), V(5, 6), 1.0) == 0.0);
    // orientation and cyclic order do not matter
    const V a(0, -2), b(1.2, 0.5), c(-0.8, 1.0);
    const double base = triangle_disk_area(a, b, c, 1.0);
    CHECK(triangle_disk_area(b, c, a, 1.0) == doctest::Approx(base).epsilon(1e-12));
    CHECK(triangle_disk_area(a, c, b, 1.0) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("triangle and disk overlap matches a monte carlo estimate") {
    const Eigen::Vector2d a(0, -2), b(1.2, 0.5), c(-0.8, 1.0);
    const double exact = triangle_disk_area(a, b, c, 1.0);
    std::mt19937_64 rng(1234567);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int n = 400000;
    int inside = 0;
    for (int i = 0; i < n; ++i) {
        double u = unif(rng), v = unif(rng);
        if (u + v > 1.0) {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        const Eigen::Vector2d p = a + u * (b - a) + v * (c - a);
        if (p.squaredNorm() <= 1.0) ++inside;
    }
    const double tri_area = 0.5 * std::abs((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
    const double mc = tri_area * static_cast<double>(inside) / n;
    CHECK(std::abs(exact - mc) < 0.012);
}

TEST_CASE("area growth of a plane is exactly quadratic") {
    const SurfaceMesh m = make_vertical_plane(2.0, 0.25);
    const double ratio =
        area_growth_ratio(m, {Eigen::Vector3d::Zero()}, {1.0, 1.5});
    CHECK(ratio == doctest::Approx(kPi).epsilon(1e-6));
    CHECK_THROWS_AS(area_growth_ratio(m, {}, {1.0}), BadInput);
    CHECK_THROWS_AS(area_growth_ratio(m, {Eigen::Vector3d::Zero()}, {-1.0}), BadInput);
}

TEST_CASE("area growth of a grim reaper stays below two planes") {
    const SurfaceMesh m = make_grim_reaper(3.0, 3.0, 0.15);
    const double ratio = area_growth_ratio(
        m, {Eigen::Vector3d(-kPi / 2, 0, 0), Eigen::Vector3d(-kPi / 2, 0, 1.5)}, {1.0, 2.0});
    CHECK(ratio < 2.0 * kPi + 0.3);
    CHECK(ratio > kPi - 0.3);
}
