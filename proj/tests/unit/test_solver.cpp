#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "doctest.h"
#include "soliton/errors.hpp"
#include "soliton/slab.hpp"
#include "soliton/solver.hpp"

using namespace soliton;

namespace {

constexpr double kPi = std::numbers::pi;

GraphPatch empty_patch(double hx, double hy, int nx, int ny) {
    GraphPatch p;
    p.x0 = -0.5 * hx * (nx - 1);
    p.y0 = -0.5 * hy * (ny - 1);
    p.hx = hx;
    p.hy = hy;
    p.nx = nx;
    p.ny = ny;
    p.u.assign(static_cast<std::size_t>(nx) * ny, 0.0);
    return p;
}

std::vector<double> interior_residual(const GraphPatch& p) {
    const auto full = translator_residual_field(p);
    std::vector<double> r;
    for (int i = 1; i + 1 < p.nx; ++i)
        for (int j = 1; j + 1 < p.ny; ++j) r.push_back(full[static_cast<std::size_t>(i) * p.ny + j]);
    return r;
}

} // namespace

TEST_CASE("tilted planes solve the equation up to the forcing term") {
    GraphPatch p = empty_patch(0.1, 0.15, 12, 9);
    const double a = 0.7, b = -0.4;
    for (int i = 0; i < p.nx; ++i)
        for (int j = 0; j < p.ny; ++j) p.at(i, j) = a * p.x(i) + b * p.y(j) + 0.3;
    const double w = std::sqrt(1.0 + a * a + b * b);
    for (const double r : interior_residual(p)) CHECK(std::abs(r + 1.0 / w) < 1e-13);
}

TEST_CASE("sampled grim reaper profile satisfies the discrete equation to second order") {
    auto worst = [](double h) {
        const int ny = 2 * static_cast<int>(std::lround(1.2 / h)) + 1;
        const int nx = ny;
        GraphPatch p = empty_patch(h, h, nx, ny);
        for (int i = 0; i < p.nx; ++i)
            for (int j = 0; j < p.ny; ++j) p.at(i, j) = -std::log(std::cos(p.y(j)));
        double m = 0;
        for (const double r : interior_residual(p)) m = std::max(m, std::abs(r));
        return m;
    };
    const double coarse = worst(0.1);
    const double fine = worst(0.05);
    CHECK(coarse / fine >= 3.2);
}

TEST_CASE("jacobian matches finite differences of the residual") {
    GraphPatch p = empty_patch(0.11, 0.09, 8, 9);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> unif(-0.3, 0.3);
    for (auto& v : p.u) v = unif(rng);

    const Eigen::SparseMatrix<double> J = translator_jacobian(p);
    const int m = (p.nx - 2) * (p.ny - 2);
    REQUIRE(J.rows() == m);
    REQUIRE(J.cols() == m);

    const double eps = 1e-5;
    Eigen::MatrixXd fd(m, m);
    GraphPatch q = p;
    for (int i = 1; i + 1 < p.nx; ++i)
        for (int j = 1; j + 1 < p.ny; ++j) {
            const int col = (i - 1) * (p.ny - 2) + (j - 1);
            q.at(i, j) = p.at(i, j) + eps;
            const auto plus = interior_residual(q);
            q.at(i, j) = p.at(i, j) - eps;
            const auto minus = interior_residual(q);
            q.at(i, j) = p.at(i, j);
            for (int row = 0; row < m; ++row) fd(row, col) = (plus[row] - minus[row]) / (2 * eps);
        }
    const Eigen::MatrixXd dense = Eigen::MatrixXd(J);
    const double scale = std::max(1.0, dense.cwiseAbs().maxCoeff());
    CHECK((dense - fd).cwiseAbs().maxCoeff() / scale < 1e-6);
}

TEST_CASE("zero boundary data keeps the square's symmetries") {
    GraphPatch start = empty_patch(0.08, 0.08, 21, 21);
    SolveStage stage;
    const GraphPatch sol = solve_translator_graph(start, {}, &stage);
    CHECK(stage.final_residual < 1e-11);
    CHECK(stage.newton_iterations > 0);
    double asym = 0, depth = 0;
    for (int i = 0; i < sol.nx; ++i)
        for (int j = 0; j < sol.ny; ++j) {
            asym = std::max(asym, std::abs(sol.at(i, j) - sol.at(sol.nx - 1 - i, j)));
            asym = std::max(asym, std::abs(sol.at(i, j) - sol.at(i, sol.ny - 1 - j)));
            asym = std::max(asym, std::abs(sol.at(i, j) - sol.at(j, i)));
            depth = std::min(depth, sol.at(i, j));
        }
    CHECK(asym < 1e-10);
    // graphs of div(Du/W) = 1/W > 0 with zero boundary dip below it
    CHECK(depth < -1e-3);
    for (const auto v : sol.u) CHECK(v <= 1e-14);
}

TEST_CASE("harmonic fill reproduces affine boundary data exactly") {
    GraphPatch p = empty_patch(0.1, 0.1, 15, 13);
    for (int i = 0; i < p.nx; ++i)
        for (int j = 0; j < p.ny; ++j)
            if (p.on_boundary(i, j)) p.at(i, j) = 2.0 * p.x(i) - 0.5 * p.y(j) + 1.0;
    harmonic_fill(p);
    for (int i = 0; i < p.nx; ++i)
        for (int j = 0; j < p.ny; ++j)
            CHECK(std::abs(p.at(i, j) - (2.0 * p.x(i) - 0.5 * p.y(j) + 1.0)) < 1e-9);
}

TEST_CASE("bad inputs are rejected before iterating") {
    GraphPatch p = empty_patch(0.1, 0.1, 8, 8);
    p.at(0, 3) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(solve_translator_graph(p), NonFiniteBoundary);

    GraphPatch q = empty_patch(0.1, 0.1, 8, 8);
    q.at(3, 3) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(solve_translator_graph(q), BadInput);
}

TEST_CASE("an exhausted iteration cap reports divergence") {
    GraphPatch p = empty_patch(0.2, 0.2, 12, 12);
    for (int i = 0; i < p.nx; ++i)
        for (int j = 0; j < p.ny; ++j)
            if (p.on_boundary(i, j)) p.at(i, j) = std::cos(3.0 * p.x(i)) - p.y(j);
    NewtonOptions opt;
    opt.max_iterations = 1;
    CHECK_THROWS_AS(solve_translator_graph(p, opt), NewtonDiverged);
}

TEST_CASE("wing construction validates its inputs") {
    CHECK_THROWS_AS(make_delta_wing(3.0, {4.0}, 0.1), WidthTooSmall);
    CHECK_THROWS_AS(make_delta_wing(1.2 * kPi, {}, 0.1), BadInput);
    CHECK_THROWS_AS(make_delta_wing(1.2 * kPi, {4.0, 3.0}, 0.1), BadInput);
    CHECK_THROWS_AS(make_delta_wing(1.2 * kPi, {4.0}, kPi), BadInput);
}

TEST_CASE("capped wing over a narrow strip") {
    const double b = 1.2 * kPi;
    const SolverReport rep = make_delta_wing(b, {4.0, 8.0, 16.0}, b / 32);
    REQUIRE(rep.stages.size() == 3);
    for (const auto& st : rep.stages) CHECK(st.final_residual < 1e-11);
    // continuation settles: each cap raise moves the recentered interior less
    CHECK(rep.stages[2].interior_difference < rep.stages[1].interior_difference);
    CHECK(rep.width == doctest::Approx(b).epsilon(1e-12));
    CHECK(rep.tilt == doctest::Approx(std::tan(std::acos(kPi / b))).epsilon(1e-12));

    const GraphPatch& p = rep.patch;
    // strip walls carry the cap value exactly
    for (int i = 0; i < p.nx; ++i) {
        CHECK(p.at(i, 0) == 16.0);
        CHECK(p.at(i, p.ny - 1) == 16.0);
    }
    // interior dips well below the cap and stays positive at the waist
    CHECK(p.at(p.nx / 2, p.ny / 2) < 15.0);
    CHECK(p.at(p.nx / 2, p.ny / 2) > 0.0);

    const SlabReport slab = classify_slab(rep.mesh);
    CHECK(slab.kind == SlabKind::strip);
    CHECK(std::abs(slab.width - b) < b / 32 + 1e-9);
}
