#pragma once

#include <vector>

#include <Eigen/SparseCore>

#include "soliton/mesh.hpp"

namespace soliton {

// Graph values on a uniform rectangular grid. u is row-major in x:
// u[i*ny + j] sits at (x0 + i*hx, y0 + j*hy). The outermost ring of nodes is
// Dirichlet data; everything else is unknown.
struct GraphPatch {
    double x0 = 0, y0 = 0;
    double hx = 0, hy = 0;
    int nx = 0, ny = 0;
    std::vector<double> u;

    double& at(int i, int j) { return u[static_cast<std::size_t>(i) * ny + j]; }
    double at(int i, int j) const { return u[static_cast<std::size_t>(i) * ny + j]; }
    double x(int i) const { return x0 + i * hx; }
    double y(int j) const { return y0 + j * hy; }
    bool on_boundary(int i, int j) const {
        return i == 0 || j == 0 || i == nx - 1 || j == ny - 1;
    }
};

// Nodal residual of div(Du/W) = 1/W, W = sqrt(1+|Du|²), with fluxes at edge
// midpoints (the transverse slope there is the four-point average). Zero at
// boundary nodes.
std::vector<double> translator_residual_field(const GraphPatch& p);

// Analytic Jacobian of the interior residual with respect to the interior
// unknowns, index (i-1)*(ny-2) + (j-1) on both axes.
Eigen::SparseMatrix<double> translator_jacobian(const GraphPatch& p);

struct NewtonOptions {
    int max_iterations = 30;
    int max_backtracks = 30;
    double tolerance = 1e-11;  // max-norm of the nodal residual
};

struct SolveStage {
    double boundary_level = 0;  // continuation parameter (0 for plain solves)
    int newton_iterations = 0;
    double final_residual = 0;      // max-norm
    double interior_difference = 0; // sup |u - previous stage|, recentered
};

// Fills the interior with the harmonic extension of the boundary ring.
void harmonic_fill(GraphPatch& p);

// Damped Newton on the interior unknowns; the boundary ring of `start` is
// the Dirichlet data and its interior is the initial guess. Line search
// backtracks on the residual 2-norm (factor 0.5). Throws NewtonDiverged when
// the search stalls or the iteration cap is hit, NonFiniteBoundary for bad
// data.
GraphPatch solve_translator_graph(const GraphPatch& start, const NewtonOptions& opt = {},
                                  SolveStage* stage = nullptr);

struct SolverReport {
    GraphPatch patch;
    SurfaceMesh mesh;
    std::vector<SolveStage> stages;
    double width = 0;
    double tilt = 0;  // asymptotic wing slope, tan(arccos(pi/b))
};

// Continuation solve for the capped translator graph over the strip
// |x2| < b/2, truncated at |x1| <= half_length (default 0.6b). Boundary
// data at level M is min(M, |x1| tan θ + sec²θ (−log cos(x2 cos θ))),
// cos θ = π/b: constant M along the strip walls, the asymptotic wing profile
// clipped at M on the truncation ends. Each stage warm-starts from the
// previous one; interior_difference tracks the recentered sup-difference
// between consecutive stages. Throws WidthTooSmall for b ≤ π.
SolverReport make_delta_wing(double b, const std::vector<double>& schedule, double h,
                             const NewtonOptions& opt = {}, double half_length = 0);

// The patch as a triangle mesh (union-jack grid, downward orientation).
SurfaceMesh patch_to_mesh(const GraphPatch& p, bool downward = true);

} // namespace soliton
