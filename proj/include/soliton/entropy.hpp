#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "soliton/mesh.hpp"

namespace soliton {

struct GaussianCenter {
    Eigen::Vector3d x0{0, 0, 0};
    double t0 = 1.0;
};

struct FResult {
    double value = 0.0;
    // Upper bound on the Gaussian mass of the unmeshed remainder, from the
    // metadata area-growth constant and the distance from x₀ to the nearest
    // boundary vertex. Assumes the remainder lies beyond that distance, which
    // holds for all truncations produced here. Zero for closed meshes.
    double tail_bound = 0.0;
};

// Gaussian area with the three-midedge rule per triangle (exact for
// quadratics): (4πt₀)⁻¹ Σ_T (A_T/3) Σ_k exp(−|m_k−x₀|²/(4t₀)).
// Throws MissingTruncationMetadata when the mesh has a boundary but no
// area-growth constant to bound the tail with.
FResult f_functional(const SurfaceMesh& mesh, const GaussianCenter& c);

// 16-point tensor Gauss rule (collapsed square), used as the dense
// cross-check for the midedge rule. No tail bound.
double f_functional_dense(const SurfaceMesh& mesh, const GaussianCenter& c);

// Precomputed quadrature cloud for many evaluations of the same mesh.
// Triangles wider than the Gaussian scale sqrt(t0) are refined on the fly,
// so sharp centers stay accurate on meshes with locally coarse cells.
class GaussianQuadrature {
public:
    explicit GaussianQuadrature(const SurfaceMesh& mesh);
    FResult value(const GaussianCenter& c) const;
    double boundary_distance(const Eigen::Vector3d& x0) const;

private:
    double refined_triangle(std::size_t t, const Eigen::Vector3d& x0, double inv4t,
                            double split_above) const;

    std::vector<double> px_, py_, pz_, w_;
    std::vector<Eigen::Vector3d> verts_;
    std::vector<std::array<std::int32_t, 3>> tris_;
    std::vector<double> tdiam2_;
    std::vector<Eigen::Vector3d> boundary_;
    double area_growth_c_ = 0.0;
    double grid_h_ = 0.0;
    bool closed_ = false;
};

struct EntropyConfig {
    double t_min = 1e-2;
    double t_max = 1e4;
    int grid_per_axis = 4;    // collapsed to 1 on degenerate bbox axes
    int grid_t = 13;          // log-spaced
    int eval_budget = 2000;   // total F evaluations; must cover the grid
    int refine_budget = 500;  // of which at most this many go to the simplex
    int starts = 5;           // simplex restarts from the best grid points
    std::uint64_t seed = 0;   // jitters the initial simplex steps
};

struct TraceRow {
    Eigen::Vector3d x0;
    double t0;
    double value;
    const char* phase;  // "grid" or "refine"
};

struct EntropyResult {
    double value = 0.0;          // max over every evaluation
    GaussianCenter argmax;
    double tail_bound = 0.0;     // at the argmax
    std::vector<TraceRow> trace;
};

// sup of the Gaussian area over centers and scales: coarse grid over the
// inflated bounding box × log t₀, then Nelder–Mead from the best starts.
// Deterministic for fixed config and seed. Throws SearchBudgetExceeded when
// the coarse grid alone needs more evaluations than eval_budget allows.
EntropyResult entropy(const SurfaceMesh& mesh, const EntropyConfig& cfg = {});

// F_{(0,1)} of (1/τ)·Σ − τ·e₃. Requires metadata height cap ≥ τ² + 6τ so the
// rescaled Gaussian sees the whole support (GeneratorHeightInsufficient
// otherwise). recenter translates the horizontal bounding-box center to 0
// first; the Gaussian area is translation invariant on the limit, and the
// convergence rate depends on the choice, so the flag is recorded by callers.
double blowdown_value(const SurfaceMesh& mesh, double tau, bool recenter = true);

struct HuiskenResult {
    std::vector<double> taus;
    std::vector<double> values;       // F at (y+τe₃, t₀+τ)
    std::vector<double> tail_bounds;
    bool translator_metadata = false; // monotonicity is only a theorem for translators
};
HuiskenResult huisken_check(const SurfaceMesh& mesh, const Eigen::Vector3d& y, double t0,
                            const std::vector<double>& taus);

struct AdditivityResult {
    double lambda_a = 0.0, lambda_b = 0.0, lambda_union = 0.0;
    double defect = 0.0;  // λ(union) − λ(a) − λ(b)
};
// Throws MeshesIntersect when the meshes touch.
AdditivityResult check_additivity(const SurfaceMesh& a, const SurfaceMesh& b,
                                  const EntropyConfig& cfg = {});

// max over centers × radii of Area(Σ ∩ B_R(x)) / R², with the triangle-ball
// overlap computed exactly (plane section of the ball, circle-polygon area).
double area_growth_ratio(const SurfaceMesh& mesh,
                         const std::vector<Eigen::Vector3d>& centers,
                         const std::vector<double>& radii);

// Exact area of triangle ∩ disk, both in the plane; disk centered at the
// origin. Exposed for tests.
double triangle_disk_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                          const Eigen::Vector2d& c, double radius);

} // namespace soliton
