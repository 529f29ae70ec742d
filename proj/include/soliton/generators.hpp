#pragma once

#include <vector>

#include "soliton/mesh.hpp"

namespace soliton {

// All generators return meshes oriented so the translator residual
// H + ⟨ν,e₃⟩ vanishes where the surface is a translator: graphs carry the
// downward normal. Metadata records pitch, truncation height and an
// admissible quadratic area-growth constant for Gaussian tail bounds.

// {x₁ = 0} ∩ {|x₂| ≤ extent, |x₃| ≤ extent}, normal −e₁.
SurfaceMesh make_vertical_plane(double extent, double h);

// Graph x₃ = −log cos(x₁ + π/2 − shift) over the strip
// −π + shift < x₁ < shift, |x₂| ≤ extent, truncated at x₃ = cap. The apex
// line sits at x₁ = shift − π/2 (shift = 0 reproduces the strip (−π, 0)).
// Profile vertices are spaced uniformly in arclength; x₂ uniformly with an
// independent pitch.
SurfaceMesh make_grim_reaper(double extent, double cap, double h, double shift = 0.0,
                             double h_x2 = 0.0);

// Graph u = sec²θ·(−log cos(x₁ cosθ)) + x₂·tanθ over |x₁| < (π/2)/cosθ,
// |x₂| ≤ extent, profile truncated at height cap (before the x₂·tanθ term).
SurfaceMesh make_tilted_grim_reaper(double theta, double extent, double cap, double h);

// Radial profile of the rotationally symmetric translator:
// u''/(1+u'²) + u'/r = 1, u(0) = u'(0) = 0. Solved by a series start and
// fixed-step RK4 with step-doubling verification.
struct BowlProfile {
    std::vector<double> r, u, du;
    double r_max = 0.0;
    double u_at(double radius) const;   // cubic Hermite between samples
    double du_at(double radius) const;
    double radius_for_height(double height) const;
    double arclength_to(double radius) const;
};
BowlProfile solve_bowl_profile(double r_max, double step = 5e-4);

/// Surface of revolution of the bowl profile: pole fan, rings graded by
// profile arclength, azimuthal counts doubling dyadically so every band is
// regular.
SurfaceMesh make_bowl(double r_max, double h);
SurfaceMesh make_bowl_to_height(double cap, double h);
// Same surface as a graph patch over [−extent, extent]², single-diagonal
// grid. Fully structured, so discrete operators see clean h² refinement on it.
SurfaceMesh make_bowl_graph(double extent, double h);

// Vertical round cylinder of the given radius about the x₃-axis, centered at
// the origin, outward normal. Not a translator; kept as a control surface.
SurfaceMesh make_round_cylinder(double radius, double height, double h);

// Graph fixtures over [−extent, extent]² on a union-jack grid with the
// origin at a vertex: quadratic x₁²−x₂² and monkey x₁³−3x₁x₂². Controls for
// the nodal-set and curvature machinery; not translators.
enum class SaddleKind { quadratic, monkey };
SurfaceMesh make_saddle(SaddleKind kind, double extent, double h);

// Graph mesh over a rectangular grid (single-diagonal triangulation),
// downward orientation. Shared by generators and the PDE patch export.
SurfaceMesh graph_mesh(const std::vector<double>& xs, const std::vector<double>& ys,
                       const std::vector<double>& heights /* row-major [i*ny+j] */,
                       bool union_jack = false, bool downward = true);

} // namespace soliton
