#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "soliton/mesh.hpp"
#include "soliton/nodal.hpp"

namespace soliton {

// Horizontal footprint of the surface: vertex (x1, x2) pairs, exact
// duplicates removed.
std::vector<Eigen::Vector2d> project_x1x2(const SurfaceMesh& mesh);

// Convex hull, counterclockwise, no three collinear output points.
// Throws TooFewPoints below 3 input points; collinear input returns the
// two extreme points.
std::vector<Eigen::Vector2d> convex_hull(std::vector<Eigen::Vector2d> pts);

// Minimal width over all directions (rotating calipers). direction receives
// the unit normal of the two supporting lines realizing the minimum.
double hull_min_width(const std::vector<Eigen::Vector2d>& hull, Eigen::Vector2d* direction);

enum class SlabKind {
    line,        // footprint is one line up to tol
    strip,       // both walls of the minimal slab are filled by the surface
    half_plane,  // only one wall is filled
    plane        // neither wall is filled: the footprint just ends there
};

struct SlabReport {
    SlabKind kind = SlabKind::plane;
    Eigen::Vector2d direction{1, 0};  // unit normal of the candidate walls
    double lo = 0, hi = 0;            // support values along direction
    double width = 0;                 // hi - lo
    double spread_lo = 0, spread_hi = 0;  // extent of near-wall samples along the walls
    double cross_spread = 0;              // extent of all samples along the walls
    double tol = 0;
};

// Classifies the footprint. tol <= 0 uses 3 * grid_h from the metadata. A
// wall counts as filled when the samples within tol of it spread over at
// least 30% of the footprint's extent along the wall.
SlabReport classify_slab(const SurfaceMesh& mesh, double tol = 0.0);

// Vertical gap profile: bins vertices by height and records, per bin, the
// closest approach to each wall of the slab. Bins with no samples are
// dropped.
struct ApproachProfile {
    std::vector<double> heights;
    std::vector<double> gap_lo, gap_hi;
};
ApproachProfile approach_profile(const SurfaceMesh& mesh, const SlabReport& slab, int bins);

// Least-squares decay rate of log(gap) against height. Requires a strictly
// decreasing subsequence covering at least half the samples (and at least 3),
// otherwise throws NoMonotoneSubsequence.
double approach_rate(const std::vector<double>& heights, const std::vector<double>& gaps);

// Ordered vertex loop of the boundary component through start. Throws
// NotOnBoundary when start has no boundary edge.
std::vector<std::int32_t> trace_boundary_loop(const SurfaceMesh& mesh, std::int32_t start);

// Height growth near a wall point: per radius, the max of x₃ over vertices
// whose footprint lies within that distance of q. q must sit within slab.tol
// of one of the walls (NotOnBoundary otherwise). saturates_cap reports
// whether the largest sup reaches the metadata height cap, i.e. the growth
// was limited only by the truncation.
struct GrowthProfile {
    std::vector<double> radii;       // sorted ascending
    std::vector<double> sup_x3;      // -inf where the ball catches no vertex
    std::vector<std::int32_t> samples;
    double cap = 0;
    bool saturates_cap = false;
};
GrowthProfile boundary_growth_profile(const SurfaceMesh& mesh, const SlabReport& slab,
                                      const Eigen::Vector2d& q, const std::vector<double>& radii);

// Two approach sequences along a vertical plane section: per wall, section
// points with height strictly increasing and wall distance strictly
// decreasing (a longest such subsequence, which must cover at least half of
// that wall's section points), plus the least-squares decay rate of
// log(distance) against height. Throws EmptySection / NoMonotoneSubsequence.
struct ApproachSequences {
    std::vector<double> x3_lo, dist_lo;
    std::vector<double> x3_hi, dist_hi;
    double rate_lo = 0, rate_hi = 0;
};
ApproachSequences boundary_approach_sequences(const SurfaceMesh& mesh, const SlabReport& slab,
                                              const PlaneSpec& plane);

} // namespace soliton
