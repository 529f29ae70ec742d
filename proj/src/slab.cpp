#include "soliton/slab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include "soliton/errors.hpp"

namespace soliton {

std::vector<Eigen::Vector2d> project_x1x2(const SurfaceMesh& mesh) {
    std::vector<Eigen::Vector2d> pts;
    pts.reserve(mesh.n_vertices());
    for (const auto& v : mesh.vertices) pts.emplace_back(v.x(), v.y());
    std::sort(pts.begin(), pts.end(), [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
                              return a.x() == b.x() && a.y() == b.y();
                          }),
              pts.end());
    return pts;
}

namespace {

double cross2(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

// indices of one longest strictly decreasing subsequence
std::vector<std::size_t> decreasing_subsequence(const std::vector<double>& v) {
    const std::size_t n = v.size();
    if (n == 0) return {};
    std::vector<int> len(n, 1), prev(n, -1);
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j)
            if (v[i] < v[j] && len[j] + 1 > len[i]) {
                len[i] = len[j] + 1;
                prev[i] = static_cast<int>(j);
            }
        if (len[i] > len[best]) best = i;
    }
    std::vector<std::size_t> idx;
    for (int k = static_cast<int>(best); k >= 0; k = prev[k]) idx.push_back(k);
    std::reverse(idx.begin(), idx.end());
    return idx;
}

} // namespace

std::vector<Eigen::Vector2d> convex_hull(std::vector<Eigen::Vector2d> pts) {
    if (pts.size() < 3) throw TooFewPoints("convex hull needs at least 3 points");
    std::sort(pts.begin(), pts.end(), [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
                              return a.x() == b.x() && a.y() == b.y();
                          }),
              pts.end());
    if (pts.size() == 1) return pts;
    std::vector<Eigen::Vector2d> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {  // lower chain
        while (k >= 2 && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = pts.size() - 1; i-- > 0;) {  // upper chain
        while (k >= lower && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);  // last point repeats the first
    return hull;
}

double hull_min_width(const std::vector<Eigen::Vector2d>& hull, Eigen::Vector2d* direction) {
    if (hull.empty()) throw TooFewPoints("width of an empty hull");
    if (hull.size() == 1) {
        if (direction) *direction = {1, 0};
        return 0.0;
    }
    if (hull.size() == 2) {
        Eigen::Vector2d e = hull[1] - hull[0];
        const double n = e.norm();
        if (direction) *direction = n > 0 ? Eigen::Vector2d(-e.y() / n, e.x() / n) : Eigen::Vector2d(1, 0);
        return 0.0;
    }
    double best = std::numeric_limits<double>::infinity();
    Eigen::Vector2d bestdir(1, 0);
    const std::size_t n = hull.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Vector2d e = hull[(i + 1) % n] - hull[i];
        const double len = e.norm();
        if (len == 0) continue;
        const Eigen::Vector2d nrm(-e.y() / len, e.x() / len);
        double far = 0;
        for (const auto& p : hull) far = std::max(far, std::abs(nrm.dot(p - hull[i])));
        if (far < best) {
            best = far;
            bestdir = nrm;
        }
    }
    if (direction) *direction = bestdir;
    return best;
}

SlabReport classify_slab(const SurfaceMesh& mesh, double tol) {
    const auto pts = project_x1x2(mesh);
    if (pts.size() < 3) throw TooFewPoints("slab classification needs at least 3 footprint points");
    const auto hull = convex_hull(pts);

    SlabReport r;
    r.width = hull_min_width(hull, &r.direction);
    if (tol > 0)
        r.tol = tol;
    else if (mesh.meta.grid_h > 0)
        r.tol = 3.0 * mesh.meta.grid_h;
    else
        r.tol = 1e-9 * std::max(1.0, r.width);

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    double elo = lo, ehi = -lo;
    const Eigen::Vector2d perp(-r.direction.y(), r.direction.x());
    for (const auto& p : pts) {
        const double d = r.direction.dot(p);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
        const double s = perp.dot(p);
        elo = std::min(elo, s);
        ehi = std::max(ehi, s);
    }
    r.lo = lo;
    r.hi = hi;
    r.width = hi - lo;
    r.cross_spread = ehi - elo;

    if (r.width < r.tol) {
        r.kind = SlabKind::line;
        r.spread_lo = r.spread_hi = r.cross_spread;
        return r;
    }

    double lo0 = std::numeric_limits<double>::infinity(), lo1 = -lo0;
    double hi0 = lo0, hi1 = -lo0;
    for (const auto& p : pts) {
        const double d = r.direction.dot(p);
        const double s = perp.dot(p);
        if (d <= lo + r.tol) {
            lo0 = std::min(lo0, s);
            lo1 = std::max(lo1, s);
        }
        if (d >= hi - r.tol) {
            hi0 = std::min(hi0, s);
            hi1 = std::max(hi1, s);
        }
    }
    r.spread_lo = lo1 >= lo0 ? lo1 - lo0 : 0.0;
    r.spread_hi = hi1 >= hi0 ? hi1 - hi0 : 0.0;
    const double need = 0.3 * r.cross_spread;
    const bool filled_lo = r.spread_lo >= need;
    const bool filled_hi = r.spread_hi >= need;
    if (filled_lo && filled_hi)
        r.kind = SlabKind::strip;
    else if (filled_lo || filled_hi)
        r.kind = SlabKind::half_plane;
    else
        r.kind = SlabKind::plane;
    return r;
}

ApproachProfile approach_profile(const SurfaceMesh& mesh, const SlabReport& slab, int bins) {
    if (bins < 1) throw BadInput("approach profile needs at least one bin");
    double zlo = std::numeric_limits<double>::infinity(), zhi = -zlo;
    for (const auto& v : mesh.vertices) {
        zlo = std::min(zlo, v.z());
        zhi = std::max(zhi, v.z());
    }
    if (!(zhi > zlo)) throw BadInput("approach profile needs vertical extent");
    const double dz = (zhi - zlo) / bins;
    std::vector<double> glo(bins, std::numeric_limits<double>::infinity());
    std::vector<double> ghi(bins, std::numeric_limits<double>::infinity());
    for (const auto& v : mesh.vertices) {
        int b = static_cast<int>((v.z() - zlo) / dz);
        b = std::clamp(b, 0, bins - 1);
        const double d = slab.direction.dot(Eigen::Vector2d(v.x(), v.y()));
        glo[b] = std::min(glo[b], d - slab.lo);
        ghi[b] = std::min(ghi[b], slab.hi - d);
    }
    ApproachProfile p;
    for (int b = 0; b < bins; ++b) {
        if (!std::isfinite(glo[b])) continue;
        p.heights.push_back(zlo + (b + 0.5) * dz);
        p.gap_lo.push_back(glo[b]);
        p.gap_hi.push_back(ghi[b]);
    }
    return p;
}

double approach_rate(const std::vector<double>& heights, const std::vector<double>& gaps) {
    if (heights.size() != gaps.size()) throw BadInput("approach rate needs matching arrays");
    std::vector<double> z, lg;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        if (gaps[i] > 0) {
            z.push_back(heights[i]);
            lg.push_back(std::log(gaps[i]));
        }
    }
    const std::size_t n = z.size();
    if (n < 3) throw NoMonotoneSubsequence("approach rate needs at least 3 positive gaps");
    // longest strictly decreasing subsequence of the gaps
    std::vector<int> len(n, 1);
    int best = 1;
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (lg[i] < lg[j]) {
                len[i] = std::max(len[i], len[j] + 1);
                best = std::max(best, len[i]);
            }
    if (best < static_cast<int>(std::max<std::size_t>(3, n / 2)))
        throw NoMonotoneSubsequence("gap sequence is not decaying");
    double sz = 0, sl = 0, szz = 0, szl = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sz += z[i];
        sl += lg[i];
        szz += z[i] * z[i];
        szl += z[i] * lg[i];
    }
    const double den = n * szz - sz * sz;
    if (den <= 0) throw NoMonotoneSubsequence("approach rate needs spread heights");
    return -(n * szl - sz * sl) / den;
}

GrowthProfile boundary_growth_profile(const SurfaceMesh& mesh, const SlabReport& slab,
                                      const Eigen::Vector2d& q, const std::vector<double>& radii) {
    if (radii.empty()) throw BadInput("growth profile needs at least one radius");
    const double d = slab.direction.dot(q);
    const double wall_dist = std::min(std::abs(d - slab.lo), std::abs(slab.hi - d));
    if (wall_dist > slab.tol)
        throw NotOnBoundary("query point sits " + std::to_string(wall_dist) +
                            " from the nearest wall, tolerance " + std::to_string(slab.tol));

    GrowthProfile g;
    g.radii = radii;
    std::sort(g.radii.begin(), g.radii.end());
    g.cap = mesh.meta.height_cap;
    g.sup_x3.assign(g.radii.size(), -std::numeric_limits<double>::infinity());
    g.samples.assign(g.radii.size(), 0);
    for (const auto& v : mesh.vertices) {
        const double rr = (Eigen::Vector2d(v.x(), v.y()) - q).norm();
        const auto it = std::lower_bound(g.radii.begin(), g.radii.end(), rr);
        if (it == g.radii.end()) continue;
        const std::size_t k = static_cast<std::size_t>(it - g.radii.begin());
        g.sup_x3[k] = std::max(g.sup_x3[k], v.z());
        ++g.samples[k];
    }
    for (std::size_t k = 1; k < g.radii.size(); ++k) {
        g.sup_x3[k] = std::max(g.sup_x3[k], g.sup_x3[k - 1]);
        g.samples[k] += g.samples[k - 1];
    }
    const double top = g.sup_x3.back();
    g.saturates_cap = std::isfinite(g.cap) && std::isfinite(top) &&
                      top >= g.cap - 1e-6 * std::max(1.0, std::abs(g.cap));
    return g;
}

ApproachSequences boundary_approach_sequences(const SurfaceMesh& mesh, const SlabReport& slab,
                                              const PlaneSpec& plane) {
    const LevelSetResult sec = plane_section(mesh, plane);
    struct Pt {
        double z, dlo, dhi;
    };
    std::vector<Pt> pts;
    pts.reserve(sec.nodes.size());
    for (const auto& p : sec.nodes) {
        const double d = slab.direction.dot(Eigen::Vector2d(p.x(), p.y()));
        pts.push_back({p.z(), d - slab.lo, slab.hi - d});
    }
    std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) { return a.z < b.z; });

    ApproachSequences out;
    const auto tail = [&](bool low, std::vector<double>& xs, std::vector<double>& ds) {
        std::vector<double> z, gap;
        for (const auto& p : pts) {
            const double mine = low ? p.dlo : p.dhi;
            const double other = low ? p.dhi : p.dlo;
            if (mine <= other && mine > 0) {
                z.push_back(p.z);
                gap.push_back(mine);
            }
        }
        if (z.size() < 3)
            throw NoMonotoneSubsequence("fewer than 3 section points near the wall");
        const auto idx = decreasing_subsequence(gap);
        if (idx.size() < std::max<std::size_t>(3, z.size() / 2))
            throw NoMonotoneSubsequence("wall distances along the section do not decay");
        for (const auto i : idx) {
            xs.push_back(z[i]);
            ds.push_back(gap[i]);
        }
        return approach_rate(xs, ds);
    };
    out.rate_lo = tail(true, out.x3_lo, out.dist_lo);
    out.rate_hi = tail(false, out.x3_hi, out.dist_hi);
    return out;
}

std::vector<std::int32_t> trace_boundary_loop(const SurfaceMesh& mesh, std::int32_t start) {
    // boundary half-edges are the directed edges with no opposite
    std::unordered_map<std::uint64_t, int> census;
    const auto key = [](std::int32_t a, std::int32_t b) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
               static_cast<std::uint32_t>(b);
    };
    for (const auto& t : mesh.triangles)
        for (int k = 0; k < 3; ++k) ++census[key(t[k], t[(k + 1) % 3])];
    std::unordered_map<std::int32_t, std::int32_t> next;
    for (const auto& t : mesh.triangles)
        for (int k = 0; k < 3; ++k) {
            const std::int32_t a = t[k], b = t[(k + 1) % 3];
            if (census.find(key(b, a)) == census.end()) next[a] = b;
        }
    if (next.find(start) == next.end())
        throw NotOnBoundary("vertex " + std::to_string(start) + " has no boundary edge");
    std::vector<std::int32_t> loop{start};
    std::int32_t v = start;
    while (true) {
        const auto it = next.find(v);
        if (it == next.end()) throw NonManifoldMesh("boundary walk dead-ends at vertex " + std::to_string(v));
        v = it->second;
        if (v == start) break;
        if (loop.size() > mesh.n_vertices())
            throw NonManifoldMesh("boundary walk does not close");
        loop.push_back(v);
    }
    return loop;
}

} // namespace soliton
