#include "soliton/entropy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "soliton/errors.hpp"
#include "soliton/parallel.hpp"

namespace soliton {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kFourPi = 4.0 * kPi;

// exp(-e) beyond this sits under 1e-20 of the peak; skipping it keeps
// sharp-Gaussian sweeps cheap without moving any reported digit.
constexpr double kExpCutoff = 46.0;

// The midedge rule is trusted only on triangles with diam^2 <= ratio * t0;
// wider ones are subdivided until their pieces fit under the Gaussian.
constexpr double kSubdivideRatio = 0.25;
constexpr int kMaxSubdivisionDepth = 24;

} // namespace

GaussianQuadrature::GaussianQuadrature(const SurfaceMesh& mesh) {
    const auto& V = mesh.vertices;
    const auto& T = mesh.triangles;
    const std::size_t nt = T.size();
    px_.resize(3 * nt);
    py_.resize(3 * nt);
    pz_.resize(3 * nt);
    w_.resize(3 * nt);
    tdiam2_.resize(nt);
    parallel_chunks(nt, 8192, [&](std::size_t b, std::size_t e, std::size_t) {
        for (std::size_t t = b; t < e; ++t) {
            const Eigen::Vector3d& a = V[T[t][0]];
            const Eigen::Vector3d& bb = V[T[t][1]];
            const Eigen::Vector3d& c = V[T[t][2]];
            const double third = (bb - a).cross(c - a).norm() / 6.0;
            const Eigen::Vector3d m[3] = {0.5 * (a + bb), 0.5 * (bb + c), 0.5 * (c + a)};
            for (int k = 0; k < 3; ++k) {
                px_[3 * t + k] = m[k].x();
                py_[3 * t + k] = m[k].y();
                pz_[3 * t + k] = m[k].z();
                w_[3 * t + k] = third;
            }
            tdiam2_[t] = std::max({(bb - a).squaredNorm(), (c - bb).squaredNorm(),
                                   (a - c).squaredNorm()});
        }
    });
    verts_ = V;
    tris_ = T;

    // Boundary = undirected edges seen by exactly one triangle.
    std::unordered_map<std::uint64_t, int> edge_count;
    edge_count.reserve(3 * nt);
    for (const auto& tri : T) {
        for (int k = 0; k < 3; ++k) {
            const std::uint32_t i = static_cast<std::uint32_t>(tri[k]);
            const std::uint32_t j = static_cast<std::uint32_t>(tri[(k + 1) % 3]);
            const std::uint64_t key = (static_cast<std::uint64_t>(std::min(i, j)) << 32) | std::max(i, j);
            ++edge_count[key];
        }
    }
    std::vector<std::uint8_t> on_boundary(V.size(), 0);
    for (const auto& [key, count] : edge_count) {
        if (count != 1) continue;
        on_boundary[key >> 32] = 1;
        on_boundary[key & 0xffffffffu] = 1;
    }
    for (std::size_t i = 0; i < V.size(); ++i)
        if (on_boundary[i]) boundary_.push_back(V[i]);

    area_growth_c_ = mesh.meta.area_growth_c;
    grid_h_ = mesh.meta.grid_h;
    closed_ = boundary_.empty();
}

// Midpoint 4-way subdivision driven by an explicit stack. Every child edge is
// half of some parent edge, so diam^2 drops by exactly 4 per level and the
// loop terminates without a depth check; the cap is a guard against denormal
// t0. Pieces whose whole extent lies past the exp cutoff are dropped early.
double GaussianQuadrature::refined_triangle(std::size_t t, const Eigen::Vector3d& x0,
                                            double inv4t, double split_above) const {
    struct Node {
        Eigen::Vector3d a, b, c;
        double third;  // area / 3, the weight of each midedge point
        double diam2;
        int depth;
    };
    const Eigen::Vector3d& a0 = verts_[tris_[t][0]];
    const Eigen::Vector3d& b0 = verts_[tris_[t][1]];
    const Eigen::Vector3d& c0 = verts_[tris_[t][2]];
    const double third0 = (b0 - a0).cross(c0 - a0).norm() / 6.0;
    if (third0 == 0.0) return 0.0;

    std::vector<Node> stack;
    stack.reserve(64);
    stack.push_back({a0, b0, c0, third0, tdiam2_[t], 0});
    double acc = 0.0;
    while (!stack.empty()) {
        const Node n = stack.back();
        stack.pop_back();
        const Eigen::Vector3d cen = (n.a + n.b + n.c) / 3.0;
        const double rmax = std::sqrt(std::max({(n.a - cen).squaredNorm(),
                                                (n.b - cen).squaredNorm(),
                                                (n.c - cen).squaredNorm()}));
        const double lo = (cen - x0).norm() - rmax;
        if (lo > 0.0 && lo * lo * inv4t > kExpCutoff) continue;
        if (n.diam2 <= split_above || n.depth >= kMaxSubdivisionDepth) {
            const Eigen::Vector3d m[3] = {0.5 * (n.a + n.b), 0.5 * (n.b + n.c),
                                          0.5 * (n.c + n.a)};
            for (const auto& p : m) {
                const double ex = (p - x0).squaredNorm() * inv4t;
                if (ex > kExpCutoff) continue;
                acc += n.third * std::exp(-ex);
            }
            continue;
        }
        const Eigen::Vector3d ab = 0.5 * (n.a + n.b);
        const Eigen::Vector3d bc = 0.5 * (n.b + n.c);
        const Eigen::Vector3d ca = 0.5 * (n.c + n.a);
        const double ct = 0.25 * n.third;
        const double cd = 0.25 * n.diam2;
        const int cdep = n.depth + 1;
        stack.push_back({n.a, ab, ca, ct, cd, cdep});
        stack.push_back({ab, n.b, bc, ct, cd, cdep});
        stack.push_back({ca, bc, n.c, ct, cd, cdep});
        stack.push_back({ab, bc, ca, ct, cd, cdep});
    }
    return acc;
}

double GaussianQuadrature::boundary_distance(const Eigen::Vector3d& x0) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& v : boundary_) best = std::min(best, (v - x0).norm());
    return best;
}

FResult GaussianQuadrature::value(const GaussianCenter& c) const {
    if (!(c.t0 > 0.0) || !c.x0.allFinite())
        throw BadInput("gaussian center needs t0 > 0 and finite x0");
    const double inv4t = 1.0 / (4.0 * c.t0);
    const double x = c.x0.x(), y = c.x0.y(), z = c.x0.z();
    const double split_above = kSubdivideRatio * c.t0;
    const double s = parallel_sum(tris_.size(), 8192, [&](std::size_t b, std::size_t e) {
        double acc = 0.0;
        for (std::size_t t = b; t < e; ++t) {
            if (tdiam2_[t] > split_above) {
                acc += refined_triangle(t, c.x0, inv4t, split_above);
                continue;
            }
            for (std::size_t i = 3 * t; i < 3 * t + 3; ++i) {
                const double dx = px_[i] - x;
                const double dy = py_[i] - y;
                const double dz = pz_[i] - z;
                const double ex = (dx * dx + dy * dy + dz * dz) * inv4t;
                if (ex > kExpCutoff) continue;
                acc += w_[i] * std::exp(-ex);
            }
        }
        return acc;
    });
    FResult r;
    r.value = s / (kFourPi * c.t0);
    if (closed_) return r;
    if (area_growth_c_ <= 0.0)
        throw MissingTruncationMetadata(
            "mesh has a boundary but no area-growth constant to bound the Gaussian tail");
    // Mass beyond the meshed truncation: with Area(Σ∩B_ρ) ≤ c·ρ² and the
    // remainder at distance ≥ ρ₀ from x₀, integration by parts in ρ gives
    // tail ≤ (c/π)(1+2w₀)e^{-w₀}, w₀ = ρ₀²/(4t₀). Half a pitch is knocked
    // off the boundary-vertex distance to cover midedge points of boundary
    // triangles.
    const double rho = std::max(0.0, boundary_distance(c.x0) - 0.5 * grid_h_);
    const double w0 = rho * rho * inv4t;
    r.tail_bound = (area_growth_c_ / kPi) * (1.0 + 2.0 * w0) * std::exp(-w0);
    return r;
}

FResult f_functional(const SurfaceMesh& mesh, const GaussianCenter& c) {
    return GaussianQuadrature(mesh).value(c);
}

double f_functional_dense(const SurfaceMesh& mesh, const GaussianCenter& c) {
    if (!(c.t0 > 0.0) || !c.x0.allFinite())
        throw BadInput("gaussian center needs t0 > 0 and finite x0");
    // 4-point Gauss-Legendre on [0,1], tensored over the collapsed square
    // (u, uv) with Jacobian 2·area·u.
    static const double gn[4] = {0.5 - 0.8611363115940526 / 2, 0.5 - 0.3399810435848563 / 2,
                                 0.5 + 0.3399810435848563 / 2, 0.5 + 0.8611363115940526 / 2};
    static const double gw[4] = {0.3478548451374538 / 2, 0.6521451548625461 / 2,
                                 0.6521451548625461 / 2, 0.3478548451374538 / 2};
    const double inv4t = 1.0 / (4.0 * c.t0);
    const double s = parallel_sum(mesh.n_triangles(), 1024, [&](std::size_t b, std::size_t e) {
        double acc = 0.0;
        for (std::size_t t = b; t < e; ++t) {
            const Eigen::Vector3d& A = mesh.vertices[mesh.triangles[t][0]];
            const Eigen::Vector3d& B = mesh.vertices[mesh.triangles[t][1]];
            const Eigen::Vector3d& C = mesh.vertices[mesh.triangles[t][2]];
            const double twice_area = (B - A).cross(C - A).norm();
            if (twice_area == 0.0) continue;
            for (int i = 0; i < 4; ++i) {
                const Eigen::Vector3d row = A + gn[i] * (B - A);
                const Eigen::Vector3d dir = gn[i] * (C - B);
                for (int j = 0; j < 4; ++j) {
                    const Eigen::Vector3d P = row + gn[j] * dir;
                    const double ex = (P - c.x0).squaredNorm() * inv4t;
                    acc += gw[i] * gw[j] * gn[i] * twice_area * std::exp(-ex);
                }
            }
        }
        return acc;
    });
    return s / (kFourPi * c.t0);
}

EntropyResult entropy(const SurfaceMesh& mesh, const EntropyConfig& cfg) {
    if (mesh.n_triangles() == 0) throw BadInput("entropy of an empty mesh");
    if (!(cfg.t_min > 0.0) || !(cfg.t_max >= cfg.t_min))
        throw BadInput("entropy needs 0 < t_min <= t_max");
    const GaussianQuadrature quad(mesh);

    const Eigen::AlignedBox3d box = mesh.bounding_box();
    const Eigen::Vector3d center = box.center();
    const Eigen::Vector3d half = 0.6 * box.sizes();  // box inflated 20%
    const double diag = std::max(box.sizes().norm(), 1e-12);

    std::array<std::vector<double>, 3> axes;
    std::array<double, 3> spacing{};
    for (int a = 0; a < 3; ++a) {
        int n = std::max(1, cfg.grid_per_axis);
        if (half[a] < 1e-9 * diag) n = 1;
        if (n == 1) {
            axes[a] = {center[a]};
            spacing[a] = 0.02 * diag;
            continue;
        }
        spacing[a] = 2.0 * half[a] / (n - 1);
        for (int i = 0; i < n; ++i) axes[a].push_back(center[a] - half[a] + spacing[a] * i);
    }
    std::vector<double> ts;
    const int nt = std::max(1, cfg.grid_t);
    const double l0 = std::log(cfg.t_min), l1 = std::log(cfg.t_max);
    if (nt == 1) {
        ts.push_back(std::exp(0.5 * (l0 + l1)));
    } else {
        for (int i = 0; i < nt; ++i) ts.push_back(std::exp(l0 + (l1 - l0) * i / (nt - 1)));
    }
    const double lstep = nt > 1 ? (l1 - l0) / (nt - 1) : 1.0;

    const std::size_t grid_evals = axes[0].size() * axes[1].size() * axes[2].size() * ts.size();
    if (cfg.eval_budget < 0 || grid_evals > static_cast<std::size_t>(cfg.eval_budget))
        throw SearchBudgetExceeded("coarse grid needs " + std::to_string(grid_evals) +
                                   " evaluations, budget is " + std::to_string(cfg.eval_budget));

    EntropyResult out;
    out.trace.reserve(static_cast<std::size_t>(cfg.eval_budget));
    double best_tail = 0.0;
    const auto record = [&](const GaussianCenter& c, const FResult& f, const char* phase) {
        out.trace.push_back({c.x0, c.t0, f.value, phase});
        if (f.value > out.value) {
            out.value = f.value;
            out.argmax = c;
            best_tail = f.tail_bound;
        }
    };

    struct Cand {
        double value;
        Eigen::Vector4d p;  // (x, y, z, log t0)
    };
    std::vector<Cand> cands;
    cands.reserve(grid_evals);
    for (double gx : axes[0])
        for (double gy : axes[1])
            for (double gz : axes[2])
                for (double t : ts) {
                    const GaussianCenter c{{gx, gy, gz}, t};
                    const FResult f = quad.value(c);
                    record(c, f, "grid");
                    cands.push_back({f.value, {gx, gy, gz, std::log(t)}});
                }

    std::sort(cands.begin(), cands.end(),
              [](const Cand& a, const Cand& b) { return a.value > b.value; });

    const int nstarts = std::min<int>(std::max(1, cfg.starts), static_cast<int>(cands.size()));
    const int remaining = std::min(cfg.eval_budget - static_cast<int>(grid_evals),
                                   std::max(0, cfg.refine_budget));
    const int per_start = nstarts > 0 ? remaining / nstarts : 0;
    const double lmin = l0 - 2.0, lmax = l1 + 2.0;

    // Nelder-Mead on (x0, log t0), budgeted per start. Every evaluation feeds
    // the global best, so a wandering simplex can never lose ground.
    const auto refine = [&](const Eigen::Vector4d& p0, int budget, std::uint64_t seed) {
        if (budget < 6) return;
        int used = 0;
        const auto fval = [&](Eigen::Vector4d p) {
            p[3] = std::clamp(p[3], lmin, lmax);
            const GaussianCenter c{{p[0], p[1], p[2]}, std::exp(p[3])};
            const FResult f = quad.value(c);
            record(c, f, "refine");
            ++used;
            return -f.value;
        };
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> jit(0.8, 1.2);
        Eigen::Vector4d step;
        for (int a = 0; a < 3; ++a) step[a] = 0.35 * spacing[a] * jit(rng);
        step[3] = 0.35 * lstep * jit(rng);

        std::array<Eigen::Vector4d, 5> X;
        std::array<double, 5> F;
        X[0] = p0;
        F[0] = fval(X[0]);
        for (int k = 1; k < 5; ++k) {
            X[k] = p0;
            X[k][k - 1] += step[k - 1];
            F[k] = fval(X[k]);
        }
        const auto order = [&] {
            for (int i = 1; i < 5; ++i)
                for (int j = i; j > 0 && F[j] < F[j - 1]; --j) {
                    std::swap(F[j], F[j - 1]);
                    std::swap(X[j], X[j - 1]);
                }
        };
        order();
        while (used < budget) {
            if (F[4] - F[0] < 1e-12 * (std::abs(F[0]) + 1e-12)) break;
            const Eigen::Vector4d cen = 0.25 * (X[0] + X[1] + X[2] + X[3]);
            const Eigen::Vector4d xr = cen + (cen - X[4]);
            const double fr = fval(xr);
            if (fr < F[0]) {
                if (used < budget) {
                    const Eigen::Vector4d xe = cen + 2.0 * (cen - X[4]);
                    const double fe = fval(xe);
                    if (fe < fr) {
                        X[4] = xe;
                        F[4] = fe;
                    } else {
                        X[4] = xr;
                        F[4] = fr;
                    }
                } else {
                    X[4] = xr;
                    F[4] = fr;
                }
            } else if (fr < F[3]) {
                X[4] = xr;
                F[4] = fr;
            } else {
                if (used >= budget) break;
                const bool outside = fr < F[4];
                const Eigen::Vector4d xc =
                    outside ? Eigen::Vector4d(cen + 0.5 * (xr - cen))
                            : Eigen::Vector4d(cen - 0.5 * (cen - X[4]));
                const double fc = fval(xc);
                if (fc < (outside ? fr : F[4])) {
                    X[4] = xc;
                    F[4] = fc;
                } else {
                    for (int k = 1; k < 5 && used < budget; ++k) {
                        X[k] = X[0] + 0.5 * (X[k] - X[0]);
                        F[k] = fval(X[k]);
                    }
                }
            }
            order();
        }
    };

    for (int s = 0; s < nstarts; ++s)
        refine(cands[s].p, per_start, cfg.seed + 0x9e3779b97f4a7c15ull * (s + 1));

    out.tail_bound = best_tail;
    return out;
}

double blowdown_value(const SurfaceMesh& mesh, double tau, bool recenter) {
    if (!(tau > 0.0)) throw BadInput("blow-down needs tau > 0");
    const double need = tau * tau + 6.0 * tau;
    if (mesh.meta.height_cap < need)
        throw GeneratorHeightInsufficient("blow-down at tau=" + std::to_string(tau) +
                                          " needs height cap >= " + std::to_string(need) +
                                          ", mesh stops at " + std::to_string(mesh.meta.height_cap));
    SurfaceMesh m = mesh;
    Eigen::Vector3d shift = Eigen::Vector3d::Zero();
    if (recenter) {
        shift = m.bounding_box().center();
        shift.z() = 0.0;
    }
    const double s = 1.0 / tau;
    for (auto& v : m.vertices) v = s * (v - shift) - Eigen::Vector3d(0.0, 0.0, tau);
    m.meta.grid_h *= s;
    if (std::isfinite(m.meta.height_cap)) m.meta.height_cap *= s;
    // area_growth_c is scale invariant for tau >= 1 and conservative below.
    return f_functional(m, {{0.0, 0.0, 0.0}, 1.0}).value;
}

HuiskenResult huisken_check(const SurfaceMesh& mesh, const Eigen::Vector3d& y, double t0,
                            const std::vector<double>& taus) {
    if (!(t0 > 0.0)) throw BadInput("huisken check needs t0 > 0");
    const GaussianQuadrature quad(mesh);
    HuiskenResult r;
    r.translator_metadata = mesh.meta.is_translator;
    for (double tau : taus) {
        if (tau < 0.0) throw BadInput("huisken offsets must be nonnegative");
        const FResult f = quad.value({y + tau * Eigen::Vector3d::UnitZ(), t0 + tau});
        r.taus.push_back(tau);
        r.values.push_back(f.value);
        r.tail_bounds.push_back(f.tail_bound);
    }
    return r;
}

namespace {

double orient2d(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
    return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

bool on_segment_2d(const Eigen::Vector2d& p, const Eigen::Vector2d& q, const Eigen::Vector2d& r,
                   double eps) {
    return r.x() >= std::min(p.x(), q.x()) - eps && r.x() <= std::max(p.x(), q.x()) + eps &&
           r.y() >= std::min(p.y(), q.y()) - eps && r.y() <= std::max(p.y(), q.y()) + eps;
}

bool seg_seg_2d(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c,
                const Eigen::Vector2d& d, double eps) {
    double d1 = orient2d(c, d, a);
    double d2 = orient2d(c, d, b);
    double d3 = orient2d(a, b, c);
    double d4 = orient2d(a, b, d);
    if (std::abs(d1) < eps) d1 = 0;
    if (std::abs(d2) < eps) d2 = 0;
    if (std::abs(d3) < eps) d3 = 0;
    if (std::abs(d4) < eps) d4 = 0;
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    const double leps = std::sqrt(eps);
    if (d1 == 0 && on_segment_2d(c, d, a, leps)) return true;
    if (d2 == 0 && on_segment_2d(c, d, b, leps)) return true;
    if (d3 == 0 && on_segment_2d(a, b, c, leps)) return true;
    if (d4 == 0 && on_segment_2d(a, b, d, leps)) return true;
    return false;
}

bool point_in_tri_2d(const Eigen::Vector2d& p, const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                     const Eigen::Vector2d& c, double eps) {
    const double d1 = orient2d(a, b, p);
    const double d2 = orient2d(b, c, p);
    const double d3 = orient2d(c, a, p);
    const bool has_neg = d1 < -eps || d2 < -eps || d3 < -eps;
    const bool has_pos = d1 > eps || d2 > eps || d3 > eps;
    return !(has_neg && has_pos);
}

bool coplanar_tri_tri(const Eigen::Vector3d& n, const Eigen::Vector3d* v, const Eigen::Vector3d* u,
                      double scale) {
    int drop = 0;
    Eigen::Vector3d an = n.cwiseAbs();
    if (an.y() > an.x()) drop = 1;
    if (an.z() > an[drop]) drop = 2;
    const int i0 = (drop + 1) % 3, i1 = (drop + 2) % 3;
    Eigen::Vector2d p[3], q[3];
    for (int k = 0; k < 3; ++k) {
        p[k] = {v[k][i0], v[k][i1]};
        q[k] = {u[k][i0], u[k][i1]};
    }
    const double eps = 1e-12 * scale * scale;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (seg_seg_2d(p[i], p[(i + 1) % 3], q[j], q[(j + 1) % 3], eps)) return true;
    if (point_in_tri_2d(p[0], q[0], q[1], q[2], eps)) return true;
    if (point_in_tri_2d(q[0], p[0], p[1], p[2], eps)) return true;
    return false;
}

void interval_ends(double pa, double pb, double pc, double da, double db, double dc, double& t0,
                   double& t1) {
    t0 = pa + (pb - pa) * da / (da - db);
    t1 = pa + (pc - pa) * da / (da - dc);
}

// Projected interval of {d = 0} inside the triangle; false when all d vanish.
bool compute_interval(double p0, double p1, double p2, double d0, double d1, double d2, double& t0,
                      double& t1) {
    if (d0 * d1 > 0)
        interval_ends(p2, p0, p1, d2, d0, d1, t0, t1);
    else if (d0 * d2 > 0)
        interval_ends(p1, p0, p2, d1, d0, d2, t0, t1);
    else if (d1 * d2 > 0 || d0 != 0)
        interval_ends(p0, p1, p2, d0, d1, d2, t0, t1);
    else if (d1 != 0)
        interval_ends(p1, p0, p2, d1, d0, d2, t0, t1);
    else if (d2 != 0)
        interval_ends(p2, p0, p1, d2, d0, d1, t0, t1);
    else
        return false;
    return true;
}

// Segment-interval triangle intersection test; touching counts.
bool tri_tri_intersect(const Eigen::Vector3d& v0, const Eigen::Vector3d& v1,
                       const Eigen::Vector3d& v2, const Eigen::Vector3d& u0,
                       const Eigen::Vector3d& u1, const Eigen::Vector3d& u2) {
    const Eigen::Vector3d v[3] = {v0, v1, v2};
    const Eigen::Vector3d u[3] = {u0, u1, u2};
    double scale = 0.0;
    for (int k = 0; k < 3; ++k) {
        scale = std::max(scale, (v[k] - v0).norm());
        scale = std::max(scale, (u[k] - v0).norm());
    }
    if (scale == 0.0) return true;  // both degenerate to the same point

    const Eigen::Vector3d n1 = (v1 - v0).cross(v2 - v0);
    const double off1 = -n1.dot(v0);
    double du[3];
    const double eps1 = 1e-12 * n1.norm() * scale;
    for (int k = 0; k < 3; ++k) {
        du[k] = n1.dot(u[k]) + off1;
        if (std::abs(du[k]) < eps1) du[k] = 0;
    }
    if ((du[0] > 0 && du[1] > 0 && du[2] > 0) || (du[0] < 0 && du[1] < 0 && du[2] < 0))
        return false;

    const Eigen::Vector3d n2 = (u1 - u0).cross(u2 - u0);
    const double off2 = -n2.dot(u0);
    double dv[3];
    const double eps2 = 1e-12 * n2.norm() * scale;
    for (int k = 0; k < 3; ++k) {
        dv[k] = n2.dot(v[k]) + off2;
        if (std::abs(dv[k]) < eps2) dv[k] = 0;
    }
    if ((dv[0] > 0 && dv[1] > 0 && dv[2] > 0) || (dv[0] < 0 && dv[1] < 0 && dv[2] < 0))
        return false;

    const Eigen::Vector3d D = n1.cross(n2);
    Eigen::Vector3d aD = D.cwiseAbs();
    int axis = 0;
    if (aD.y() > aD.x()) axis = 1;
    if (aD.z() > aD[axis]) axis = 2;

    double a0, a1, b0, b1;
    const bool oka =
        compute_interval(v[0][axis], v[1][axis], v[2][axis], dv[0], dv[1], dv[2], a0, a1);
    const bool okb =
        compute_interval(u[0][axis], u[1][axis], u[2][axis], du[0], du[1], du[2], b0, b1);
    if (!oka || !okb) return coplanar_tri_tri(n1, v, u, scale);

    if (a0 > a1) std::swap(a0, a1);
    if (b0 > b1) std::swap(b0, b1);
    return std::max(a0, b0) <= std::min(a1, b1);
}

// Uniform-grid broad phase; returns the first intersecting pair.
bool meshes_intersect(const SurfaceMesh& A, const SurfaceMesh& B, std::size_t* ia,
                      std::size_t* ib) {
    if (A.n_triangles() == 0 || B.n_triangles() == 0) return false;
    double cell = 0.0;
    const auto tri_box = [](const SurfaceMesh& M, std::size_t t) {
        Eigen::AlignedBox3d b;
        for (int k = 0; k < 3; ++k) b.extend(M.vertices[M.triangles[t][k]]);
        return b;
    };
    for (std::size_t t = 0; t < A.n_triangles(); ++t)
        cell = std::max(cell, tri_box(A, t).diagonal().norm());
    for (std::size_t t = 0; t < B.n_triangles(); ++t)
        cell = std::max(cell, tri_box(B, t).diagonal().norm());
    if (cell == 0.0) cell = 1.0;

    Eigen::AlignedBox3d ba = A.bounding_box(), bb = B.bounding_box();
    const Eigen::Vector3d pad = Eigen::Vector3d::Constant(0.5 * cell);
    ba.min() -= pad;
    ba.max() += pad;
    bb.min() -= pad;
    bb.max() += pad;
    const Eigen::AlignedBox3d overlap = ba.intersection(bb);
    if (overlap.isEmpty()) return false;

    const Eigen::Vector3d origin = overlap.min();
    const auto cell_range = [&](const Eigen::AlignedBox3d& b, int lo[3], int hi[3]) {
        for (int a = 0; a < 3; ++a) {
            lo[a] = static_cast<int>(std::floor((b.min()[a] - origin[a]) / cell));
            hi[a] = static_cast<int>(std::floor((b.max()[a] - origin[a]) / cell));
        }
    };
    const auto key = [](int x, int y, int z) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 42) ^
               (static_cast<std::uint64_t>(static_cast<std::uint32_t>(y)) << 21) ^
               static_cast<std::uint64_t>(static_cast<std::uint32_t>(z));
    };

    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> bins;
    for (std::size_t t = 0; t < A.n_triangles(); ++t) {
        const Eigen::AlignedBox3d tb = tri_box(A, t);
        if (!tb.intersects(overlap)) continue;
        int lo[3], hi[3];
        cell_range(tb, lo, hi);
        for (int x = lo[0]; x <= hi[0]; ++x)
            for (int y = lo[1]; y <= hi[1]; ++y)
                for (int z = lo[2]; z <= hi[2]; ++z)
                    bins[key(x, y, z)].push_back(static_cast<std::uint32_t>(t));
    }
    if (bins.empty()) return false;

    std::vector<std::uint32_t> seen(A.n_triangles(), 0xffffffffu);
    for (std::size_t t = 0; t < B.n_triangles(); ++t) {
        const Eigen::AlignedBox3d tb = tri_box(B, t);
        if (!tb.intersects(overlap)) continue;
        int lo[3], hi[3];
        cell_range(tb, lo, hi);
        for (int x = lo[0]; x <= hi[0]; ++x)
            for (int y = lo[1]; y <= hi[1]; ++y)
                for (int z = lo[2]; z <= hi[2]; ++z) {
                    const auto it = bins.find(key(x, y, z));
                    if (it == bins.end()) continue;
                    for (std::uint32_t s : it->second) {
                        if (seen[s] == t) continue;
                        seen[s] = static_cast<std::uint32_t>(t);
                        const auto& ta = A.triangles[s];
                        const auto& tbq = B.triangles[t];
                        if (tri_tri_intersect(A.vertices[ta[0]], A.vertices[ta[1]],
                                              A.vertices[ta[2]], B.vertices[tbq[0]],
                                              B.vertices[tbq[1]], B.vertices[tbq[2]])) {
                            *ia = s;
                            *ib = t;
                            return true;
                        }
                    }
                }
    }
    return false;
}

} // namespace

AdditivityResult check_additivity(const SurfaceMesh& a, const SurfaceMesh& b,
                                  const EntropyConfig& cfg) {
    std::size_t ia = 0, ib = 0;
    if (meshes_intersect(a, b, &ia, &ib))
        throw MeshesIntersect("triangle " + std::to_string(ia) + " of the first mesh meets triangle " +
                              std::to_string(ib) + " of the second");
    AdditivityResult r;
    r.lambda_a = entropy(a, cfg).value;
    r.lambda_b = entropy(b, cfg).value;
    r.lambda_union = entropy(merge_meshes(a, b), cfg).value;
    r.defect = r.lambda_union - r.lambda_a - r.lambda_b;
    return r;
}

double triangle_disk_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                          const Eigen::Vector2d& c, double radius) {
    if (!(radius > 0.0)) return 0.0;
    const double r2 = radius * radius;
    const auto edge_piece = [&](const Eigen::Vector2d& P0, const Eigen::Vector2d& P1) {
        const Eigen::Vector2d d = P1 - P0;
        const double dd = d.squaredNorm();
        if (dd == 0.0) return 0.0;
        double ts[4];
        int n = 0;
        ts[n++] = 0.0;
        const double p = P0.dot(d) / dd;
        const double q = (P0.squaredNorm() - r2) / dd;
        const double disc = p * p - q;
        if (disc > 0.0) {
            const double s = std::sqrt(disc);
            const double t1 = -p - s, t2 = -p + s;
            if (t1 > 0.0 && t1 < 1.0) ts[n++] = t1;
            if (t2 > 0.0 && t2 < 1.0) ts[n++] = t2;
        }
        ts[n++] = 1.0;
        double acc = 0.0;
        for (int k = 0; k + 1 < n; ++k) {
            const Eigen::Vector2d A = P0 + ts[k] * d;
            const Eigen::Vector2d B = P0 + ts[k + 1] * d;
            const Eigen::Vector2d M = P0 + 0.5 * (ts[k] + ts[k + 1]) * d;
            const double cr = A.x() * B.y() - A.y() * B.x();
            if (M.squaredNorm() <= r2) {
                acc += 0.5 * cr;
            } else {
                if (std::abs(cr) <= 1e-16 * A.norm() * B.norm()) continue;
                double da = std::atan2(B.y(), B.x()) - std::atan2(A.y(), A.x());
                if (da > kPi) da -= 2.0 * kPi;
                if (da < -kPi) da += 2.0 * kPi;
                acc += 0.5 * r2 * da;
            }
        }
        return acc;
    };
    return std::abs(edge_piece(a, b) + edge_piece(b, c) + edge_piece(c, a));
}

double area_growth_ratio(const SurfaceMesh& mesh, const std::vector<Eigen::Vector3d>& centers,
                         const std::vector<double>& radii) {
    if (centers.empty() || radii.empty())
        throw BadInput("area growth needs at least one center and one radius");
    for (double R : radii)
        if (!(R > 0.0)) throw BadInput("area growth radii must be positive");
    double best = 0.0;
    for (const auto& x0 : centers) {
        for (double R : radii) {
            const double area =
                parallel_sum(mesh.n_triangles(), 4096, [&](std::size_t b, std::size_t e) {
                    double acc = 0.0;
                    for (std::size_t t = b; t < e; ++t) {
                        const Eigen::Vector3d& A = mesh.vertices[mesh.triangles[t][0]];
                        const Eigen::Vector3d& B = mesh.vertices[mesh.triangles[t][1]];
                        const Eigen::Vector3d& C = mesh.vertices[mesh.triangles[t][2]];
                        const Eigen::Vector3d n = (B - A).cross(C - A);
                        const double n2 = n.squaredNorm();
                        if (n2 == 0.0) continue;
                        const Eigen::Vector3d nn = n / std::sqrt(n2);
                        const double dist = nn.dot(A - x0);
                        const double rr = R * R - dist * dist;
                        if (rr <= 0.0) continue;
                        // ball section in the triangle plane: disk of radius
                        // sqrt(rr) about the foot of the perpendicular
                        const Eigen::Vector3d foot = x0 + dist * nn;
                        const Eigen::Vector3d t1 = (B - A).normalized();
                        const Eigen::Vector3d t2 = nn.cross(t1);
                        const auto flat = [&](const Eigen::Vector3d& P) {
                            return Eigen::Vector2d((P - foot).dot(t1), (P - foot).dot(t2));
                        };
                        acc += triangle_disk_area(flat(A), flat(B), flat(C), std::sqrt(rr));
                    }
                    return acc;
                });
            best = std::max(best, area / (R * R));
        }
    }
    return best;
}

} // namespace soliton
