#include "soliton/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "soliton/errors.hpp"

namespace soliton {

namespace {

constexpr double kPi = std::numbers::pi;

// acosh(e^y) without overflow: y + log(1 + sqrt(1 - e^{-2y})).
double acosh_exp(double y) {
    if (y <= 0) throw BadInput("height cap must be positive");
    if (y > 20.0) return y + std::numbers::ln2;
    const double em = std::exp(-2.0 * y);
    return y + std::log1p(std::sqrt(1.0 - em));
}

void require_pitch(double h, double span, const char* who) {
    if (!(h > 0)) throw BadInput(std::string(who) + ": pitch must be positive");
    if (!(span > 0)) throw BadInput(std::string(who) + ": extent must be positive");
    if (h > span / 2) throw BadInput(std::string(who) + ": pitch too coarse for extent");
}

std::vector<double> uniform_axis(double lo, double hi, double h) {
    const int n = std::max(2, static_cast<int>(std::ceil((hi - lo) / h)) + 1);
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i)
        xs[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    return xs;
}

// Symmetric axis containing 0 exactly: k·h for k in [-n, n].
std::vector<double> centered_axis(double half_span, double h) {
    const int n = std::max(1, static_cast<int>(std::ceil(half_span / h)));
    std::vector<double> xs(2 * n + 1);
    for (int k = -n; k <= n; ++k) xs[k + n] = h * k;
    return xs;
}

double max_x3(const SurfaceMesh& m) {
    double z = -std::numeric_limits<double>::infinity();
    for (const auto& v : m.vertices) z = std::max(z, v.z());
    return z;
}

} // namespace

SurfaceMesh graph_mesh(const std::vector<double>& xs, const std::vector<double>& ys,
                       const std::vector<double>& heights, bool union_jack,
                       bool downward) {
    const int nx = static_cast<int>(xs.size()), ny = static_cast<int>(ys.size());
    if (nx < 2 || ny < 2 || heights.size() != static_cast<std::size_t>(nx) * ny)
        throw BadInput("graph_mesh: bad grid");
    SurfaceMesh m;
    m.vertices.reserve(static_cast<std::size_t>(nx) * ny);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            m.vertices.emplace_back(xs[i], ys[j], heights[static_cast<std::size_t>(i) * ny + j]);
    auto vid = [ny](int i, int j) { return static_cast<std::int32_t>(i * ny + j); };
    m.triangles.reserve(2 * static_cast<std::size_t>(nx - 1) * (ny - 1));
    for (int i = 0; i + 1 < nx; ++i)
        for (int j = 0; j + 1 < ny; ++j) {
            const auto a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1),
                       d = vid(i, j + 1);
            const bool ne = !union_jack || ((i + j) % 2 == 0);
            if (ne) {  // diagonal a-c
                m.triangles.push_back({a, b, c});
                m.triangles.push_back({a, c, d});
            } else {   // diagonal b-d
                m.triangles.push_back({a, b, d});
                m.triangles.push_back({b, c, d});
            }
        }
    if (downward) m.flip_orientation();  // grid winding above yields upward normals
    return m;
}

SurfaceMesh make_vertical_plane(double extent, double h) {
    require_pitch(h, extent, "make_vertical_plane");
    const auto ys = centered_axis(extent, h);
    std::vector<double> zero(ys.size() * ys.size(), 0.0);
    // Build as a graph over (x₂,x₃) then rotate coordinates: mesh points
    // (0, x₂, x₃). Direct construction keeps it simple.
    SurfaceMesh m;
    const int n = static_cast<int>(ys.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.vertices.emplace_back(0.0, ys[i], ys[j]);
    auto vid = [n](int i, int j) { return static_cast<std::int32_t>(i * n + j); };
    for (int i = 0; i + 1 < n; ++i)
        for (int j = 0; j + 1 < n; ++j) {
            m.triangles.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
            m.triangles.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
        }
    // Orient toward −e₁.
    {
        const auto& t = m.triangles.front();
        const Eigen::Vector3d nrm = (m.vertices[t[1]] - m.vertices[t[0]])
                                        .cross(m.vertices[t[2]] - m.vertices[t[0]]);
        if (nrm.x() > 0) m.flip_orientation();
    }
    m.meta.generator = "vertical_plane";
    m.meta.params["extent"] = extent;
    m.meta.grid_h = h;
    m.meta.height_cap = extent;
    m.meta.area_growth_c = kPi * 1.05;
    m.meta.is_translator = true;
    return m;
}

SurfaceMesh make_grim_reaper(double extent, double cap, double h, double shift,
                             double h_x2) {
    require_pitch(h, extent, "make_grim_reaper");
    if (!(cap > 0)) throw BadInput("make_grim_reaper: cap must be positive");
    if (cap > 200.0)
        throw ClippedHeight("make_grim_reaper: cap beyond representable profile");
    if (h_x2 <= 0) h_x2 = h;

    // Arclength parametrization of x₃ = −log cos(x): x = asin(tanh s),
    // x₃ = log cosh s. log cosh s = cap at s = acosh(e^cap).
    const double s_max = acosh_exp(cap);
    const int ns = static_cast<int>(std::ceil(s_max / h));
    std::vector<double> xs(2 * ns + 1), zs(2 * ns + 1);
    for (int k = -ns; k <= ns; ++k) {
        const double s = s_max * static_cast<double>(k) / ns;
        xs[k + ns] = std::asin(std::tanh(s)) + (shift - kPi / 2.0);
        // log cosh s, stable for large |s|
        const double a = std::abs(s);
        zs[k + ns] = a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
    }
    const auto ys = centered_axis(extent, h_x2);

    SurfaceMesh m;
    const int nj = static_cast<int>(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (int j = 0; j < nj; ++j) m.vertices.emplace_back(xs[i], ys[j], zs[i]);
    auto vid = [nj](std::size_t i, int j) {
        return static_cast<std::int32_t>(i * nj + j);
    };
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        for (int j = 0; j + 1 < nj; ++j) {
            m.triangles.push_back({vid(i, j), vid(i, j + 1), vid(i + 1, j + 1)});
            m.triangles.push_back({vid(i, j), vid(i + 1, j + 1), vid(i + 1, j)});
        }
    // Downward normal: z-component of the first triangle normal must be ≤ 0.
    {
        const auto& t = m.triangles.front();
        const Eigen::Vector3d nrm = (m.vertices[t[1]] - m.vertices[t[0]])
                                        .cross(m.vertices[t[2]] - m.vertices[t[0]]);
        if (nrm.z() > 0) m.flip_orientation();
    }
    m.meta.generator = "grim_reaper";
    m.meta.params["extent"] = extent;
    m.meta.params["cap"] = cap;
    m.meta.params["shift"] = shift;
    m.meta.params["width"] = kPi;
    m.meta.params["apex_x1"] = shift - kPi / 2.0;
    m.meta.grid_h = std::max(h, h_x2);
    m.meta.height_cap = max_x3(m);
    m.meta.area_growth_c = 2.0 * kPi * 1.1;
    m.meta.is_translator = true;
    return m;
}

SurfaceMesh make_tilted_grim_reaper(double theta, double extent, double cap, double h) {
    if (!(std::abs(theta) < kPi / 2.0))
        throw InvalidAngle("make_tilted_grim_reaper: |theta| must be below pi/2");
    require_pitch(h, extent, "make_tilted_grim_reaper");
    if (!(cap > 0)) throw BadInput("make_tilted_grim_reaper: cap must be positive");
    if (cap > 200.0)
        throw ClippedHeight("make_tilted_grim_reaper: cap beyond representable profile");

    const double c = std::cos(theta), t = std::tan(theta);
    const double sec2 = 1.0 / (c * c);
    // Profile (x₁, u₀(x₁)) with u₀ = sec²θ·(−log cos(x₁ c)); parametrized by
    // σ with x₁ = asin(tanh σ)/c, u₀ = sec²θ·log cosh σ. Step in σ adapted to
    // keep chords near h.
    const double sigma_max = acosh_exp(cap * c * c);
    std::vector<double> sig{0.0};
    while (sig.back() < sigma_max) {
        const double s = sig.back();
        const double sech = 1.0 / std::cosh(std::min(s, 300.0));
        const double speed = std::hypot(sech / c, sec2 * std::tanh(s));
        sig.push_back(std::min(sigma_max, s + h / std::max(speed, 1e-8)));
    }
    // mirror to negative side
    std::vector<double> sigma(sig.size() * 2 - 1);
    for (std::size_t i = 0; i < sig.size(); ++i) {
        sigma[sig.size() - 1 + i] = sig[i];
        sigma[sig.size() - 1 - i] = -sig[i];
    }
    std::vector<double> x1(sigma.size()), u0(sigma.size());
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        const double s = sigma[i];
        x1[i] = std::asin(std::tanh(s)) / c;
        const double a = std::abs(s);
        u0[i] = sec2 * (a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2);
    }
    const auto ys = centered_axis(extent, h * c);

    SurfaceMesh m;
    const int nj = static_cast<int>(ys.size());
    for (std::size_t i = 0; i < x1.size(); ++i)
        for (int j = 0; j < nj; ++j)
            m.vertices.emplace_back(x1[i], ys[j], u0[i] + ys[j] * t);
    auto vid = [nj](std::size_t i, int j) {
        return static_cast<std::int32_t>(i * nj + j);
    };
    for (std::size_t i = 0; i + 1 < x1.size(); ++i)
        for (int j = 0; j + 1 < nj; ++j) {
            m.triangles.push_back({vid(i, j), vid(i, j + 1), vid(i + 1, j + 1)});
            m.triangles.push_back({vid(i, j), vid(i + 1, j + 1), vid(i + 1, j)});
        }
    {
        const auto& tri = m.triangles.front();
        const Eigen::Vector3d nrm = (m.vertices[tri[1]] - m.vertices[tri[0]])
                                        .cross(m.vertices[tri[2]] - m.vertices[tri[0]]);
        // Downward: ν must have negative z-component; for a graph it suffices
        // to check the winding against +e₃.
        if (nrm.z() > 0) m.flip_orientation();
    }
    m.meta.generator = "tilted_grim_reaper";
    m.meta.params["theta"] = theta;
    m.meta.params["extent"] = extent;
    m.meta.params["cap"] = cap;
    m.meta.params["width"] = kPi / c;
    m.meta.grid_h = h;
    m.meta.height_cap = max_x3(m);
    m.meta.area_growth_c = 2.0 * kPi * 1.1;
    m.meta.is_translator = true;
    return m;
}

double BowlProfile::u_at(double radius) const {
    if (radius <= 0) return 0.0;
    if (radius >= r.back()) return u.back();
    const auto it = std::upper_bound(r.begin(), r.end(), radius);
    const std::size_t i = static_cast<std::size_t>(it - r.begin()) - 1;
    const double hh = r[i + 1] - r[i], tt = (radius - r[i]) / hh;
    const double h00 = (1 + 2 * tt) * (1 - tt) * (1 - tt), h10 = tt * (1 - tt) * (1 - tt),
                 h01 = tt * tt * (3 - 2 * tt), h11 = tt * tt * (tt - 1);
    return h00 * u[i] + h10 * hh * du[i] + h01 * u[i + 1] + h11 * hh * du[i + 1];
}

double BowlProfile::du_at(double radius) const {
    if (radius <= 0) return 0.0;
    if (radius >= r.back()) return du.back();
    const auto it = std::upper_bound(r.begin(), r.end(), radius);
    const std::size_t i = static_cast<std::size_t>(it - r.begin()) - 1;
    const double tt = (radius - r[i]) / (r[i + 1] - r[i]);
    return (1 - tt) * du[i] + tt * du[i + 1];
}

double BowlProfile::radius_for_height(double height) const {
    if (height <= 0) return 0.0;
    if (height > u.back())
        throw GeneratorHeightInsufficient("bowl profile does not reach requested height");
    const auto it = std::lower_bound(u.begin(), u.end(), height);
    std::size_t i = static_cast<std::size_t>(it - u.begin());
    if (i == 0) return r.front();
    const double tt = (height - u[i - 1]) / (u[i] - u[i - 1]);
    return r[i - 1] + tt * (r[i] - r[i - 1]);
}

double BowlProfile::arclength_to(double radius) const {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < r.size() && r[i] < radius; ++i) {
        const double hi = std::min(r[i + 1], radius) - r[i];
        const double slope = 0.5 * (du[i] + du[i + 1]);
        s += hi * std::hypot(1.0, slope);
    }
    return s;
}

BowlProfile solve_bowl_profile(double r_max, double step) {
    if (!(r_max > 0)) throw BadInput("solve_bowl_profile: r_max must be positive");
    if (!(step > 0) || step > 0.05)
        throw StepSizeTooLarge("solve_bowl_profile: ODE step must be in (0, 0.05]");

    // u'' = (1 - u'/r)(1 + u'²); series u = r²/4 + r⁴/128 + O(r⁶) starts the
    // integration away from the coordinate singularity at r = 0.
    const double r0 = std::min(1e-3, r_max / 8.0);
    auto rhs = [](double r, double /*u*/, double v) {
        return (1.0 - v / r) * (1.0 + v * v);
    };

    BowlProfile p;
    p.r.push_back(0.0);
    p.u.push_back(0.0);
    p.du.push_back(0.0);

    double r = r0;
    double u = r0 * r0 / 4.0 + std::pow(r0, 4) / 128.0;
    double v = r0 / 2.0 + std::pow(r0, 3) / 32.0;
    p.r.push_back(r);
    p.u.push_back(u);
    p.du.push_back(v);

    auto rk4 = [&rhs](double r, double& u, double& v, double hh) {
        const double k1u = v, k1v = rhs(r, u, v);
        const double k2u = v + 0.5 * hh * k1v, k2v = rhs(r + 0.5 * hh, u + 0.5 * hh * k1u, v + 0.5 * hh * k1v);
        const double k3u = v + 0.5 * hh * k2v, k3v = rhs(r + 0.5 * hh, u + 0.5 * hh * k2u, v + 0.5 * hh * k2v);
        const double k4u = v + hh * k3v, k4v = rhs(r + hh, u + hh * k3u, v + hh * k3v);
        u += hh / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
        v += hh / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    };

    while (r < r_max) {
        const double hh = std::min(step, r_max - r);
        double u1 = u, v1 = v;
        rk4(r, u1, v1, hh);
        // step-doubling check: two half steps must agree to RK4 order
        double u2 = u, v2 = v;
        rk4(r, u2, v2, hh / 2);
        rk4(r + hh / 2, u2, v2, hh / 2);
        if (std::abs(u1 - u2) > 1e-8 * std::max(1.0, std::abs(u2)) ||
            std::abs(v1 - v2) > 1e-8 * std::max(1.0, std::abs(v2)))
            throw StepSizeTooLarge("solve_bowl_profile: step-doubling check failed");
        r += hh;
        u = u2;  // keep the finer estimate
        v = v2;
        if (!(v >= 0.0) || v >= r)
            throw StepSizeTooLarge("solve_bowl_profile: left the convex branch");
        p.r.push_back(r);
        p.u.push_back(u);
        p.du.push_back(v);
    }
    p.r_max = r_max;
    return p;
}

namespace {

SurfaceMesh revolve_bowl(const BowlProfile& prof, double r_max, double h) {
    // Ring radii at uniform profile arclength; azimuthal counts 8·2^k chosen
    // so spacing tracks h, doubling at most once between consecutive rings.
    std::vector<double> ring_r;
    {
        double target = h;
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < prof.r.size() && prof.r[i] < r_max; ++i) {
            const double dr = std::min(prof.r[i + 1], r_max) - prof.r[i];
            const double ds = dr * std::hypot(1.0, 0.5 * (prof.du[i] + prof.du[i + 1]));
            s += ds;
            while (s >= target) {
                const double back = (s - target) / ds * dr;
                ring_r.push_back(std::min(prof.r[i + 1], r_max) - back);
                target += h;
            }
        }
        if (ring_r.empty() || ring_r.back() < r_max - h / 2) ring_r.push_back(r_max);
        else ring_r.back() = r_max;
    }

    SurfaceMesh m;
    m.vertices.emplace_back(0.0, 0.0, 0.0);  // pole
    std::vector<std::int32_t> prev_ring{0};
    int prev_n = 1;

    const int n0 = 8;
    int k_prev = 0;
    for (std::size_t ri = 0; ri < ring_r.size(); ++ri) {
        const double rad = ring_r[ri];
        int k = 0;
        while (n0 * (1 << (k + 1)) * h <= 2.0 * kPi * rad * 1.35) ++k;
        k = std::min(k, ri == 0 ? 0 : k_prev + 1);
        k = std::max(k, ri == 0 ? 0 : k_prev);  // never shrink
        const int n = n0 << k;
        const double z = prof.u_at(rad);
        std::vector<std::int32_t> ring(n);
        for (int j = 0; j < n; ++j) {
            const double a = 2.0 * kPi * j / n;
            ring[j] = static_cast<std::int32_t>(m.vertices.size());
            m.vertices.emplace_back(rad * std::cos(a), rad * std::sin(a), z);
        }
        if (ri == 0) {
            for (int j = 0; j < n; ++j)
                m.triangles.push_back({0, ring[j], ring[(j + 1) % n]});
        } else if (n == prev_n) {
            for (int j = 0; j < n; ++j) {
                const int jn = (j + 1) % n;
                m.triangles.push_back({prev_ring[j], ring[j], ring[jn]});
                m.triangles.push_back({prev_ring[j], ring[jn], prev_ring[jn]});
            }
        } else {  // n == 2·prev_n
            for (int j = 0; j < prev_n; ++j) {
                const int jn = (j + 1) % prev_n;
                const int f0 = 2 * j, f1 = 2 * j + 1, f2 = (2 * j + 2) % n;
                m.triangles.push_back({prev_ring[j], ring[f0], ring[f1]});
                m.triangles.push_back({prev_ring[j], ring[f1], ring[f2]});
                m.triangles.push_back({prev_ring[j], ring[f2], prev_ring[jn]});
            }
        }
        prev_ring = std::move(ring);
        prev_n = n;
        k_prev = k;
    }

    // Downward orientation for the graph: winding above is counterclockwise
    // seen from +e₃, giving upward normals; flip.
    m.flip_orientation();
    return m;
}

} // namespace

SurfaceMesh make_bowl(double r_max, double h) {
    require_pitch(h, r_max, "make_bowl");
    const BowlProfile prof = solve_bowl_profile(r_max);
    SurfaceMesh m = revolve_bowl(prof, r_max, h);
    m.meta.generator = "bowl";
    m.meta.params["r_max"] = r_max;
    m.meta.grid_h = h;
    m.meta.height_cap = prof.u.back();
    m.meta.area_growth_c = kPi * std::hypot(1.0, prof.du.back()) * 1.05;
    m.meta.is_translator = true;
    return m;
}

SurfaceMesh make_bowl_to_height(double cap, double h) {
    if (!(cap > 0)) throw BadInput("make_bowl_to_height: cap must be positive");
    // u ~ r²/2 − log r: invert approximately, then refine on the profile.
    double r_guess = std::sqrt(2.0 * cap) + 2.0;
    BowlProfile prof = solve_bowl_profile(r_guess);
    while (prof.u.back() < cap) {
        r_guess *= 1.25;
        prof = solve_bowl_profile(r_guess);
    }
    const double r_cap = prof.radius_for_height(cap);
    SurfaceMesh m = revolve_bowl(prof, r_cap, h);
    m.meta.generator = "bowl";
    m.meta.params["r_max"] = r_cap;
    m.meta.params["cap"] = cap;
    m.meta.grid_h = h;
    m.meta.height_cap = cap;
    m.meta.area_growth_c = kPi * std::hypot(1.0, prof.du_at(r_cap)) * 1.05;
    m.meta.is_translator = true;
    return m;
}

SurfaceMesh make_bowl_graph(double extent, double h) {
    require_pitch(h, extent, "make_bowl_graph");
    const BowlProfile prof = solve_bowl_profile(extent * std::sqrt(2.0) + 4.0 * h);
    const auto xs = centered_axis(extent, h);
    const int n = static_cast<int>(xs.size());
    std::vector<double> z(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            z[static_cast<std::size_t>(i) * n + j] = prof.u_at(std::hypot(xs[i], xs[j]));
    // Single-diagonal split: every interior vertex keeps a point-symmetric
    // one-ring, so the cotan Laplacian stays pointwise consistent here.
    SurfaceMesh m = graph_mesh(xs, xs, z, /*union_jack=*/false, /*downward=*/true);
    m.meta.generator = "bowl_graph";
    m.meta.params["extent"] = extent;
    m.meta.grid_h = h;
    m.meta.height_cap = prof.u_at(extent * std::sqrt(2.0));
    m.meta.area_growth_c = kPi * std::hypot(1.0, prof.du_at(extent * std::sqrt(2.0))) * 1.05;
    m.meta.is_translator = true;
    return m;
}

SurfaceMesh make_round_cylinder(double radius, double height, double h) {
    if (!(radius > 0) || !(height > 0)) throw BadInput("make_round_cylinder: bad size");
    require_pitch(h, std::min(radius, height), "make_round_cylinder");
    const int n = std::max(12, static_cast<int>(std::round(2.0 * kPi * radius / h)));
    const int nz = std::max(2, static_cast<int>(std::round(height / h)) + 1);
    SurfaceMesh m;
    for (int i = 0; i < nz; ++i) {
        const double z = -height / 2 + height * static_cast<double>(i) / (nz - 1);
        for (int j = 0; j < n; ++j) {
            const double a = 2.0 * kPi * j / n;
            m.vertices.emplace_back(radius * std::cos(a), radius * std::sin(a), z);
        }
    }
    auto vid = [n](int i, int j) { return static_cast<std::int32_t>(i * n + (j % n)); };
    for (int i = 0; i + 1 < nz; ++i)
        for (int j = 0; j < n; ++j) {
            m.triangles.push_back({vid(i, j), vid(i, j + 1), vid(i + 1, j + 1)});
            m.triangles.push_back({vid(i, j), vid(i + 1, j + 1), vid(i + 1, j)});
        }
    // Outward orientation.
    {
        const auto& t = m.triangles.front();
        const Eigen::Vector3d c =
            (m.vertices[t[0]] + m.vertices[t[1]] + m.vertices[t[2]]) / 3.0;
        const Eigen::Vector3d nrm = (m.vertices[t[1]] - m.vertices[t[0]])
                                        .cross(m.vertices[t[2]] - m.vertices[t[0]]);
        if (nrm.dot(Eigen::Vector3d(c.x(), c.y(), 0.0)) < 0) m.flip_orientation();
    }
    m.meta.generator = "round_cylinder";
    m.meta.params["radius"] = radius;
    m.meta.params["height"] = height;
    m.meta.grid_h = h;
    m.meta.height_cap = height / 2;
    m.meta.area_growth_c = 4.0 * kPi * std::max(1.0, radius) * 1.1;
    m.meta.is_translator = false;
    return m;
}

SurfaceMesh make_saddle(SaddleKind kind, double extent, double h) {
    require_pitch(h, extent, "make_saddle");
    const auto xs = centered_axis(extent, h);
    const int n = static_cast<int>(xs.size());
    std::vector<double> z(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double x = xs[i], y = xs[j];
            z[static_cast<std::size_t>(i) * n + j] =
                kind == SaddleKind::quadratic ? x * x - y * y : x * x * x - 3.0 * x * y * y;
        }
    SurfaceMesh m = graph_mesh(xs, xs, z, /*union_jack=*/true, /*downward=*/false);
    m.meta.generator = kind == SaddleKind::quadratic ? "saddle_quadratic" : "saddle_monkey";
    m.meta.params["extent"] = extent;
    m.meta.grid_h = h;
    m.meta.height_cap = max_x3(m);
    const double grad = kind == SaddleKind::quadratic ? 2.0 * std::sqrt(2.0) * extent
                                                      : 6.0 * extent * extent;
    m.meta.area_growth_c = kPi * std::hypot(1.0, grad) * 1.05;
    m.meta.is_translator = false;
    return m;
}

} // namespace soliton
