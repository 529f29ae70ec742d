#include "soliton/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "soliton/errors.hpp"
#include "soliton/generators.hpp"

namespace soliton {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

void check_patch(const GraphPatch& p) {
    if (p.nx < 3 || p.ny < 3 || !(p.hx > 0) || !(p.hy > 0) ||
        p.u.size() != static_cast<std::size_t>(p.nx) * p.ny)
        throw BadInput("graph patch needs nx,ny >= 3, positive spacing and nx*ny values");
}

struct FluxSlopes {
    double pe, qe, pw, qw, qn, pn, qs, ps, pc, qc;
};

FluxSlopes slopes(const GraphPatch& g, int i, int j) {
    const auto U = [&](int di, int dj) { return g.at(i + di, j + dj); };
    FluxSlopes s;
    s.pe = (U(1, 0) - U(0, 0)) / g.hx;
    s.qe = (U(0, 1) + U(1, 1) - U(0, -1) - U(1, -1)) / (4 * g.hy);
    s.pw = (U(0, 0) - U(-1, 0)) / g.hx;
    s.qw = (U(-1, 1) + U(0, 1) - U(-1, -1) - U(0, -1)) / (4 * g.hy);
    s.qn = (U(0, 1) - U(0, 0)) / g.hy;
    s.pn = (U(1, 0) + U(1, 1) - U(-1, 0) - U(-1, 1)) / (4 * g.hx);
    s.qs = (U(0, 0) - U(0, -1)) / g.hy;
    s.ps = (U(1, -1) + U(1, 0) - U(-1, -1) - U(-1, 0)) / (4 * g.hx);
    s.pc = (U(1, 0) - U(-1, 0)) / (2 * g.hx);
    s.qc = (U(0, 1) - U(0, -1)) / (2 * g.hy);
    return s;
}

double flux(double p, double q) { return p / std::sqrt(1 + p * p + q * q); }

double node_residual(const GraphPatch& g, int i, int j) {
    const FluxSlopes s = slopes(g, i, j);
    const double wc = std::sqrt(1 + s.pc * s.pc + s.qc * s.qc);
    return (flux(s.pe, s.qe) - flux(s.pw, s.qw)) / g.hx +
           (flux(s.qn, s.pn) - flux(s.qs, s.ps)) / g.hy - 1.0 / wc;
}

// d(p/W)/dp and d(p/W)/dq, W = sqrt(1+p²+q²)
double flux_dp(double p, double q) {
    const double w = std::sqrt(1 + p * p + q * q);
    return (1 + q * q) / (w * w * w);
}
double flux_dq(double p, double q) {
    const double w = std::sqrt(1 + p * p + q * q);
    return -p * q / (w * w * w);
}

// Jacobian of the interior residual w.r.t. interior unknowns, unknown index
// (i-1)*(ny-2) + (j-1). Dirichlet columns are dropped.
void assemble_jacobian(const GraphPatch& g, std::vector<Eigen::Triplet<double>>& trip) {
    const int mx = g.nx - 2, my = g.ny - 2;
    const auto uid = [&](int i, int j) { return (i - 1) * my + (j - 1); };
    trip.clear();
    trip.reserve(static_cast<std::size_t>(9) * mx * my);
    for (int i = 1; i <= mx; ++i)
        for (int j = 1; j <= my; ++j) {
            const int row = uid(i, j);
            const FluxSlopes s = slopes(g, i, j);
            double J[3][3] = {};  // J[di+1][dj+1]
            const auto add = [&](int di, int dj, double v) { J[di + 1][dj + 1] += v; };

            const double ax = 1.0 / (g.hx * g.hx), ay4 = 1.0 / (4 * g.hx * g.hy);
            const double by = 1.0 / (g.hy * g.hy);
            // east flux, +(1/hx) f(pe,qe)
            {
                const double dp = flux_dp(s.pe, s.qe), dq = flux_dq(s.pe, s.qe);
                add(1, 0, dp * ax);
                add(0, 0, -dp * ax);
                add(0, 1, dq * ay4);
                add(1, 1, dq * ay4);
                add(0, -1, -dq * ay4);
                add(1, -1, -dq * ay4);
            }
            // west flux, -(1/hx) f(pw,qw)
            {
                const double dp = flux_dp(s.pw, s.qw), dq = flux_dq(s.pw, s.qw);
                add(0, 0, -dp * ax);
                add(-1, 0, dp * ax);
                add(-1, 1, -dq * ay4);
                add(0, 1, -dq * ay4);
                add(-1, -1, dq * ay4);
                add(0, -1, dq * ay4);
            }
            // north flux, +(1/hy) f(qn,pn)
            {
                const double dq = flux_dp(s.qn, s.pn), dp = flux_dq(s.qn, s.pn);
                add(0, 1, dq * by);
                add(0, 0, -dq * by);
                add(1, 0, dp * ay4);
                add(1, 1, dp * ay4);
                add(-1, 0, -dp * ay4);
                add(-1, 1, -dp * ay4);
            }
            // south flux, -(1/hy) f(qs,ps)
            {
                const double dq = flux_dp(s.qs, s.ps), dp = flux_dq(s.qs, s.ps);
                add(0, 0, -dq * by);
                add(0, -1, dq * by);
                add(1, -1, -dp * ay4);
                add(1, 0, -dp * ay4);
                add(-1, -1, dp * ay4);
                add(-1, 0, dp * ay4);
            }
            // -1/Wc
            {
                const double wc = std::sqrt(1 + s.pc * s.pc + s.qc * s.qc);
                const double w3 = wc * wc * wc;
                const double gx = s.pc / w3 / (2 * g.hx), gy = s.qc / w3 / (2 * g.hy);
                add(1, 0, gx);
                add(-1, 0, -gx);
                add(0, 1, gy);
                add(0, -1, -gy);
            }

            for (int di = -1; di <= 1; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    const double v = J[di + 1][dj + 1];
                    if (v == 0.0) continue;
                    const int ii = i + di, jj = j + dj;
                    if (g.on_boundary(ii, jj)) continue;  // Dirichlet column
                    trip.emplace_back(row, uid(ii, jj), v);
                }
        }
}

} // namespace

std::vector<double> translator_residual_field(const GraphPatch& p) {
    check_patch(p);
    std::vector<double> r(p.u.size(), 0.0);
    for (int i = 1; i + 1 < p.nx; ++i)
        for (int j = 1; j + 1 < p.ny; ++j)
            r[static_cast<std::size_t>(i) * p.ny + j] = node_residual(p, i, j);
    return r;
}

Eigen::SparseMatrix<double> translator_jacobian(const GraphPatch& p) {
    check_patch(p);
    const auto n = static_cast<std::ptrdiff_t>(p.nx - 2) * (p.ny - 2);
    std::vector<Eigen::Triplet<double>> trip;
    assemble_jacobian(p, trip);
    Eigen::SparseMatrix<double> A(static_cast<int>(n), static_cast<int>(n));
    A.setFromTriplets(trip.begin(), trip.end());
    return A;
}

void harmonic_fill(GraphPatch& p) {
    check_patch(p);
    const int mx = p.nx - 2, my = p.ny - 2;
    const auto uid = [&](int i, int j) { return (i - 1) * my + (j - 1); };
    const double cx = 1.0 / (p.hx * p.hx), cy = 1.0 / (p.hy * p.hy);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(5) * mx * my);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<std::ptrdiff_t>(mx) * my);
    for (int i = 1; i <= mx; ++i)
        for (int j = 1; j <= my; ++j) {
            const int row = uid(i, j);
            trip.emplace_back(row, row, 2 * (cx + cy));
            const auto couple = [&](int ii, int jj, double w) {
                if (p.on_boundary(ii, jj))
                    rhs[row] += w * p.at(ii, jj);
                else
                    trip.emplace_back(row, uid(ii, jj), -w);
            };
            couple(i - 1, j, cx);
            couple(i + 1, j, cx);
            couple(i, j - 1, cy);
            couple(i, j + 1, cy);
        }
    Eigen::SparseMatrix<double> A(static_cast<int>(rhs.size()), static_cast<int>(rhs.size()));
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(A);
    if (lu.info() != Eigen::Success) throw NewtonDiverged("harmonic fill factorization failed");
    const Eigen::VectorXd sol = lu.solve(rhs);
    for (int i = 1; i <= mx; ++i)
        for (int j = 1; j <= my; ++j) p.at(i, j) = sol[uid(i, j)];
}

GraphPatch solve_translator_graph(const GraphPatch& start, const NewtonOptions& opt,
                                  SolveStage* stage) {
    check_patch(start);
    for (int i = 0; i < start.nx; ++i)
        for (int j = 0; j < start.ny; ++j)
            if (start.on_boundary(i, j) && !std::isfinite(start.at(i, j)))
                throw NonFiniteBoundary("boundary value at grid node (" + std::to_string(i) +
                                        "," + std::to_string(j) + ") is not finite");
    for (double v : start.u)
        if (!std::isfinite(v)) throw BadInput("initial guess must be finite");

    GraphPatch g = start;
    const int mx = g.nx - 2, my = g.ny - 2;
    const auto n_unknowns = static_cast<std::ptrdiff_t>(mx) * my;
    const auto uid = [&](int i, int j) { return (i - 1) * my + (j - 1); };

    const auto interior_residual = [&](const GraphPatch& q) {
        Eigen::VectorXd r(n_unknowns);
        for (int i = 1; i <= mx; ++i)
            for (int j = 1; j <= my; ++j) r[uid(i, j)] = node_residual(q, i, j);
        return r;
    };

    Eigen::VectorXd r = interior_residual(g);
    double rinf = r.lpNorm<Eigen::Infinity>();
    int iters = 0;
    std::vector<Eigen::Triplet<double>> trip;
    while (rinf >= opt.tolerance) {
        if (iters >= opt.max_iterations)
            throw NewtonDiverged("no convergence in " + std::to_string(opt.max_iterations) +
                                 " iterations, residual " + std::to_string(rinf));
        ++iters;
        assemble_jacobian(g, trip);

        Eigen::SparseMatrix<double> A(static_cast<int>(n_unknowns), static_cast<int>(n_unknowns));
        A.setFromTriplets(trip.begin(), trip.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(A);
        if (lu.info() != Eigen::Success) throw NewtonDiverged("jacobian factorization failed");
        const Eigen::VectorXd d = lu.solve(-r);

        const double n2 = r.norm();
        double t = 1.0;
        bool accepted = false;
        for (int bt = 0; bt <= opt.max_backtracks; ++bt, t *= 0.5) {
            GraphPatch trial = g;
            for (int i = 1; i <= mx; ++i)
                for (int j = 1; j <= my; ++j) trial.at(i, j) += t * d[uid(i, j)];
            const Eigen::VectorXd rt = interior_residual(trial);
            const double nt = rt.norm();
            if (std::isfinite(nt) && nt <= (1 - 1e-4 * t) * n2) {
                g = std::move(trial);
                r = rt;
                rinf = r.lpNorm<Eigen::Infinity>();
                accepted = true;
                break;
            }
        }
        if (!accepted)
            throw NewtonDiverged("line search stalled at iteration " + std::to_string(iters) +
                                 ", residual " + std::to_string(rinf));
    }
    if (stage) {
        stage->newton_iterations = iters;
        stage->final_residual = rinf;
    }
    return g;
}

SurfaceMesh patch_to_mesh(const GraphPatch& p, bool downward) {
    check_patch(p);
    std::vector<double> xs(p.nx), ys(p.ny);
    for (int i = 0; i < p.nx; ++i) xs[i] = p.x(i);
    for (int j = 0; j < p.ny; ++j) ys[j] = p.y(j);
    SurfaceMesh m = graph_mesh(xs, ys, p.u, /*union_jack=*/true, downward);
    m.meta.grid_h = std::max(p.hx, p.hy);
    return m;
}

SolverReport make_delta_wing(double b, const std::vector<double>& schedule, double h,
                             const NewtonOptions& opt, double half_length) {
    if (!(b > kPi))
        throw WidthTooSmall("strip width " + std::to_string(b) +
                            " admits no complete graph; need b > pi");
    if (schedule.empty()) throw BadInput("continuation schedule is empty");
    for (std::size_t k = 0; k < schedule.size(); ++k)
        if (!(schedule[k] > 0) || (k > 0 && schedule[k] <= schedule[k - 1]))
            throw BadInput("continuation schedule must be positive and increasing");
    if (!(h > 0) || h > b / 8) throw BadInput("grid pitch too coarse for the strip");

    // The domain must be longer along the strip axis than the strip is wide,
    // or the minimal-width direction of the footprint flips to the ends.
    const double L = half_length > 0 ? half_length : 0.6 * b;
    const double ct = kPi / b;                       // cos(theta)
    const double tt = std::sqrt(1 - ct * ct) / ct;   // tan(theta)
    const double s2 = 1.0 / (ct * ct);               // sec²(theta)

    GraphPatch g;
    g.ny = std::max(4, static_cast<int>(std::lround(b / h)) + 1);
    g.nx = std::max(4, static_cast<int>(std::lround(2 * L / h)) + 1);
    g.hy = b / (g.ny - 1);
    g.hx = 2 * L / (g.nx - 1);
    g.x0 = -L;
    g.y0 = -b / 2;
    g.u.assign(static_cast<std::size_t>(g.nx) * g.ny, 0.0);

    const auto data = [&](double x1, double x2, double M) {
        const double c = std::cos(x2 * ct);
        if (!(c > 0)) return M;  // at the walls the asymptote is +inf
        return std::min(M, std::abs(x1) * tt + s2 * (-std::log(c)));
    };

    SolverReport rep;
    rep.width = b;
    rep.tilt = tt;
    std::vector<double> prev;
    double prev_min = 0;
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        const double M = schedule[k];
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.ny; ++j)
                if (g.on_boundary(i, j)) g.at(i, j) = data(g.x(i), g.y(j), M);
        if (k == 0) harmonic_fill(g);

        SolveStage st;
        st.boundary_level = M;
        g = solve_translator_graph(g, opt, &st);

        double mn = std::numeric_limits<double>::infinity();
        for (int i = 1; i + 1 < g.nx; ++i)
            for (int j = 1; j + 1 < g.ny; ++j) mn = std::min(mn, g.at(i, j));
        if (!prev.empty()) {
            double diff = 0;
            for (int i = 1; i + 1 < g.nx; ++i)
                for (int j = 1; j + 1 < g.ny; ++j) {
                    const std::size_t id = static_cast<std::size_t>(i) * g.ny + j;
                    diff = std::max(diff, std::abs((g.u[id] - mn) - (prev[id] - prev_min)));
                }
            st.interior_difference = diff;
        }
        prev = g.u;
        prev_min = mn;
        rep.stages.push_back(st);
    }

    rep.mesh = patch_to_mesh(g, /*downward=*/true);
    rep.mesh.meta.generator = "delta_wing";
    rep.mesh.meta.params["width"] = b;
    rep.mesh.meta.params["boundary_level"] = schedule.back();
    rep.mesh.meta.params["tilt"] = tt;
    rep.mesh.meta.height_cap = schedule.back();
    rep.mesh.meta.area_growth_c = 4.0 * kPi;
    rep.mesh.meta.is_translator = true;
    rep.patch = std::move(g);
    return rep;
}

} // namespace soliton
