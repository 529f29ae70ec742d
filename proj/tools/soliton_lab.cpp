// Command line front end. Every subcommand reads/writes files only through
// the library's atomic writers, prints a one-line summary on stdout and
// reports failures as a single JSON object on stderr. Exit codes: 0 ok,
// 2 invalid input, 3 numerical breakdown.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "soliton/diagnostics.hpp"
#include "soliton/entropy.hpp"
#include "soliton/errors.hpp"
#include "soliton/generators.hpp"
#include "soliton/io.hpp"
#include "soliton/mesh.hpp"
#include "soliton/nodal.hpp"
#include "soliton/slab.hpp"
#include "soliton/solver.hpp"

using nlohmann::json;
using namespace soliton;

namespace {

double parse_double(const std::string& s, const std::string& what) {
    const char* b = s.data();
    const char* e = b + s.size();
    double v = 0.0;
    const auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || p != e)
        throw BadInput(what + ": '" + s + "' is not a number");
    return v;
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
    std::vector<double> out;
    std::string item;
    std::stringstream ss(s);
    while (std::getline(ss, item, ','))
        out.push_back(parse_double(item, what));
    if (out.empty()) throw BadInput(what + ": empty list");
    return out;
}

Eigen::Vector3d parse_vec3(const std::string& s, const std::string& what) {
    const auto v = parse_list(s, what);
    if (v.size() != 3) throw BadInput(what + ": expected three comma-separated numbers");
    return {v[0], v[1], v[2]};
}

Eigen::Vector2d parse_vec2(const std::string& s, const std::string& what) {
    const auto v = parse_list(s, what);
    if (v.size() != 2) throw BadInput(what + ": expected two comma-separated numbers");
    return {v[0], v[1]};
}

// "x1=c", "x2=c", "x3=c": coordinate plane at level c.
PlaneSpec parse_plane(const std::string& s) {
    const auto eq = s.find('=');
    if (eq == std::string::npos)
        throw BadInput("plane spec '" + s + "' is not of the form x1=c, x2=c or x3=c");
    const std::string axis = s.substr(0, eq);
    const double c = parse_double(s.substr(eq + 1), "plane level");
    PlaneSpec spec;
    if (axis == "x1") spec.normal = {1, 0, 0};
    else if (axis == "x2") spec.normal = {0, 1, 0};
    else if (axis == "x3") spec.normal = {0, 0, 1};
    else throw BadInput("plane spec '" + s + "': axis must be x1, x2 or x3");
    spec.point = c * spec.normal;
    return spec;
}

// JSON cannot hold non-finite numbers; they become null.
json fnum(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json num_array(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(fnum(x));
    return a;
}

json vec3_json(const Eigen::Vector3d& v) {
    return json::array({fnum(v.x()), fnum(v.y()), fnum(v.z())});
}

void write_json(const std::string& path, const json& j) {
    atomic_write_text(path, j.dump(2) + "\n");
}

std::string g6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string g3(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// SVG plotting. Deterministic output: fixed canvas, fixed palette, numbers
// formatted with snprintf in the C locale, no timestamps.

struct Series {
    std::vector<double> x, y;
    std::string label;
};

const char* kPalette[4] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string line_plot_svg(const std::vector<Series>& series, const std::string& x_label,
                          const std::string& y_label, const std::string& title,
                          bool log_y = false) {
    constexpr double W = 640, H = 420, ML = 78, MR = 24, MT = 44, MB = 56;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
    double y0 = x0, y1 = -x0;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double yv = log_y ? (s.y[i] > 0 ? std::log10(s.y[i]) : std::nan("")) : s.y[i];
            if (!std::isfinite(s.x[i]) || !std::isfinite(yv)) continue;
            x0 = std::min(x0, s.x[i]); x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, yv); y1 = std::max(y1, yv);
        }
    if (!(x0 <= x1) || !(y0 <= y1)) { x0 = y0 = 0; x1 = y1 = 1; }
    if (x1 == x0) { x0 -= 0.5; x1 += 0.5; }
    if (y1 == y0) { y0 -= 0.5; y1 += 0.5; }
    const double padx = 0.05 * (x1 - x0), pady = 0.05 * (y1 - y0);
    x0 -= padx; x1 += padx; y0 -= pady; y1 += pady;
    const auto X = [&](double v) { return ML + (v - x0) / (x1 - x0) * (W - ML - MR); };
    const auto Y = [&](double v) { return H - MB - (v - y0) / (y1 - y0) * (H - MT - MB); };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" "
           "viewBox=\"0 0 640 420\">\n";
    svg += "<rect width=\"640\" height=\"420\" fill=\"#ffffff\"/>\n";
    svg += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"15\" fill=\"#000\">" + title + "</text>\n";
    // frame
    svg += "<rect x=\"" + px(ML) + "\" y=\"" + px(MT) + "\" width=\"" + px(W - ML - MR) +
           "\" height=\"" + px(H - MT - MB) + "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double fx = x0 + (x1 - x0) * k / 4.0;
        const double fy = y0 + (y1 - y0) * k / 4.0;
        svg += "<line x1=\"" + px(X(fx)) + "\" y1=\"" + px(H - MB) + "\" x2=\"" + px(X(fx)) +
               "\" y2=\"" + px(H - MB + 5) + "\" stroke=\"#444\"/>\n";
        svg += "<text x=\"" + px(X(fx)) + "\" y=\"" + px(H - MB + 20) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\" "
               "fill=\"#000\">" + g3(fx) + "</text>\n";
        svg += "<line x1=\"" + px(ML - 5) + "\" y1=\"" + px(Y(fy)) + "\" x2=\"" + px(ML) +
               "\" y2=\"" + px(Y(fy)) + "\" stroke=\"#444\"/>\n";
        svg += "<text x=\"" + px(ML - 8) + "\" y=\"" + px(Y(fy) + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" "
               "fill=\"#000\">" + g3(fy) + "</text>\n";
    }
    svg += "<text x=\"" + px((ML + W - MR) / 2) + "\" y=\"" + px(H - 12) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "fill=\"#000\">" + x_label + "</text>\n";
    svg += "<text x=\"18\" y=\"" + px((MT + H - MB) / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" fill=\"#000\" "
           "transform=\"rotate(-90 18 " + px((MT + H - MB) / 2) + ")\">" +
           (log_y ? "log10 " + y_label : y_label) + "</text>\n";
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kPalette[si % 4];
        std::string pts;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double yv = log_y ? (s.y[i] > 0 ? std::log10(s.y[i]) : std::nan("")) : s.y[i];
            if (!std::isfinite(s.x[i]) || !std::isfinite(yv)) continue;
            pts += px(X(s.x[i])) + "," + px(Y(yv)) + " ";
            svg += "<circle cx=\"" + px(X(s.x[i])) + "\" cy=\"" + px(Y(yv)) +
                   "\" r=\"3\" fill=\"" + color + "\"/>\n";
        }
        if (!pts.empty()) pts.pop_back();
        svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
               "\" stroke-width=\"1.5\"/>\n";
        if (!s.label.empty())
            svg += "<text x=\"" + px(W - MR - 8) + "\" y=\"" + px(MT + 18 + 16 * double(si)) +
                   "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" +
                   color + "\">" + s.label + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

// Equal-aspect drawing of a sectioned polyline in in-plane coordinates.
std::string segments_svg(const std::vector<Eigen::Vector2d>& pts,
                         const std::vector<std::array<std::int32_t, 2>>& segs,
                         const std::vector<std::int32_t>& junction_nodes,
                         const std::string& x_label, const std::string& y_label,
                         const std::string& title) {
    constexpr double W = 640, H = 420, ML = 78, MR = 24, MT = 44, MB = 56;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& p : pts) {
        x0 = std::min(x0, p.x()); x1 = std::max(x1, p.x());
        y0 = std::min(y0, p.y()); y1 = std::max(y1, p.y());
    }
    if (!(x0 <= x1)) { x0 = y0 = 0; x1 = y1 = 1; }
    const double spanx = std::max(x1 - x0, 1e-12), spany = std::max(y1 - y0, 1e-12);
    const double scale = std::min((W - ML - MR) / spanx, (H - MT - MB) / spany) / 1.05;
    const double cx = (x0 + x1) / 2, cy = (y0 + y1) / 2;
    const auto X = [&](double v) { return (W + ML - MR) / 2 + (v - cx) * scale; };
    const auto Y = [&](double v) { return (H + MT - MB) / 2 - (v - cy) * scale; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" "
           "viewBox=\"0 0 640 420\">\n";
    svg += "<rect width=\"640\" height=\"420\" fill=\"#ffffff\"/>\n";
    svg += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"15\" fill=\"#000\">" + title + "</text>\n";
    for (const auto& s : segs)
        svg += "<line x1=\"" + px(X(pts[s[0]].x())) + "\" y1=\"" + px(Y(pts[s[0]].y())) +
               "\" x2=\"" + px(X(pts[s[1]].x())) + "\" y2=\"" + px(Y(pts[s[1]].y())) +
               "\" stroke=\"#1f77b4\" stroke-width=\"1.2\"/>\n";
    for (auto n : junction_nodes)
        svg += "<circle cx=\"" + px(X(pts[n].x())) + "\" cy=\"" + px(Y(pts[n].y())) +
               "\" r=\"4\" fill=\"#d62728\"/>\n";
    svg += "<text x=\"" + px((ML + W - MR) / 2) + "\" y=\"" + px(H - 12) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" fill=\"#000\">" +
           x_label + "</text>\n";
    svg += "<text x=\"18\" y=\"" + px((MT + H - MB) / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" fill=\"#000\" "
           "transform=\"rotate(-90 18 " + px((MT + H - MB) / 2) + ")\">" + y_label + "</text>\n";
    svg += "</svg>\n";
    return svg;
}

// ---------------------------------------------------------------------------
// Subcommands.

struct GenerateOpts {
    std::string model, out;
    double h = 0.05, extent = 2.0, cap = 4.0, shift = 0.0;
    double theta = std::numbers::pi / 6;
    double radius = 1.0, height = 4.0, h_x2 = 0.0;
};

void cmd_generate(const GenerateOpts& o) {
    SurfaceMesh m;
    if (o.model == "plane") m = make_vertical_plane(o.extent, o.h);
    else if (o.model == "grim-reaper") m = make_grim_reaper(o.extent, o.cap, o.h, o.shift, o.h_x2);
    else if (o.model == "tilted-grim-reaper")
        m = make_tilted_grim_reaper(o.theta, o.extent, o.cap, o.h);
    else if (o.model == "bowl") m = make_bowl_to_height(o.cap, o.h);
    else if (o.model == "bowl-graph") m = make_bowl_graph(o.extent, o.h);
    else if (o.model == "cylinder") m = make_round_cylinder(o.radius, o.height, o.h);
    else if (o.model == "saddle") m = make_saddle(SaddleKind::quadratic, o.extent, o.h);
    else if (o.model == "monkey-saddle") m = make_saddle(SaddleKind::monkey, o.extent, o.h);
    else
        throw BadInput("unknown model '" + o.model +
                       "' (expected plane, grim-reaper, tilted-grim-reaper, bowl, bowl-graph, "
                       "cylinder, saddle or monkey-saddle)");
    write_obj(m, o.out);
    std::printf("generate %s: %zu vertices, %zu triangles -> %s\n", o.model.c_str(),
                m.n_vertices(), m.n_triangles(), o.out.c_str());
}

struct DiagnoseOpts {
    std::string in, out, csv;
};

void cmd_diagnose(const DiagnoseOpts& o) {
    const SurfaceMesh m = read_obj(o.in);
    const DiagnosticsField field = compute_diagnostics(m);
    const QuasiconformalReport q = quasiconformal_defect(field);
    json j{{"schema", 1},
           {"kind", "diagnostics"},
           {"input", o.in},
           {"n_vertices", m.n_vertices()},
           {"n_triangles", m.n_triangles()},
           {"max_interior_residual", fnum(field.max_interior_residual)},
           {"interior_count", field.interior_count},
           {"max_identity_defect", fnum(q.max_identity_defect)},
           {"max_inequality_slack", fnum(q.max_inequality_slack)}};
    write_json(o.out, j);
    if (!o.csv.empty()) write_diagnostics_csv(m, field, o.csv);
    std::printf("diagnose %s: max interior residual %s over %d vertices -> %s\n", o.in.c_str(),
                g3(field.max_interior_residual).c_str(), field.interior_count, o.out.c_str());
}

struct SolveOpts {
    double width = 0, h = 0.02, half_length = 0;
    std::string levels = "5,10,20";
    std::string out, json_out;
};

void cmd_solve(const SolveOpts& o) {
    const std::vector<double> schedule = parse_list(o.levels, "levels");
    const SolverReport rep = make_delta_wing(o.width, schedule, o.h, {}, o.half_length);
    write_obj(rep.mesh, o.out);
    if (!o.json_out.empty()) {
        json stages = json::array();
        for (const auto& s : rep.stages)
            stages.push_back({{"boundary_level", fnum(s.boundary_level)},
                              {"newton_iterations", s.newton_iterations},
                              {"final_residual", fnum(s.final_residual)},
                              {"interior_difference", fnum(s.interior_difference)}});
        write_json(o.json_out, json{{"schema", 1},
                                    {"kind", "solve"},
                                    {"width", fnum(rep.width)},
                                    {"tilt", fnum(rep.tilt)},
                                    {"stages", stages}});
    }
    std::printf("solve: width %s, tilt %s, final residual %s after %zu stages -> %s\n",
                g6(rep.width).c_str(), g6(rep.tilt).c_str(),
                g3(rep.stages.back().final_residual).c_str(), rep.stages.size(), o.out.c_str());
}

struct EntropyOpts {
    std::string in, out;
    EntropyConfig cfg;
};

void cmd_entropy(const EntropyOpts& o) {
    const SurfaceMesh m = read_obj(o.in);
    const EntropyResult r = entropy(m, o.cfg);
    json j{{"schema", 1},
           {"kind", "entropy"},
           {"input", o.in},
           {"value", fnum(r.value)},
           {"tail_bound", fnum(r.tail_bound)},
           {"argmax", json{{"t0", fnum(r.argmax.t0)}, {"x0", vec3_json(r.argmax.x0)}}},
           {"evaluations", r.trace.size()},
           {"config", json{{"t_min", o.cfg.t_min},
                           {"t_max", o.cfg.t_max},
                           {"grid_per_axis", o.cfg.grid_per_axis},
                           {"grid_t", o.cfg.grid_t},
                           {"eval_budget", o.cfg.eval_budget},
                           {"refine_budget", o.cfg.refine_budget},
                           {"starts", o.cfg.starts},
                           {"seed", o.cfg.seed}}}};
    write_json(o.out, j);
    std::printf("entropy %s: %s (tail <= %s) at t0=%s, x0=(%s, %s, %s) -> %s\n", o.in.c_str(),
                g6(r.value).c_str(), g3(r.tail_bound).c_str(), g6(r.argmax.t0).c_str(),
                g6(r.argmax.x0.x()).c_str(), g6(r.argmax.x0.y()).c_str(),
                g6(r.argmax.x0.z()).c_str(), o.out.c_str());
}

struct BlowdownOpts {
    std::string in, out;
    std::string taus = "2,3,4,5";
    bool no_recenter = false;
    bool huisken = false;
    double t0 = 1.0;
    std::string y = "0,0,0";
};

void cmd_blowdown(const BlowdownOpts& o) {
    const SurfaceMesh m = read_obj(o.in);
    const std::vector<double> taus = parse_list(o.taus, "taus");
    if (o.huisken) {
        const Eigen::Vector3d y = parse_vec3(o.y, "y");
        const HuiskenResult r = huisken_check(m, y, o.t0, taus);
        write_json(o.out, json{{"schema", 1},
                               {"kind", "monotonicity"},
                               {"input", o.in},
                               {"t0", fnum(o.t0)},
                               {"y", vec3_json(y)},
                               {"taus", num_array(r.taus)},
                               {"values", num_array(r.values)},
                               {"tail_bounds", num_array(r.tail_bounds)},
                               {"translator_metadata", r.translator_metadata}});
        std::printf("monotonicity %s: F %s -> %s over %zu offsets -> %s\n", o.in.c_str(),
                    g6(r.values.front()).c_str(), g6(r.values.back()).c_str(), r.values.size(),
                    o.out.c_str());
        return;
    }
    std::vector<double> values;
    for (double tau : taus) values.push_back(blowdown_value(m, tau, !o.no_recenter));
    write_json(o.out, json{{"schema", 1},
                           {"kind", "blowdown"},
                           {"input", o.in},
                           {"recenter", !o.no_recenter},
                           {"taus", num_array(taus)},
                           {"values", num_array(values)}});
    std::printf("blowdown %s: F(tau=%s) = %s over %zu scales -> %s\n", o.in.c_str(),
                g6(taus.back()).c_str(), g6(values.back()).c_str(), values.size(), o.out.c_str());
}

struct SectionOpts {
    std::string in, out, svg, plane, normal, point;
};

void cmd_section(const SectionOpts& o) {
    const SurfaceMesh m = read_obj(o.in);
    PlaneSpec spec;
    if (!o.plane.empty()) {
        spec = parse_plane(o.plane);
    } else if (!o.normal.empty()) {
        spec.normal = parse_vec3(o.normal, "normal").normalized();
        if (!o.point.empty()) spec.point = parse_vec3(o.point, "point");
    } else {
        throw BadInput("section needs --plane x2=c or an explicit --normal");
    }
    const LevelSetResult r = plane_section(m, spec);

    json nodes = json::array(), segs = json::array(), comps = json::array(), juncs = json::array();
    for (const auto& p : r.nodes) nodes.push_back(vec3_json(p));
    for (const auto& s : r.segments) segs.push_back(json::array({s[0], s[1]}));
    for (const auto& c : r.components)
        comps.push_back({{"nodes", c.nodes}, {"segments", c.segments}, {"has_cycle", c.has_cycle}});
    for (const auto& ju : r.junctions)
        juncs.push_back(
            {{"node", ju.node}, {"degree", ju.degree}, {"multiplicity", ju.multiplicity}});
    write_json(o.out, json{{"schema", 1},
                           {"kind", "section"},
                           {"input", o.in},
                           {"plane", json{{"point", vec3_json(spec.point)},
                                          {"normal", vec3_json(spec.normal)}}},
                           {"nodes", nodes},
                           {"segments", segs},
                           {"components", comps},
                           {"junctions", juncs},
                           {"acyclic", r.acyclic()}});

    if (!o.svg.empty()) {
        // In-plane frame: u horizontal where possible, v = u x n (vertical
        // planes get v = e3 so the plot reads as a height profile).
        const Eigen::Vector3d n = spec.normal;
        Eigen::Vector3d u = n.cross(Eigen::Vector3d::UnitZ());
        if (u.norm() < 1e-12) u = Eigen::Vector3d::UnitX();
        u.normalize();
        const Eigen::Vector3d v = u.cross(n);
        std::vector<Eigen::Vector2d> pts;
        pts.reserve(r.nodes.size());
        for (const auto& p : r.nodes) {
            const Eigen::Vector3d d = p - spec.point;
            pts.emplace_back(d.dot(u), d.dot(v));
        }
        std::vector<std::int32_t> junction_nodes;
        for (const auto& ju : r.junctions) junction_nodes.push_back(ju.node);
        atomic_write_text(o.svg, segments_svg(pts, r.segments, junction_nodes, "in-plane u",
                                              spec.vertical() ? "x3" : "in-plane v",
                                              "plane section"));
    }
    std::printf("section %s: %zu nodes, %zu segments, %zu components, %zu junctions, %s -> %s\n",
                o.in.c_str(), r.nodes.size(), r.segments.size(), r.components.size(),
                r.junctions.size(), r.acyclic() ? "acyclic" : "has cycle", o.out.c_str());
}

struct SlabOpts {
    std::string in, out, svg, growth;
    std::string radii = "0.25,0.5,1,2,4,8";
    double tol = 0.0;
    int bins = 40;
};

const char* slab_kind_name(SlabKind k) {
    switch (k) {
        case SlabKind::line: return "line";
        case SlabKind::strip: return "strip";
        case SlabKind::half_plane: return "half_plane";
        default: return "plane";
    }
}

void cmd_slab(const SlabOpts& o) {
    const SurfaceMesh m = read_obj(o.in);
    const SlabReport slab = classify_slab(m, o.tol);
    json j{{"schema", 1},
           {"kind", "slab"},
           {"input", o.in},
           {"classification", slab_kind_name(slab.kind)},
           {"direction", json::array({fnum(slab.direction.x()), fnum(slab.direction.y())})},
           {"lo", fnum(slab.lo)},
           {"hi", fnum(slab.hi)},
           {"width", fnum(slab.width)},
           {"spread_lo", fnum(slab.spread_lo)},
           {"spread_hi", fnum(slab.spread_hi)},
           {"cross_spread", fnum(slab.cross_spread)},
           {"tol", fnum(slab.tol)}};

    std::string rates = "rates n/a";
    if (slab.kind != SlabKind::line) {
        const ApproachProfile prof = approach_profile(m, slab, o.bins);
        j["profile"] = json{{"heights", num_array(prof.heights)},
                            {"gap_lo", num_array(prof.gap_lo)},
                            {"gap_hi", num_array(prof.gap_hi)}};
        // The rate fit needs a monotone tail; a missing fit is information
        // about the surface, not a failure of the classification.
        try {
            j["rate_lo"] = fnum(approach_rate(prof.heights, prof.gap_lo));
            j["rate_hi"] = fnum(approach_rate(prof.heights, prof.gap_hi));
            rates = "rates (" + g6(j["rate_lo"].get<double>()) + ", " +
                    g6(j["rate_hi"].get<double>()) + ")";
        } catch (const NoMonotoneSubsequence&) {
        }
        if (!o.svg.empty()) {
            Series lo{prof.heights, prof.gap_lo, "gap to lower wall"};
            Series hi{prof.heights, prof.gap_hi, "gap to upper wall"};
            atomic_write_text(o.svg, line_plot_svg({lo, hi}, "x3", "wall gap",
                                                   "approach to the slab walls", true));
        }
    }
    if (!o.growth.empty()) {
        const Eigen::Vector2d q = parse_vec2(o.growth, "growth query");
        const GrowthProfile g = boundary_growth_profile(m, slab, q, parse_list(o.radii, "radii"));
        json samples = json::array();
        for (auto s : g.samples) samples.push_back(s);
        j["growth"] = json{{"q", json::array({fnum(q.x()), fnum(q.y())})},
                           {"radii", num_array(g.radii)},
                           {"sup_x3", num_array(g.sup_x3)},
                           {"samples", samples},
                           {"cap", fnum(g.cap)},
                           {"saturates_cap", g.saturates_cap}};
    }
    write_json(o.out, j);
    std::printf("slab %s: %s, width %s, %s -> %s\n", o.in.c_str(), slab_kind_name(slab.kind),
                g6(slab.width).c_str(), rates.c_str(), o.out.c_str());
}

// ---------------------------------------------------------------------------
// Report: tabulates artifact JSONs into markdown, with SVG figures for the
// sequence-valued kinds. Entropy rows must carry a tail bound; an entropy
// artifact without one is rejected rather than tabulated.

json load_artifact(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw BadInput("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    json j = json::parse(ss.str(), nullptr, false);
    if (j.is_discarded()) throw SchemaMismatch(path + ": not valid JSON");
    if (!j.is_object() || !j.contains("schema") || j["schema"] != 1)
        throw SchemaMismatch(path + ": expected an artifact with schema 1");
    if (!j.contains("kind") || !j["kind"].is_string())
        throw SchemaMismatch(path + ": artifact has no kind");
    return j;
}

std::string md_num(const json& v) {
    if (v.is_null()) return "n/a";
    return g6(v.get<double>());
}

std::string md_num3(const json& v) {
    if (v.is_null()) return "n/a";
    return g3(v.get<double>());
}

struct ReportOpts {
    std::vector<std::string> inputs;
    std::string out;
};

void cmd_report(const ReportOpts& o) {
    const std::filesystem::path out_path(o.out);
    const std::string stem = out_path.stem().string();
    const std::filesystem::path dir = out_path.parent_path();

    std::string entropy_rows, diag_rows, slab_rows, growth_rows, section_rows;
    std::string figures;
    int fig_count = 0;

    const auto add_figure = [&](const std::string& svg, const std::string& caption) {
        const std::string name = stem + "_fig" + std::to_string(fig_count++) + ".svg";
        atomic_write_text((dir / name).string(), svg);
        figures += "![" + caption + "](" + name + ")\n\n" + caption + "\n\n";
    };

    for (const auto& path : o.inputs) {
        const json j = load_artifact(path);
        const std::string kind = j["kind"].get<std::string>();
        const std::string input = j.value("input", path);
        if (kind == "entropy") {
            if (!j.contains("tail_bound") || !j["tail_bound"].is_number())
                throw SchemaMismatch(path + ": entropy value has no tail bound, refusing to tabulate");
            entropy_rows += "| " + input + " | " + md_num(j["value"]) + " | " +
                            md_num3(j["tail_bound"]) + " | " + md_num(j["argmax"]["t0"]) + " |\n";
        } else if (kind == "diagnostics") {
            diag_rows += "| " + input + " | " + md_num3(j["max_interior_residual"]) + " | " +
                         std::to_string(j["interior_count"].get<int>()) + " | " +
                         md_num3(j["max_identity_defect"]) + " |\n";
        } else if (kind == "slab") {
            const std::string rl = j.contains("rate_lo") ? md_num(j["rate_lo"]) : "n/a";
            const std::string rh = j.contains("rate_hi") ? md_num(j["rate_hi"]) : "n/a";
            slab_rows += "| " + input + " | " + j["classification"].get<std::string>() + " | " +
                         md_num(j["width"]) + " | " + rl + " | " + rh + " |\n";
            if (j.contains("growth")) {
                const json& g = j["growth"];
                const json& sup = g["sup_x3"];
                growth_rows += "| " + input + " | (" + md_num(g["q"][0]) + ", " +
                               md_num(g["q"][1]) + ") | " + md_num(g["radii"].back()) + " | " +
                               md_num(sup.back()) + " | " +
                               (g["saturates_cap"].get<bool>() ? "yes" : "no") + " |\n";
            }
            if (j.contains("profile")) {
                Series lo, hi;
                lo.label = "gap to lower wall";
                hi.label = "gap to upper wall";
                for (const auto& v : j["profile"]["heights"]) lo.x.push_back(v.get<double>());
                hi.x = lo.x;
                for (const auto& v : j["profile"]["gap_lo"])
                    lo.y.push_back(v.is_null() ? std::nan("") : v.get<double>());
                for (const auto& v : j["profile"]["gap_hi"])
                    hi.y.push_back(v.is_null() ? std::nan("") : v.get<double>());
                add_figure(line_plot_svg({lo, hi}, "x3", "wall gap", "wall approach: " + input, true),
                           "Wall approach for `" + input + "`.");
            }
        } else if (kind == "section") {
            std::size_t max_mult = 0;
            for (const auto& ju : j["junctions"])
                max_mult = std::max(max_mult, std::size_t(ju["multiplicity"].get<int>()));
            section_rows += "| " + input + " | " + std::to_string(j["components"].size()) + " | " +
                            std::to_string(j["junctions"].size()) + " | " +
                            std::to_string(max_mult) + " | " +
                            (j["acyclic"].get<bool>() ? "yes" : "no") + " |\n";
        } else if (kind == "blowdown") {
            Series s;
            for (const auto& v : j["taus"]) s.x.push_back(v.get<double>());
            for (const auto& v : j["values"])
                s.y.push_back(v.is_null() ? std::nan("") : v.get<double>());
            add_figure(line_plot_svg({s}, "tau", "F value", "blow-down convergence: " + input),
                       "Blow-down sequence for `" + input +
                           "`. Rescaled truncations carry no tail bound, so the values are "
                           "plotted, not tabulated.");
        } else if (kind == "monotonicity") {
            Series s;
            for (const auto& v : j["taus"]) s.x.push_back(v.get<double>());
            for (const auto& v : j["values"])
                s.y.push_back(v.is_null() ? std::nan("") : v.get<double>());
            std::string caption = "Gaussian-area monotonicity sequence for `" + input + "`.";
            if (!j.value("translator_metadata", false))
                caption += " The input is not marked as a translator; monotonicity is not "
                           "guaranteed for it.";
            add_figure(line_plot_svg({s}, "tau", "F value", "monotonicity: " + input), caption);
        } else if (kind == "solve") {
            Series s;
            double level = 0;
            for (const auto& st : j["stages"]) {
                s.x.push_back(st["boundary_level"].get<double>());
                s.y.push_back(st["final_residual"].get<double>());
                level = st["boundary_level"].get<double>();
            }
            (void)level;
            add_figure(line_plot_svg({s}, "boundary level", "final residual",
                                     "continuation residuals: " + input, true),
                       "Continuation stages for `" + input + "`.");
        } else {
            throw SchemaMismatch(path + ": unknown artifact kind '" + kind + "'");
        }
    }

    std::string md = "# Translator lab report\n\n";
    if (o.inputs.empty()) md += "No inputs.\n";
    if (!entropy_rows.empty())
        md += "## Entropy\n\n| input | value | tail bound | t0 at argmax |\n"
              "| --- | --- | --- | --- |\n" + entropy_rows + "\n";
    if (!diag_rows.empty())
        md += "## Surface diagnostics\n\n| input | max interior residual | interior vertices | "
              "identity defect |\n| --- | --- | --- | --- |\n" + diag_rows + "\n";
    if (!slab_rows.empty())
        md += "## Slab classification\n\n| input | kind | width | rate (lower wall) | rate "
              "(upper wall) |\n| --- | --- | --- | --- | --- |\n" + slab_rows + "\n";
    if (!growth_rows.empty())
        md += "## Boundary growth\n\n| input | query | largest radius | sup x3 | saturates cap "
              "|\n| --- | --- | --- | --- | --- |\n" + growth_rows + "\n";
    if (!section_rows.empty())
        md += "## Plane sections\n\n| input | components | junctions | max multiplicity | "
              "acyclic |\n| --- | --- | --- | --- | --- |\n" + section_rows + "\n";
    if (!figures.empty()) md += "## Figures\n\n" + figures;

    atomic_write_text(o.out, md);
    std::printf("report: %zu inputs, %d figures -> %s\n", o.inputs.size(), fig_count,
                o.out.c_str());
}

void print_error(const std::string& code, const std::string& kind, const std::string& message) {
    const json e{{"code", code}, {"kind", kind}, {"message", message}};
    std::fprintf(stderr, "%s\n", e.dump().c_str());
}

// key=value configuration files. The pairs are spliced into the argument
// list right after the subcommand name as --key=value tokens, so explicit
// flags, which come later and take-last, override the file.
std::vector<std::string> inject_config(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    if (args.size() < 2 || args[1].empty() || args[1][0] == '-') return args;
    std::string file;
    for (std::size_t i = 2; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) file = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) file = args[i].substr(9);
    }
    if (file.empty()) return args;
    std::ifstream in(file);
    if (!in) throw BadInput("cannot read config file '" + file + "'");
    const auto strip = [](const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::vector<std::string> injected;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        const std::string key = eq == std::string::npos ? "" : strip(line.substr(0, eq));
        if (key.empty())
            throw BadInput(file + ":" + std::to_string(lineno) + ": expected key=value");
        injected.push_back("--" + key + "=" + strip(line.substr(eq + 1)));
    }
    args.insert(args.begin() + 2, injected.begin(), injected.end());
    return args;
}

int run(int argc, char** argv) {
    CLI::App app{"numerical laboratory for translating solitons"};
    // --h is a real option (the sampling pitch), so help is --help only.
    app.set_help_flag("--help", "print help");
    app.set_version_flag("--version", "0.1.0");
    app.require_subcommand(0, 1);
    static std::string config_path;
    const auto sub = [&](const std::string& name, const std::string& desc) {
        auto* s = app.add_subcommand(name, desc);
        s->set_help_flag("--help", "print help");
        s->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        s->add_option("--config", config_path, "key=value configuration file");
        return s;
    };

    const std::set<std::string> known = {"generate", "diagnose", "solve",  "entropy",
                                         "blowdown", "section",  "slab",   "report"};
    if (argc >= 2 && argv[1][0] != '-' && !known.count(argv[1]))
        throw UnknownSubcommand(std::string("unknown subcommand '") + argv[1] + "'");

    GenerateOpts gen;
    auto* g = sub("generate", "create a model surface (OBJ plus metadata sidecar)");
    g->add_option("model", gen.model,
                  "plane | grim-reaper | tilted-grim-reaper | bowl | bowl-graph | cylinder | "
                  "saddle | monkey-saddle")
        ->required();
    g->add_option("--h", gen.h, "sampling pitch");
    g->add_option("--extent", gen.extent, "half extent of the sampled patch");
    g->add_option("--cap", gen.cap, "truncation height");
    g->add_option("--shift", gen.shift, "strip offset along x1 (grim-reaper)");
    g->add_option("--theta", gen.theta, "tilt angle in radians (tilted-grim-reaper)");
    g->add_option("--radius", gen.radius, "radius (cylinder)");
    g->add_option("--height", gen.height, "height (cylinder)");
    g->add_option("--hx2", gen.h_x2, "independent pitch along x2 (grim-reaper), 0 uses --h");
    g->add_option("-o,--out", gen.out, "output OBJ path")->required();
    g->callback([&] { cmd_generate(gen); });

    DiagnoseOpts diag;
    auto* d = sub("diagnose", "pointwise curvature and translator residual");
    d->add_option("input", diag.in, "input OBJ")->required();
    d->add_option("-o,--out", diag.out, "summary JSON path")->required();
    d->add_option("--csv", diag.csv, "also write the per-vertex table");
    d->callback([&] { cmd_diagnose(diag); });

    SolveOpts sol;
    auto* so = sub("solve", "continuation solve of the capped strip graph");
    so->add_option("--width", sol.width, "strip width b (must exceed pi)")->required();
    so->add_option("--h", sol.h, "grid pitch");
    so->add_option("--levels", sol.levels, "comma separated boundary levels");
    so->add_option("--half-length", sol.half_length, "truncation half length, 0 uses 0.6 b");
    so->add_option("-o,--out", sol.out, "output OBJ path")->required();
    so->add_option("--json", sol.json_out, "also write the stage record");
    so->callback([&] { cmd_solve(sol); });

    EntropyOpts ent;
    auto* e = sub("entropy", "sup of the Gaussian area over centers and scales");
    e->add_option("input", ent.in, "input OBJ")->required();
    e->add_option("--tmin", ent.cfg.t_min, "smallest Gaussian scale");
    e->add_option("--tmax", ent.cfg.t_max, "largest Gaussian scale");
    e->add_option("--grid", ent.cfg.grid_per_axis, "coarse grid points per axis");
    e->add_option("--grid-t", ent.cfg.grid_t, "coarse grid points in t0");
    e->add_option("--budget", ent.cfg.eval_budget, "total evaluation budget");
    e->add_option("--refine", ent.cfg.refine_budget, "refinement evaluation budget");
    e->add_option("--starts", ent.cfg.starts, "simplex restarts");
    e->add_option("--seed", ent.cfg.seed, "simplex jitter seed");
    e->add_option("-o,--out", ent.out, "output JSON path")->required();
    e->callback([&] { cmd_entropy(ent); });

    BlowdownOpts blow;
    auto* b = sub("blowdown",
                                 "Gaussian area of parabolic rescalings, or the monotone "
                                 "Gaussian-area sequence with --huisken");
    b->add_option("input", blow.in, "input OBJ")->required();
    b->add_option("--taus", blow.taus, "comma separated scales (offsets with --huisken)");
    b->add_flag("--no-recenter", blow.no_recenter, "keep the horizontal center as is");
    b->add_flag("--huisken", blow.huisken, "evaluate F at (y + tau e3, t0 + tau) instead");
    b->add_option("--t0", blow.t0, "base scale (with --huisken)");
    b->add_option("--y", blow.y, "base center (with --huisken)");
    b->add_option("-o,--out", blow.out, "output JSON path")->required();
    b->callback([&] { cmd_blowdown(blow); });

    SectionOpts sec;
    auto* sc = sub("section", "plane section as a polyline graph");
    sc->add_option("input", sec.in, "input OBJ")->required();
    sc->add_option("--plane", sec.plane, "coordinate plane, e.g. x2=0");
    sc->add_option("--normal", sec.normal, "plane normal a,b,c (alternative to --plane)");
    sc->add_option("--point", sec.point, "plane point x,y,z (with --normal)");
    sc->add_option("-o,--out", sec.out, "output JSON path")->required();
    sc->add_option("--svg", sec.svg, "also draw the section");
    sc->callback([&] { cmd_section(sec); });

    SlabOpts slb;
    auto* sl = sub("slab", "slab classification and wall approach");
    sl->add_option("input", slb.in, "input OBJ")->required();
    sl->add_option("--tol", slb.tol, "wall tolerance, 0 uses 3 grid pitches");
    sl->add_option("--bins", slb.bins, "height bins for the approach profile");
    sl->add_option("--growth", slb.growth, "wall point x1,x2 for a height growth profile");
    sl->add_option("--radii", slb.radii, "comma separated growth radii");
    sl->add_option("-o,--out", slb.out, "output JSON path")->required();
    sl->add_option("--svg", slb.svg, "also plot the wall gaps");
    sl->callback([&] { cmd_slab(slb); });

    ReportOpts rep;
    auto* r = sub("report", "tabulate artifact JSONs into markdown with figures");
    r->add_option("inputs", rep.inputs, "artifact JSONs from the other subcommands")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    r->add_option("-o,--out", rep.out, "output markdown path")->required();
    r->callback([&] { cmd_report(rep); });

    if (argc == 1) {
        std::printf("%s", app.help().c_str());
        return 0;
    }
    const std::vector<std::string> args = inject_config(argc, argv);
    std::vector<const char*> ptrs;
    for (const auto& a : args) ptrs.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(ptrs.size()), ptrs.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        throw BadInput(e.what());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const error& e) {
        const bool validation = e.kind() == error_kind::validation;
        print_error(e.code(), validation ? "validation" : "numerical", e.what());
        return validation ? 2 : 3;
    } catch (const std::exception& e) {
        print_error("Internal", "numerical", e.what());
        return 3;
    }
}
