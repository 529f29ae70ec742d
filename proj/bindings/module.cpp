// Python bindings. Results cross the boundary as plain dicts of numpy
// arrays and scalars; configuration enters as keyword arguments. The heavy
// entry points release the GIL, none of them call back into Python.

#include <cstdint>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "soliton/diagnostics.hpp"
#include "soliton/entropy.hpp"
#include "soliton/errors.hpp"
#include "soliton/generators.hpp"
#include "soliton/io.hpp"
#include "soliton/mesh.hpp"
#include "soliton/nodal.hpp"
#include "soliton/slab.hpp"
#include "soliton/solver.hpp"

namespace py = pybind11;
using namespace soliton;

namespace {

py::array_t<double> points_array(const std::vector<Eigen::Vector3d>& v) {
    py::array_t<double> a({py::ssize_t(v.size()), py::ssize_t(3)});
    auto r = a.mutable_unchecked<2>();
    for (py::ssize_t i = 0; i < py::ssize_t(v.size()); ++i)
        for (py::ssize_t k = 0; k < 3; ++k) r(i, k) = v[i][k];
    return a;
}

py::array_t<std::int32_t> tris_array(const std::vector<std::array<std::int32_t, 3>>& t) {
    py::array_t<std::int32_t> a({py::ssize_t(t.size()), py::ssize_t(3)});
    auto r = a.mutable_unchecked<2>();
    for (py::ssize_t i = 0; i < py::ssize_t(t.size()); ++i)
        for (py::ssize_t k = 0; k < 3; ++k) r(i, k) = t[i][k];
    return a;
}

py::dict levelset_dict(const LevelSetResult& r) {
    py::dict d;
    d["nodes"] = points_array(r.nodes);
    py::array_t<std::int32_t> segs({py::ssize_t(r.segments.size()), py::ssize_t(2)});
    auto sr = segs.mutable_unchecked<2>();
    for (py::ssize_t i = 0; i < py::ssize_t(r.segments.size()); ++i) {
        sr(i, 0) = r.segments[i][0];
        sr(i, 1) = r.segments[i][1];
    }
    d["segments"] = segs;
    d["n_components"] = r.components.size();
    d["acyclic"] = r.acyclic();
    py::list junctions;
    for (const auto& j : r.junctions) {
        py::dict jd;
        jd["node"] = j.node;
        jd["degree"] = j.degree;
        jd["multiplicity"] = j.multiplicity;
        junctions.append(jd);
    }
    d["junctions"] = junctions;
    return d;
}

py::dict slab_dict(const SlabReport& s) {
    const char* kind = s.kind == SlabKind::line         ? "line"
                       : s.kind == SlabKind::strip      ? "strip"
                       : s.kind == SlabKind::half_plane ? "half_plane"
                                                        : "plane";
    py::dict d;
    d["kind"] = kind;
    d["direction"] = Eigen::Vector2d(s.direction);
    d["lo"] = s.lo;
    d["hi"] = s.hi;
    d["width"] = s.width;
    d["spread_lo"] = s.spread_lo;
    d["spread_hi"] = s.spread_hi;
    d["cross_spread"] = s.cross_spread;
    d["tol"] = s.tol;
    return d;
}

EntropyConfig entropy_config(double t_min, double t_max, int grid_per_axis, int grid_t,
                             int eval_budget, int refine_budget, int starts,
                             std::uint64_t seed) {
    EntropyConfig cfg;
    cfg.t_min = t_min;
    cfg.t_max = t_max;
    cfg.grid_per_axis = grid_per_axis;
    cfg.grid_t = grid_t;
    cfg.eval_budget = eval_budget;
    cfg.refine_budget = refine_budget;
    cfg.starts = starts;
    cfg.seed = seed;
    return cfg;
}

} // namespace

PYBIND11_MODULE(_solitonlab, m) {
    m.doc() = "numerical laboratory for translating solitons of mean curvature flow";

    py::register_exception<error>(m, "SolitonError");

    py::class_<MeshMetadata>(m, "MeshMetadata")
        .def(py::init<>())
        .def_readwrite("generator", &MeshMetadata::generator)
        .def_readwrite("params", &MeshMetadata::params)
        .def_readwrite("grid_h", &MeshMetadata::grid_h)
        .def_readwrite("height_cap", &MeshMetadata::height_cap)
        .def_readwrite("area_growth_c", &MeshMetadata::area_growth_c)
        .def_readwrite("is_translator", &MeshMetadata::is_translator)
        .def_readwrite("closed", &MeshMetadata::closed);

    py::class_<SurfaceMesh>(m, "SurfaceMesh")
        .def(py::init<>())
        .def_property(
            "vertices", [](const SurfaceMesh& mm) { return points_array(mm.vertices); },
            [](SurfaceMesh& mm, py::array_t<double, py::array::c_style | py::array::forcecast> a) {
                if (a.ndim() != 2 || a.shape(1) != 3) throw BadInput("vertices must be (n, 3)");
                auto r = a.unchecked<2>();
                mm.vertices.resize(a.shape(0));
                for (py::ssize_t i = 0; i < a.shape(0); ++i)
                    mm.vertices[i] = {r(i, 0), r(i, 1), r(i, 2)};
            })
        .def_property(
            "triangles", [](const SurfaceMesh& mm) { return tris_array(mm.triangles); },
            [](SurfaceMesh& mm,
               py::array_t<std::int32_t, py::array::c_style | py::array::forcecast> a) {
                if (a.ndim() != 2 || a.shape(1) != 3) throw BadInput("triangles must be (m, 3)");
                auto r = a.unchecked<2>();
                mm.triangles.resize(a.shape(0));
                for (py::ssize_t i = 0; i < a.shape(0); ++i)
                    mm.triangles[i] = {r(i, 0), r(i, 1), r(i, 2)};
            })
        .def_readwrite("meta", &SurfaceMesh::meta)
        .def_property_readonly("n_vertices", &SurfaceMesh::n_vertices)
        .def_property_readonly("n_triangles", &SurfaceMesh::n_triangles)
        .def("total_area", &SurfaceMesh::total_area)
        .def("flip_orientation", &SurfaceMesh::flip_orientation)
        .def("transform", &SurfaceMesh::transform, py::arg("R"), py::arg("t"))
        .def("__repr__", [](const SurfaceMesh& mm) {
            return "<SurfaceMesh " + std::to_string(mm.n_vertices()) + " vertices, " +
                   std::to_string(mm.n_triangles()) + " triangles>";
        });

    // generators
    m.def("make_vertical_plane", &make_vertical_plane, py::arg("extent"), py::arg("h"));
    m.def("make_grim_reaper", &make_grim_reaper, py::arg("extent"), py::arg("cap"), py::arg("h"),
          py::arg("shift") = 0.0, py::arg("h_x2") = 0.0);
    m.def("make_tilted_grim_reaper", &make_tilted_grim_reaper, py::arg("theta"),
          py::arg("extent"), py::arg("cap"), py::arg("h"));
    m.def("make_bowl", &make_bowl, py::arg("r_max"), py::arg("h"));
    m.def("make_bowl_to_height", &make_bowl_to_height, py::arg("cap"), py::arg("h"));
    m.def("make_bowl_graph", &make_bowl_graph, py::arg("extent"), py::arg("h"));
    m.def("make_round_cylinder", &make_round_cylinder, py::arg("radius"), py::arg("height"),
          py::arg("h"));
    m.def(
        "make_saddle",
        [](const std::string& kind, double extent, double h) {
            if (kind == "quadratic") return make_saddle(SaddleKind::quadratic, extent, h);
            if (kind == "monkey") return make_saddle(SaddleKind::monkey, extent, h);
            throw BadInput("saddle kind must be 'quadratic' or 'monkey'");
        },
        py::arg("kind"), py::arg("extent"), py::arg("h"));

    // io
    m.def("read_obj", &read_obj, py::arg("path"));
    m.def("write_obj", &write_obj, py::arg("mesh"), py::arg("path"));

    // pointwise diagnostics
    m.def(
        "compute_diagnostics",
        [](const SurfaceMesh& mesh) {
            DiagnosticsField f;
            {
                py::gil_scoped_release release;
                f = compute_diagnostics(mesh);
            }
            const auto n = py::ssize_t(f.vertex.size());
            py::array_t<double> normal({n, py::ssize_t(3)});
            py::array_t<double> k1(n), k2(n), H(n), K(n), A2(n), residual(n);
            py::array_t<bool> near_boundary(n);
            auto rn = normal.mutable_unchecked<2>();
            auto r1 = k1.mutable_unchecked<1>(), r2 = k2.mutable_unchecked<1>();
            auto rH = H.mutable_unchecked<1>(), rK = K.mutable_unchecked<1>();
            auto rA = A2.mutable_unchecked<1>(), rr = residual.mutable_unchecked<1>();
            auto rb = near_boundary.mutable_unchecked<1>();
            for (py::ssize_t i = 0; i < n; ++i) {
                const auto& v = f.vertex[i];
                for (py::ssize_t k = 0; k < 3; ++k) rn(i, k) = v.normal[k];
                r1(i) = v.k1; r2(i) = v.k2;
                rH(i) = v.H; rK(i) = v.K;
                rA(i) = v.A2; rr(i) = v.residual;
                rb(i) = v.near_boundary;
            }
            const QuasiconformalReport q = quasiconformal_defect(f);
            py::dict d;
            d["normal"] = normal;
            d["k1"] = k1; d["k2"] = k2;
            d["H"] = H; d["K"] = K;
            d["A2"] = A2; d["residual"] = residual;
            d["near_boundary"] = near_boundary;
            d["max_interior_residual"] = f.max_interior_residual;
            d["interior_count"] = f.interior_count;
            d["max_identity_defect"] = q.max_identity_defect;
            d["max_inequality_slack"] = q.max_inequality_slack;
            return d;
        },
        py::arg("mesh"));

    // Gaussian area and entropy
    m.def(
        "f_functional",
        [](const SurfaceMesh& mesh, const Eigen::Vector3d& x0, double t0) {
            const FResult r = f_functional(mesh, {x0, t0});
            return py::make_tuple(r.value, r.tail_bound);
        },
        py::arg("mesh"), py::arg("x0"), py::arg("t0"),
        "Gaussian area at one center, returned as (value, tail_bound).");
    m.def(
        "entropy",
        [](const SurfaceMesh& mesh, double t_min, double t_max, int grid_per_axis, int grid_t,
           int eval_budget, int refine_budget, int starts, std::uint64_t seed) {
            EntropyResult r;
            {
                py::gil_scoped_release release;
                r = entropy(mesh, entropy_config(t_min, t_max, grid_per_axis, grid_t, eval_budget,
                                                 refine_budget, starts, seed));
            }
            py::dict d;
            d["value"] = r.value;
            d["tail_bound"] = r.tail_bound;
            d["t0"] = r.argmax.t0;
            d["x0"] = Eigen::Vector3d(r.argmax.x0);
            d["evaluations"] = r.trace.size();
            return d;
        },
        py::arg("mesh"), py::arg("t_min") = 1e-2, py::arg("t_max") = 1e4,
        py::arg("grid_per_axis") = 4, py::arg("grid_t") = 13, py::arg("eval_budget") = 2000,
        py::arg("refine_budget") = 500, py::arg("starts") = 5, py::arg("seed") = 0);
    m.def(
        "blowdown_value",
        [](const SurfaceMesh& mesh, double tau, bool recenter) {
            py::gil_scoped_release release;
            return blowdown_value(mesh, tau, recenter);
        },
        py::arg("mesh"), py::arg("tau"), py::arg("recenter") = true);
    m.def(
        "huisken_check",
        [](const SurfaceMesh& mesh, const Eigen::Vector3d& y, double t0,
           const std::vector<double>& taus) {
            HuiskenResult r;
            {
                py::gil_scoped_release release;
                r = huisken_check(mesh, y, t0, taus);
            }
            py::dict d;
            d["taus"] = r.taus;
            d["values"] = r.values;
            d["tail_bounds"] = r.tail_bounds;
            d["translator_metadata"] = r.translator_metadata;
            return d;
        },
        py::arg("mesh"), py::arg("y"), py::arg("t0"), py::arg("taus"));
    m.def(
        "check_additivity",
        [](const SurfaceMesh& a, const SurfaceMesh& b) {
            AdditivityResult r;
            {
                py::gil_scoped_release release;
                r = check_additivity(a, b);
            }
            py::dict d;
            d["lambda_a"] = r.lambda_a;
            d["lambda_b"] = r.lambda_b;
            d["lambda_union"] = r.lambda_union;
            d["defect"] = r.defect;
            return d;
        },
        py::arg("a"), py::arg("b"));

    // slab structure
    m.def(
        "classify_slab",
        [](const SurfaceMesh& mesh, double tol) { return slab_dict(classify_slab(mesh, tol)); },
        py::arg("mesh"), py::arg("tol") = 0.0);
    m.def(
        "approach_profile",
        [](const SurfaceMesh& mesh, double tol, int bins) {
            const SlabReport slab = classify_slab(mesh, tol);
            const ApproachProfile p = approach_profile(mesh, slab, bins);
            py::dict d;
            d["heights"] = p.heights;
            d["gap_lo"] = p.gap_lo;
            d["gap_hi"] = p.gap_hi;
            return d;
        },
        py::arg("mesh"), py::arg("tol") = 0.0, py::arg("bins") = 40);
    m.def("approach_rate", &approach_rate, py::arg("heights"), py::arg("gaps"));

    // nodal structure
    m.def(
        "plane_section",
        [](const SurfaceMesh& mesh, const Eigen::Vector3d& normal, const Eigen::Vector3d& point) {
            PlaneSpec spec;
            spec.normal = normal;
            spec.point = point;
            return levelset_dict(plane_section(mesh, spec));
        },
        py::arg("mesh"), py::arg("normal"), py::arg("point") = Eigen::Vector3d::Zero().eval());
    m.def(
        "level_set_on_mesh",
        [](const SurfaceMesh& mesh, const std::vector<double>& values, double level) {
            return levelset_dict(level_set_on_mesh(mesh, values, level));
        },
        py::arg("mesh"), py::arg("values"), py::arg("level") = 0.0);
    m.def("nodal_pde_residual", &nodal_pde_residual, py::arg("mesh"), py::arg("f"));
    m.def("h_equation_residual", &h_equation_residual, py::arg("mesh"));

    // strip graph continuation solve
    m.def(
        "make_delta_wing",
        [](double b, const std::vector<double>& schedule, double h, double half_length) {
            SolverReport r;
            {
                py::gil_scoped_release release;
                r = make_delta_wing(b, schedule, h, {}, half_length);
            }
            py::dict d;
            d["mesh"] = r.mesh;
            d["width"] = r.width;
            d["tilt"] = r.tilt;
            py::list stages;
            for (const auto& s : r.stages) {
                py::dict sd;
                sd["boundary_level"] = s.boundary_level;
                sd["newton_iterations"] = s.newton_iterations;
                sd["final_residual"] = s.final_residual;
                sd["interior_difference"] = s.interior_difference;
                stages.append(sd);
            }
            d["stages"] = stages;
            return d;
        },
        py::arg("b"), py::arg("schedule"), py::arg("h"), py::arg("half_length") = 0.0);
}
