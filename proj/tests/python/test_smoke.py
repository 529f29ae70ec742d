"""End-to-end smoke of the python bindings. Runs standalone or under pytest."""

import math
import os
import tempfile

import numpy as np

import solitonlab as sl


# extent > pi/2 so the minimal-width direction of the footprint is the
# strip axis, not the truncated x2 sides
def reaper(h=0.1, extent=1.8, cap=3.0):
    return sl.make_grim_reaper(extent=extent, cap=cap, h=h)


def test_generate_and_mesh_access():
    m = reaper()
    v = m.vertices
    t = m.triangles
    assert v.ndim == 2 and v.shape[1] == 3
    assert t.ndim == 2 and t.shape[1] == 3
    assert m.n_vertices == v.shape[0]
    assert m.n_triangles == t.shape[0]
    assert t.min() >= 0 and t.max() < v.shape[0]
    assert m.meta.is_translator
    assert 2.5 < m.meta.height_cap <= 3.0 + 1e-9
    assert m.total_area() > 0
    # graph of -log cos(x1 + pi/2): strip (-pi, 0), heights in [0, cap]
    assert v[:, 0].min() > -math.pi and v[:, 0].max() < 0
    assert v[:, 2].min() >= 0 and v[:, 2].max() <= 3.0 + 1e-9


def test_diagnostics():
    d = sl.compute_diagnostics(reaper())
    assert d["max_interior_residual"] < 1e-2  # second order in the 0.1 pitch
    assert d["interior_count"] > 0
    assert d["max_identity_defect"] < 1e-10
    assert d["H"].shape == d["residual"].shape
    interior = ~d["near_boundary"]
    assert np.abs(d["residual"][interior]).max() <= d["max_interior_residual"] + 1e-15


def test_entropy():
    r = sl.entropy(reaper(), t_max=1e3, refine_budget=150, starts=2)
    assert 1.0 <= r["value"] <= 2.2
    assert r["tail_bound"] >= 0
    assert r["t0"] > 0
    # determinism for a fixed seed
    again = sl.entropy(reaper(), t_max=1e3, refine_budget=150, starts=2)
    assert again["value"] == r["value"]
    v, tail = sl.f_functional(reaper(), np.array(r["x0"]), r["t0"])
    assert abs(v - r["value"]) <= 1e-12 + tail


def test_section_and_slab():
    m = reaper()
    s = sl.plane_section(m, normal=np.array([0.0, 1.0, 0.0]))
    assert s["acyclic"]
    assert len(s["segments"]) == len(s["nodes"]) - s["n_components"]
    slab = sl.classify_slab(m)
    assert slab["kind"] == "strip"
    assert abs(slab["direction"][0]) == 1.0
    assert abs(slab["width"] - math.pi) < 0.15
    prof = sl.approach_profile(m, bins=30)
    rate = sl.approach_rate(prof["heights"], prof["gap_lo"])
    # unit exponential wall approach, inflated by the truncation offset
    assert 0.8 < rate < 2.5


def test_obj_roundtrip():
    m = reaper()
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "m.obj")
        sl.write_obj(m, path)
        back = sl.read_obj(path)
        assert back.n_vertices == m.n_vertices
        assert back.meta.generator == m.meta.generator
        assert np.allclose(back.vertices, m.vertices)


def test_solver():
    r = sl.make_delta_wing(3.8, [1.0, 2.0], 0.12)
    assert r["stages"][-1]["final_residual"] < 1e-9
    assert abs(r["tilt"] - math.tan(math.acos(math.pi / 3.8))) < 1e-12
    assert r["mesh"].n_vertices > 0


def test_errors():
    try:
        sl.make_grim_reaper(extent=1.0, cap=-1.0, h=0.1)
    except sl.SolitonError:
        pass
    else:
        raise AssertionError("expected SolitonError")


if __name__ == "__main__":
    test_generate_and_mesh_access()
    test_diagnostics()
    test_entropy()
    test_section_and_slab()
    test_obj_roundtrip()
    test_solver()
    test_errors()
    print("python smoke ok")
