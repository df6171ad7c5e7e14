import math

import numpy as np
import pytest

from conftest import random_points
from d8span.analysis import (
    BOUND_RTOL,
    PATH_FACTOR,
    STRETCH_BOUND,
    audit_anchor_cones,
    audit_canonical_paths,
    audit_charged_cones,
    audit_extremal_cone,
    audit_shared_triangles,
    audit_wedge_angles,
    canonical_bound,
    degree_audit,
    distance_matrix,
    edge_bound_check,
    lemma_audits,
    run_audits,
    stretch_vs_dt,
    subgraph_audit,
    witness_path,
)
from d8span.builder import EdgeSelection, Provenance, construct_d8
from d8span.delaunay import (
    build_dt,
    canonical_subgraph,
    edge_key,
    triangulation_from_triangles,
)
from d8span.geometry import PointSet, cone_index, euclid


def test_constants():
    assert PATH_FACTOR == pytest.approx(2 * math.pi / (3 * math.sqrt(3)), rel=1e-15)
    assert STRETCH_BOUND == pytest.approx(2.2091995761561452, rel=1e-12)
    assert abs(STRETCH_BOUND - 2.2091996) < 1e-7


# ---------------------------------------------------------------------------
# distance matrix


def _floyd_warshall(ps, edges):
    n = len(ps)
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0.0)
    for u, v in edges:
        w = euclid(ps[u], ps[v])
        d[u, v] = d[v, u] = w
    for k in range(n):
        d = np.minimum(d, d[:, k, None] + d[None, k, :])
    return d


def test_distance_matrix_matches_floyd_warshall():
    ps = random_points(1, 25)
    T, sel = construct_d8(ps)
    got = distance_matrix(ps, sel.d8_edges)
    want = _floyd_warshall(ps, sel.d8_edges)
    assert np.allclose(got, want, rtol=1e-12)


# ---------------------------------------------------------------------------
# degree and subgraph audits


def test_degree_audit_two_points():
    T, sel = construct_d8(PointSet.from_pairs([(0, 0), (1, 2)]))
    d = degree_audit(T, sel)
    assert d["max_degree"] == 1
    assert d["histogram"] == {1: 2}


def test_degree_audit_triangle():
    T, sel = construct_d8(PointSet.from_pairs([(0, 0), (4, 1), (1, 5)]))
    assert degree_audit(T, sel)["max_degree"] <= 2


def test_subgraph_audit_passes(small_instance):
    ps, T, sel = small_instance
    v = subgraph_audit(T, sel, debug_crossings=True)
    assert v["passed"] and not v["crossings"]


def test_subgraph_audit_negative_control(small_instance):
    ps, T, sel = small_instance
    fake = (0, 1) if (0, 1) not in T.edges else (0, 2)
    # ensure the injected edge really is outside DT
    while fake in T.edges:
        fake = (fake[0], fake[1] + 1)
    bad = EdgeSelection(e_a=sel.e_a, e_can=sel.e_can | {fake})
    v = subgraph_audit(T, bad)
    assert not v["passed"]
    assert fake in v["non_dt_edges"]


# ---------------------------------------------------------------------------
# stretch


def test_stretch_two_points():
    T, sel = construct_d8(PointSet.from_pairs([(0, 0), (1, 2)]))
    s = stretch_vs_dt(T, sel)
    assert s.all_pairs_max_ratio_vs_dt == pytest.approx(1.0)
    assert s.ok


def test_stretch_bound_holds(small_instance):
    ps, T, sel = small_instance
    s = stretch_vs_dt(T, sel)
    assert s.ok
    assert s.max_edge_ratio <= STRETCH_BOUND + BOUND_RTOL
    assert s.all_pairs_max_ratio_vs_dt <= STRETCH_BOUND + BOUND_RTOL
    assert s.all_pairs_max_ratio_vs_dt >= 1 - 1e-12
    assert s.all_pairs_max_ratio_vs_euclid >= s.all_pairs_max_ratio_vs_dt - 1e-12


def test_stretch_disconnected_flagged(small_instance):
    ps, T, sel = small_instance
    empty = EdgeSelection(e_a=frozenset(), e_can=frozenset())
    s = stretch_vs_dt(T, empty)
    assert not s.connected and not s.ok


def test_edge_bound_check_direct_edge(small_instance):
    ps, T, sel = small_instance
    u, v = sorted(sel.e_a)[0]
    delta, cb, eb = edge_bound_check(T, sel, u, v)
    assert delta == pytest.approx(euclid(ps[u], ps[v]), rel=1e-12)
    assert delta <= cb * (1 + BOUND_RTOL) <= eb * (1 + 2 * BOUND_RTOL)


def test_edge_bound_check_rejects_non_dt_edge(small_instance):
    ps, T, sel = small_instance
    non_edge = next(
        (u, v)
        for u in range(len(ps))
        for v in range(u + 1, len(ps))
        if (u, v) not in T.edges
    )
    with pytest.raises(ValueError):
        edge_bound_check(T, sel, *non_edge)


def test_canonical_bound_symmetric_on_bisector():
    # q straight up from p: the triangle corners are mirror images
    ps = PointSet.from_pairs([(0, 0), (0.001, 4), (3, 1.2), (-3.1, 1.3)])
    T, sel = construct_d8(ps)
    b = canonical_bound(ps, 0, 1)
    d = euclid(ps[0], ps[1])
    assert b <= STRETCH_BOUND * d * (1 + BOUND_RTOL)


def test_canonical_bound_below_euclid_bound_everywhere():
    for seed in range(20):
        ps = random_points(seed + 900, 40)
        T = build_dt(ps)
        for u, v in T.edges:
            cb = canonical_bound(ps, u, v)
            eb = STRETCH_BOUND * euclid(ps[u], ps[v])
            assert cb <= eb * (1 + BOUND_RTOL)


# ---------------------------------------------------------------------------
# witness paths


def _check_all_witnesses(ps, T, sel):
    d8 = distance_matrix(ps, sel.d8_edges)
    traces = set()
    for u, v in sorted(T.edges):
        w = witness_path(T, sel, u, v)
        assert w.vertices[0] == u and w.vertices[-1] == v
        for a, b in zip(w.vertices, w.vertices[1:]):
            assert sel.has_d8_edge(a, b)
        assert w.length >= d8[u, v] - 1e-9 * max(w.length, 1.0)
        cb = canonical_bound(ps, u, v)
        assert w.length <= cb * (1 + BOUND_RTOL)
        traces.add(w.trace[0])
    return traces


def test_witness_direct_edge(small_instance):
    ps, T, sel = small_instance
    u, v = sorted(sel.e_a)[0]
    w = witness_path(T, sel, u, v)
    assert w.vertices == [u, v] and w.trace == ["direct"]


def test_witness_all_edges_small():
    traces = set()
    for seed in range(20):
        ps = random_points(seed + 1100, 60)
        T, sel = construct_d8(ps)
        traces |= _check_all_witnesses(ps, T, sel)
    # the easy dispatch cases all occur in a modest sample
    assert "direct" in traces
    assert any(t.startswith("ideal") or t == "anchor" for t in traces)


def test_witness_exercises_hard_cases():
    # look over a wider sweep for the concatenation and recursion cases
    seen = set()
    for seed in range(120):
        ps = random_points(seed + 1300, 50)
        T, sel = construct_d8(ps)
        d8 = None
        for u, v in sorted(T.edges):
            w = witness_path(T, sel, u, v)
            for step in w.trace:
                seen.add(step)
        if {"concat", "recurse"} <= seen:
            break
    assert "concat" in seen
    assert "recurse" in seen


def test_witness_rejects_non_dt_edge(small_instance):
    ps, T, sel = small_instance
    non_edge = next(
        (u, v)
        for u in range(len(ps))
        for v in range(u + 1, len(ps))
        if (u, v) not in T.edges
    )
    with pytest.raises(ValueError):
        witness_path(T, sel, *non_edge)


# ---------------------------------------------------------------------------
# structural audits: positive sweep


def test_lemma_audits_pass_on_random_instances():
    for seed in range(25):
        ps = random_points(seed + 1500, 70)
        T, sel = construct_d8(ps)
        for v in lemma_audits(T, sel):
            assert v.passed, (seed, v.name, v.counterexample)


def test_lemma_audits_trivial_instances():
    for pts in ([(1, 2)], [(0, 0), (1, 2)], [(0, 0), (4, 1), (1, 5)]):
        T, sel = construct_d8(PointSet.from_pairs(pts))
        assert all(v.passed for v in lemma_audits(T, sel))


# ---------------------------------------------------------------------------
# structural audits: negative controls


def find_canonical_path_corruption(max_seed=60):
    """An instance plus an injected incident edge whose canonical subgraph is
    not a path."""
    for seed in range(max_seed):
        ps = random_points(seed + 1700, 50)
        T, sel = construct_d8(ps)
        for u, v in sorted(T.edges - sel.e_a):
            for p, r in ((u, v), (v, u)):
                if not canonical_subgraph(T, p, r).is_path():
                    bad = EdgeSelection(
                        e_a=sel.e_a | {edge_key(p, r)}, e_can=sel.e_can
                    )
                    return T, bad
    return None


def test_canonical_path_negative_control():
    found = find_canonical_path_corruption()
    assert found is not None
    T, bad = found
    assert not audit_canonical_paths(T, bad).passed


def wedge_violation_fixture():
    # non-Delaunay fan: the middle neighbour is pulled far from the apex, so
    # its angle facing the apex collapses well below 2*pi/3
    pts = [(0, 0), (-1, 3), (0.05, 6), (1, 3)]
    ps = PointSet.from_pairs(pts)
    T = triangulation_from_triangles(ps, [(0, 1, 2), (0, 2, 3)])
    sel = EdgeSelection(e_a=frozenset(), e_can=frozenset())
    return T, sel


def test_wedge_negative_control():
    T, sel = wedge_violation_fixture()
    v = audit_wedge_angles(T, sel)
    assert not v.passed
    assert v.counterexample["apex"] == 0


def shared_triangle_violation_fixture():
    # two non-Delaunay triangles over the same near-vertical base: both are
    # shared triangles with base (0, 1)
    pts = [(0, 0), (0.1, 10), (-0.5, 5.2), (0.5, 4.9)]
    ps = PointSet.from_pairs(pts)
    T = triangulation_from_triangles(ps, [(0, 1, 2), (0, 1, 3)])
    sel = EdgeSelection(e_a=frozenset(), e_can=frozenset())
    return T, sel


def test_shared_triangle_negative_control():
    T, sel = shared_triangle_violation_fixture()
    v = audit_shared_triangles(T, sel)
    assert not v.passed
    assert v.counterexample["reason"] == "base shared twice"
    assert v.counterexample["base"] == (0, 1)


def anchor_cone_violation_fixture():
    """Fan with an inner anchor r, plus an extra edge at r occupying one of
    the flank cones the audit requires to be empty."""
    pts = [(0, 0), (-1, 5.6), (0.1, 4.9), (1.2, 5.5), (2.5, 4.2)]
    ps = PointSet.from_pairs(pts)
    T = triangulation_from_triangles(
        ps, [(0, 1, 2), (0, 2, 3), (2, 3, 4)]
    )
    # (0, 2) selected; r=2 is the inner anchor of its subgraph; the injected
    # canonical edge (2, 4) sits in cone 2 of r
    sel = EdgeSelection(e_a=frozenset({(0, 2)}), e_can=frozenset({(2, 4)}))
    return T, sel


def test_anchor_cone_negative_control():
    T, sel = anchor_cone_violation_fixture()
    ps = T.points
    can = canonical_subgraph(T, 0, 2)
    assert can.vertices == (1, 2, 3) and can.roles[2] == "anchor"  # sanity
    assert cone_index(ps[2], ps[4]) == 2
    assert not audit_anchor_cones(T, sel).passed


def extremal_cone_violation_fixture():
    # hand-built fan where the last canonical edge of the subgraph points
    # back up into the apex cone at its end vertex
    pts = [(0, 0), (-1, 4), (0.7, 5.2), (0.9, 4.0)]
    ps = PointSet.from_pairs(pts)
    T = triangulation_from_triangles(ps, [(0, 1, 2), (0, 2, 3)])
    sel = EdgeSelection(e_a=frozenset({(0, 1)}), e_can=frozenset())
    return T, sel


def test_extremal_cone_negative_control():
    T, sel = extremal_cone_violation_fixture()
    can = canonical_subgraph(T, 0, 1)
    assert can.vertices == (1, 2, 3)  # fixture sanity
    v = audit_extremal_cone(T, sel)
    assert not v.passed
    assert v.counterexample["edge"] == (2, 3)


def test_charged_cone_negative_control(small_instance):
    ps, T, sel = small_instance
    # fabricate a boundary-cone provenance entry pointing at a cone that
    # holds a selected incident edge
    p, q = sorted(sel.e_a)[0]
    j = cone_index(ps[p], ps[q])
    some_can_edge = sorted(sel.e_can)[0]
    bad = EdgeSelection(
        e_a=sel.e_a,
        e_can=sel.e_can,
        provenance={
            some_can_edge: [
                Provenance("4b", apex=q, anchor=p, end_vertex=p, cone=j)
            ]
        },
    )
    assert not audit_charged_cones(T, bad).passed


def test_run_audits_report(small_instance):
    ps, T, sel = small_instance
    rep = run_audits(T, sel, debug_crossings=True)
    assert rep.ok
    assert rep.degrees["max_degree"] <= 8
    assert all(v.passed for v in rep.lemmas)
    assert rep.stretch is not None and rep.stretch.ok
