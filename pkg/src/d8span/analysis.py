"""Per-instance verification of the construction's guarantees.

Degree and planarity audits, stretch measurement against the triangulation
and the complete graph, per-edge path bounds with canonical-triangle
comparisons, constructive witness paths, and structural audits of the claims
the degree proof rests on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as _csgraph_dijkstra

from .builder import ConstructionError, EdgeSelection
from .delaunay import Triangulation, canonical_subgraph, cone_neighbourhood, edge_key
from .geometry import (
    PointSet,
    bisector_distance,
    canonical_triangle,
    cone_index,
    euclid,
    orient,
)

THETA = math.pi / 3
#: theta / sin(theta) = 2*pi / (3*sqrt(3))
PATH_FACTOR = THETA / math.sin(THETA)
#: per-edge stretch bound 1 + theta/sin(theta), about 2.2092
STRETCH_BOUND = 1.0 + PATH_FACTOR

BOUND_RTOL = 1e-9


# ---------------------------------------------------------------------------
# Shortest paths


def distance_matrix(ps: PointSet, edges) -> np.ndarray:
    """All-pairs shortest-path matrix over the given edges with Euclidean
    weights."""
    n = len(ps)
    if n == 0:
        return np.zeros((0, 0))
    rows, cols, vals = [], [], []
    for u, v in edges:
        w = euclid(ps[u], ps[v])
        rows.append(u)
        cols.append(v)
        vals.append(w)
    m = csr_matrix((vals, (rows, cols)), shape=(n, n))
    return _csgraph_dijkstra(m, directed=False)


# ---------------------------------------------------------------------------
# Degree and subgraph audits


def degree_audit(T: Triangulation, sel: EdgeSelection):
    """Degree histogram and maxima of the selected graph (and of the
    incident-only subset)."""
    n = len(T.points)
    deg = [0] * n
    for u, v in sel.d8_edges:
        deg[u] += 1
        deg[v] += 1
    deg_a = [0] * n
    for u, v in sel.e_a:
        deg_a[u] += 1
        deg_a[v] += 1
    hist: dict[int, int] = {}
    for d in deg:
        hist[d] = hist.get(d, 0) + 1
    return {
        "histogram": dict(sorted(hist.items())),
        "max_degree": max(deg, default=0),
        "e_a_max_degree": max(deg_a, default=0),
    }


def _segments_cross(a, b, c, d) -> bool:
    """Proper crossing of segments (a,b) and (c,d) with no shared endpoint."""
    return (
        orient(a, b, c) * orient(a, b, d) < 0
        and orient(c, d, a) * orient(c, d, b) < 0
    )


def subgraph_audit(T: Triangulation, sel: EdgeSelection, *, debug_crossings=False):
    """Verify the selection is a subset of the triangulation's edges; with
    ``debug_crossings`` also run an O(E^2) segment-intersection check."""
    offenders = [e for e in sel.d8_edges if e not in T.edges]
    crossings = []
    if debug_crossings and not offenders:
        ps = T.points
        edges = sorted(sel.d8_edges)
        for k, (u, v) in enumerate(edges):
            for x, y in edges[k + 1 :]:
                if len({u, v, x, y}) < 4:
                    continue
                if _segments_cross(ps[u], ps[v], ps[x], ps[y]):
                    crossings.append(((u, v), (x, y)))
    return {
        "passed": not offenders and not crossings,
        "non_dt_edges": offenders,
        "crossings": crossings,
    }


# ---------------------------------------------------------------------------
# Stretch


@dataclass
class EdgeStretch:
    path_length: float
    euclidean: float
    euclid_bound: float
    canonical_bound: float


@dataclass
class StretchReport:
    per_dt_edge: dict[tuple[int, int], EdgeStretch]
    max_edge_ratio: float
    all_pairs_max_ratio_vs_dt: float
    all_pairs_max_ratio_vs_euclid: float
    connected: bool

    @property
    def ok(self) -> bool:
        if not self.connected:
            return False
        for e, s in self.per_dt_edge.items():
            if s.path_length > s.canonical_bound * (1 + BOUND_RTOL):
                return False
            if s.canonical_bound > s.euclid_bound * (1 + BOUND_RTOL):
                return False
        return self.all_pairs_max_ratio_vs_dt <= STRETCH_BOUND + BOUND_RTOL


def canonical_bound(ps: PointSet, p: int, q: int) -> float:
    """max{|pa| + (theta/sin theta)|aq|, |pb| + (theta/sin theta)|bq|} over
    the corners a, b of the canonical triangle of (p, q)."""
    tri = canonical_triangle(ps[p], ps[q])
    qq = ps[q]
    pa = math.dist((ps[p].x, ps[p].y), tri.a)
    pb = math.dist((ps[p].x, ps[p].y), tri.b)
    aq = math.dist(tri.a, (qq.x, qq.y))
    bq = math.dist(tri.b, (qq.x, qq.y))
    return max(pa + PATH_FACTOR * aq, pb + PATH_FACTOR * bq)


def stretch_vs_dt(
    T: Triangulation,
    sel: EdgeSelection,
    *,
    d8_dist: Optional[np.ndarray] = None,
    dt_dist: Optional[np.ndarray] = None,
) -> StretchReport:
    ps = T.points
    n = len(ps)
    if d8_dist is None:
        d8_dist = distance_matrix(ps, sel.d8_edges)
    if dt_dist is None:
        dt_dist = distance_matrix(ps, T.edges)
    connected = n < 2 or bool(np.all(np.isfinite(d8_dist)))
    if not connected:
        return StretchReport({}, math.inf, math.inf, math.inf, connected=False)
    per_edge = {}
    max_edge_ratio = 1.0 if T.edges else 0.0
    for u, v in T.edges:
        d = euclid(ps[u], ps[v])
        s = EdgeStretch(
            path_length=float(d8_dist[u, v]),
            euclidean=d,
            euclid_bound=STRETCH_BOUND * d,
            canonical_bound=canonical_bound(ps, u, v),
        )
        per_edge[(u, v)] = s
        if d > 0:
            max_edge_ratio = max(max_edge_ratio, s.path_length / d)
    if n >= 2:
        coords = ps.coords()
        diff = coords[:, None, :] - coords[None, :, :]
        ed = np.sqrt((diff**2).sum(axis=2))
        iu = np.triu_indices(n, 1)
        with np.errstate(invalid="ignore"):
            vs_dt = float(np.max(d8_dist[iu] / np.where(dt_dist[iu] > 0, dt_dist[iu], np.nan)))
            vs_euclid = float(np.max(d8_dist[iu] / np.where(ed[iu] > 0, ed[iu], np.nan)))
    else:
        vs_dt = vs_euclid = 1.0
    return StretchReport(
        per_dt_edge=per_edge,
        max_edge_ratio=max_edge_ratio,
        all_pairs_max_ratio_vs_dt=vs_dt,
        all_pairs_max_ratio_vs_euclid=vs_euclid,
        connected=True,
    )


def edge_bound_check(
    T: Triangulation,
    sel: EdgeSelection,
    p: int,
    q: int,
    *,
    d8_dist: Optional[np.ndarray] = None,
) -> tuple[float, float, float]:
    """(shortest-path length, canonical-triangle bound, Euclidean bound) for
    one triangulation edge, asserting the bound chain."""
    if not T.is_edge(p, q):
        raise ValueError(f"({p},{q}) is not a triangulation edge")
    ps = T.points
    if d8_dist is None:
        d8_dist = distance_matrix(ps, sel.d8_edges)
    delta = float(d8_dist[p, q])
    cb = canonical_bound(ps, p, q)
    eb = STRETCH_BOUND * euclid(ps[p], ps[q])
    if cb > eb * (1 + BOUND_RTOL):
        raise AssertionError(
            f"canonical bound {cb} exceeds Euclidean bound {eb} on ({p},{q})"
        )
    if delta > cb * (1 + BOUND_RTOL):
        raise AssertionError(
            f"shortest path {delta} exceeds canonical bound {cb} on ({p},{q})"
        )
    return delta, cb, eb


# ---------------------------------------------------------------------------
# Witness paths


@dataclass
class WitnessPath:
    source: int
    target: int
    vertices: list[int]
    length: float
    trace: list[str] = field(default_factory=list)


def _e_a_occupant(T, sel, v: int, cone: int) -> Optional[int]:
    ps = T.points
    for w in T.ring(v):
        if edge_key(v, w) in sel.e_a and cone_index(ps[v], ps[w]) == cone:
            return w
    return None


def _walk(T, sel, can, a: int, b: int) -> list[int]:
    """Vertices from a to b along the canonical subgraph, asserting every
    step is a selected edge."""
    vs = can.vertices
    ia, ib = vs.index(a), vs.index(b)
    step = 1 if ib >= ia else -1
    out = [vs[k] for k in range(ia, ib + step, step)]
    edge_pairs = {frozenset(e) for e in can.edges}
    for u, v in zip(out, out[1:]):
        if frozenset((u, v)) not in edge_pairs:
            raise ConstructionError(
                f"walk {a}->{b} in subgraph of apex {can.apex}: ({u},{v}) is "
                f"not a canonical edge of {can.vertices}"
            )
        if not sel.has_d8_edge(u, v):
            raise ConstructionError(
                f"walk {a}->{b} in subgraph of apex {can.apex}: ({u},{v}) "
                f"was not selected"
            )
    return out


def _path_length(ps, vertices) -> float:
    return sum(euclid(ps[u], ps[v]) for u, v in zip(vertices, vertices[1:]))


def witness_path(
    T: Triangulation, sel: EdgeSelection, p: int, q: int, *, _depth: int = 0
) -> WitnessPath:
    """Constructive short path for a triangulation edge (p, q).

    Follows the case analysis of the spanner argument: direct edge, ideal
    path through the canonical subgraph, concatenation of two ideal paths
    meeting at the shared neighbour, or recursion on a strictly smaller
    canonical triangle.  Raises ConstructionError when no case applies.
    """
    ps = T.points
    if not T.is_edge(p, q):
        raise ValueError(f"({p},{q}) is not a triangulation edge")
    if _depth > len(ps):
        raise ConstructionError(f"witness recursion exceeded depth for ({p},{q})")
    if sel.has_d8_edge(p, q):
        return WitnessPath(p, q, [p, q], euclid(ps[p], ps[q]), ["direct"])
    i = cone_index(ps[p], ps[q])
    lpq = bisector_distance(ps[p], ps[q])
    r = _e_a_occupant(T, sel, p, i)
    if r is not None and bisector_distance(ps[p], ps[r]) <= lpq * (1 + BOUND_RTOL):
        return _witness_from(T, sel, p, q, r, i, _depth)
    u = _e_a_occupant(T, sel, q, (i + 3) % 6)
    if u is not None and bisector_distance(ps[q], ps[u]) <= lpq * (1 + BOUND_RTOL):
        w = _witness_from(T, sel, q, p, u, (i + 3) % 6, _depth)
        return WitnessPath(
            p, q, list(reversed(w.vertices)), w.length, w.trace + ["reversed"]
        )
    raise ConstructionError(
        f"({p},{q}) not selected but neither endpoint has a shorter incident "
        f"edge in the facing cones"
    )


def _witness_from(T, sel, p, q, r, i, depth) -> WitnessPath:
    """Witness for (p, q) given the selected edge (p, r) in the same cone of
    p, with [pr] <= [pq]."""
    ps = T.points
    can = canonical_subgraph(T, p, r)
    if q not in can.vertices:
        raise ConstructionError(
            f"target {q} missing from canonical subgraph {can.vertices} "
            f"(apex {p}, anchor {r})"
        )
    if q == r:
        return WitnessPath(p, q, [p, r], euclid(ps[p], ps[r]), ["anchor"])
    idx = can.vertices.index(q)
    interior = 0 < idx < len(can.vertices) - 1
    if interior:
        verts = [p] + _walk(T, sel, can, r, q)
        return WitnessPath(p, q, verts, _path_length(ps, verts), ["ideal"])
    last = idx == len(can.vertices) - 1
    if not can.edges:
        raise ConstructionError(
            f"end vertex {q} unreachable: subgraph of apex {p} anchored at "
            f"{r} has no edges"
        )
    y_expect = can.edges[-1][0] if last else can.edges[0][1]
    z_expect = can.edges[-1][1] if last else can.edges[0][0]
    if z_expect != q:
        raise ConstructionError(
            f"extremal edge of subgraph (apex {p}, anchor {r}) does not end "
            f"at {q}: edges {can.edges}"
        )
    y = y_expect
    j = cone_index(ps[q], ps[y])
    rel = (j - i) % 6
    if sel.has_d8_edge(y, q):
        verts = [p] + _walk(T, sel, can, r, q)
        return WitnessPath(p, q, verts, _path_length(ps, verts), [f"ideal-end({rel})"])
    inner = 4 if last else 2
    if rel == inner:
        u2 = _e_a_occupant(T, sel, q, j)
        if u2 is None or u2 == y:
            raise ConstructionError(
                f"extremal edge ({y},{q}) unselected with no competing "
                f"incident edge at {q} in cone {j}"
            )
        can2 = canonical_subgraph(T, q, u2)
        if y not in can2.vertices:
            raise ConstructionError(
                f"meeting vertex {y} missing from subgraph of apex {q} "
                f"anchored at {u2}"
            )
        part_a = [p] + _walk(T, sel, can, r, y)
        part_b = [q] + _walk(T, sel, can2, u2, y)
        verts = part_a + list(reversed(part_b))[1:]
        return WitnessPath(p, q, verts, _path_length(ps, verts), ["concat"])
    if rel == 3:
        s = y
        lsq = bisector_distance(ps[s], ps[q])
        lpq = bisector_distance(ps[p], ps[q])
        if lsq > lpq * (1 + BOUND_RTOL):
            raise ConstructionError(
                f"recursion on ({s},{q}) does not shrink the canonical "
                f"triangle: {lsq} > {lpq}"
            )
        part_a = [p] + _walk(T, sel, can, r, s)
        sub = witness_path(T, sel, s, q, _depth=depth + 1)
        verts = part_a + sub.vertices[1:]
        return WitnessPath(
            p, q, verts, _path_length(ps, verts), ["recurse"] + sub.trace
        )
    raise ConstructionError(
        f"extremal edge ({y},{q}) in unexpected cone {j} relative to cone "
        f"{i} of apex {p}"
    )


# ---------------------------------------------------------------------------
# Structural audits


@dataclass
class AuditVerdict:
    name: str
    passed: bool
    counterexample: Optional[dict] = None


def _angle(ps, a: int, x: int, b: int) -> float:
    """Angle at x between rays to a and b (the one below pi)."""
    v1 = (ps[a].x - ps[x].x, ps[a].y - ps[x].y)
    v2 = (ps[b].x - ps[x].x, ps[b].y - ps[x].y)
    dot = v1[0] * v2[0] + v1[1] * v2[1]
    cross = v1[0] * v2[1] - v1[1] * v2[0]
    return abs(math.atan2(cross, dot))


def _oriented_e_a(sel, T=None):
    for u, v in sel.e_a:
        if T is not None and not T.is_edge(u, v):
            continue  # non-DT edge; the subgraph audit reports it
        yield u, v
        yield v, u


def audit_canonical_paths(T, sel) -> AuditVerdict:
    """Every canonical subgraph of a selected incident edge is one simple
    path."""
    for p, r in _oriented_e_a(sel, T):
        can = canonical_subgraph(T, p, r)
        if not can.is_path():
            return AuditVerdict(
                "canonical_path",
                False,
                {"apex": p, "anchor": r, "vertices": can.vertices, "edges": can.edges},
            )
    return AuditVerdict("canonical_path", True)


def audit_wedge_angles(T, sel=None) -> AuditVerdict:
    """For any strictly intermediate neighbour x in a cone of p, the angle at
    x facing p (the interior angle of the quadrilateral p, r, x, q, possibly
    reflex) exceeds 2*pi/3."""
    ps = T.points
    limit = 2 * math.pi / 3 - 1e-9
    for p in range(len(ps)):
        for i in range(6):
            members = cone_neighbourhood(T, p, i).vertices
            m = len(members)
            for a in range(m - 2):
                for x in range(a + 1, m - 1):
                    for b in range(x + 1, m):
                        ang = _angle(ps, members[a], members[x], p) + _angle(
                            ps, p, members[x], members[b]
                        )
                        if ang <= limit:
                            return AuditVerdict(
                                "wedge_angle",
                                False,
                                {
                                    "apex": p,
                                    "cone": i,
                                    "triple": (members[a], members[x], members[b]),
                                    "angle": ang,
                                },
                            )
    return AuditVerdict("wedge_angle", True)


def _triangle_cone_memberships(ps, tri) -> list[int]:
    """Corners of the triangle whose two other corners lie in one cone."""
    out = []
    for k, c in enumerate(tri):
        o1, o2 = (tri[m] for m in range(3) if m != k)
        if cone_index(ps[c], ps[o1]) == cone_index(ps[c], ps[o2]):
            out.append(c)
    return out


def audit_shared_triangles(T, sel=None) -> AuditVerdict:
    """No triangle lies in the cone neighbourhoods of all three corners, and
    no edge is the base of more than one shared triangle."""
    ps = T.points
    base_counts: dict[tuple[int, int], list] = {}
    for tri in T.triangles:
        members = _triangle_cone_memberships(ps, tri)
        if len(members) == 3:
            return AuditVerdict(
                "shared_triangle", False, {"triangle": tri, "reason": "three cones"}
            )
        if len(members) == 2:
            base = edge_key(*members)
            base_counts.setdefault(base, []).append(tri)
    for base, tris in base_counts.items():
        if len(tris) > 1:
            return AuditVerdict(
                "shared_triangle",
                False,
                {"base": base, "triangles": tris, "reason": "base shared twice"},
            )
    return AuditVerdict("shared_triangle", True)


def _d8_edges_at_in_cone(T, sel, v: int, cone: int):
    ps = T.points
    return [
        w
        for w in T.ring(v)
        if sel.has_d8_edge(v, w) and cone_index(ps[v], ps[w]) == cone
    ]


def audit_anchor_cones(T, sel) -> AuditVerdict:
    """For a selected edge (p, r): when r is an inner anchor, the two cones
    of r flanking the one facing p are free of selected edges; when r is an
    end vertex with company, at least one of them is."""
    for p, r in _oriented_e_a(sel, T):
        can = canonical_subgraph(T, p, r)
        i = can.cone
        left = _d8_edges_at_in_cone(T, sel, r, (i + 2) % 6)
        right = _d8_edges_at_in_cone(T, sel, r, (i + 4) % 6)
        if can.roles.get(r) == "anchor" and r not in (
            can.first_vertex,
            can.last_vertex,
        ):
            if left or right:
                return AuditVerdict(
                    "anchor_cones",
                    False,
                    {"apex": p, "anchor": r, "cone": i, "left": left, "right": right},
                )
        elif len(can.vertices) > 1:
            if left and right:
                return AuditVerdict(
                    "anchor_cones",
                    False,
                    {"apex": p, "anchor": r, "cone": i, "left": left, "right": right},
                )
    return AuditVerdict("anchor_cones", True)


def audit_extremal_cone(T, sel) -> AuditVerdict:
    """The extremal edge of a canonical subgraph never points back into the
    apex cone at its end vertex (unless that end vertex is directly
    selected)."""
    ps = T.points
    for p, r in _oriented_e_a(sel, T):
        can = canonical_subgraph(T, p, r)
        if not can.edges:
            continue
        i = can.cone
        for y, z in ((can.edges[-1][0], can.edges[-1][1]), (can.edges[0][1], can.edges[0][0])):
            if z == r or edge_key(p, z) in sel.e_a:
                continue
            if cone_index(ps[z], ps[y]) == i:
                return AuditVerdict(
                    "extremal_cone",
                    False,
                    {"apex": p, "anchor": r, "edge": (y, z), "cone": i},
                )
    return AuditVerdict("extremal_cone", True)


def audit_charged_cones(T, sel) -> AuditVerdict:
    """Edges recorded as boundary-cone additions (step 4b) must occupy a cone
    of their end vertex that holds no selected incident edge."""
    for edge, provs in sel.provenance.items():
        for prov in provs:
            if prov.step != "4b":
                continue
            z, cone = prov.end_vertex, prov.cone
            occupied = [
                w
                for w in _d8_edges_at_in_cone(T, sel, z, cone)
                if edge_key(z, w) in sel.e_a
            ]
            if occupied:
                return AuditVerdict(
                    "charged_cones",
                    False,
                    {"edge": edge, "end_vertex": z, "cone": cone, "e_a": occupied},
                )
    return AuditVerdict("charged_cones", True)


def lemma_audits(T: Triangulation, sel: EdgeSelection) -> list[AuditVerdict]:
    return [
        audit_canonical_paths(T, sel),
        audit_wedge_angles(T, sel),
        audit_shared_triangles(T, sel),
        audit_anchor_cones(T, sel),
        audit_extremal_cone(T, sel),
        audit_charged_cones(T, sel),
    ]


# ---------------------------------------------------------------------------
# Combined report


@dataclass
class AuditReport:
    degrees: dict
    subgraph: dict
    lemmas: list[AuditVerdict]
    stretch: Optional[StretchReport]

    @property
    def ok(self) -> bool:
        if self.degrees["max_degree"] > 8 or self.degrees["e_a_max_degree"] > 6:
            return False
        if not self.subgraph["passed"]:
            return False
        if any(not v.passed for v in self.lemmas):
            return False
        if self.stretch is not None and not self.stretch.ok:
            return False
        return True


def run_audits(
    T: Triangulation,
    sel: EdgeSelection,
    *,
    with_stretch: bool = True,
    debug_crossings: bool = False,
) -> AuditReport:
    return AuditReport(
        degrees=degree_audit(T, sel),
        subgraph=subgraph_audit(T, sel, debug_crossings=debug_crossings),
        lemmas=lemma_audits(T, sel),
        stretch=stretch_vs_dt(T, sel) if with_stretch else None,
    )
