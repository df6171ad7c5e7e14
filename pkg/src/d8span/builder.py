"""Edge selection: greedy incident edges, canonical completion, and the
full bounded-degree construction."""

from __future__ import annotations

from dataclasses import dataclass, field

from .delaunay import (
    CanonicalSubgraph,
    Triangulation,
    build_dt,
    canonical_subgraph,
    cone_neighbourhood,
    edge_key,
)
from .geometry import PointSet, bisector_distance, cone_index


class ConstructionError(RuntimeError):
    """A structural invariant of the construction failed; carries the local
    configuration for diagnosis."""


@dataclass(frozen=True)
class SortedEdge:
    edge: tuple[int, int]
    length: float  # bisector length, symmetric in the endpoints


def sort_edges(T: Triangulation) -> list[SortedEdge]:
    """All triangulation edges by non-decreasing bisector length, ties broken
    lexicographically on the (min, max) vertex ids."""
    ps = T.points
    entries = [
        SortedEdge(edge=e, length=bisector_distance(ps[e[0]], ps[e[1]]))
        for e in T.edges
    ]
    entries.sort(key=lambda se: (se.length, se.edge))
    return entries


def add_incident(T: Triangulation, L: list[SortedEdge]) -> set[tuple[int, int]]:
    """Greedy scan of the sorted edge list.

    An edge (p, q), with q in cone i of p, is accepted iff no already
    accepted edge leaves p into cone i and no already accepted edge leaves q
    into cone i+3.  At most one accepted edge per vertex-cone pair, hence
    degree at most 6.
    """
    ps = T.points
    occupied: set[tuple[int, int]] = set()  # (vertex, cone)
    e_a: set[tuple[int, int]] = set()
    for se in L:
        p, q = se.edge
        i = cone_index(ps[p], ps[q])
        j = (i + 3) % 6
        if (p, i) not in occupied and (q, j) not in occupied:
            e_a.add(se.edge)
            occupied.add((p, i))
            occupied.add((q, j))
    return e_a


@dataclass(frozen=True)
class Provenance:
    step: str  # "2" | "3" | "4a" | "4b" | "4c"
    apex: int
    anchor: int
    end_vertex: int | None = None  # the extremal vertex processed in step 4
    cone: int | None = None  # cone of the end vertex examined in step 4


@dataclass
class EdgeSelection:
    e_a: frozenset[tuple[int, int]]
    e_can: frozenset[tuple[int, int]]
    provenance: dict[tuple[int, int], list[Provenance]] = field(default_factory=dict)

    @property
    def d8_edges(self) -> frozenset[tuple[int, int]]:
        return self.e_a | self.e_can

    def has_d8_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.e_a or edge_key(u, v) in self.e_can


def _e_a_edge_in_cone(T, e_a, v: int, cone: int) -> int | None:
    """The endpoint of the unique selected incident edge leaving v into the
    given cone, if any."""
    ps = T.points
    for w in T.ring(v):
        if edge_key(v, w) in e_a and cone_index(ps[v], ps[w]) == cone:
            return w
    return None


def add_canonical(
    T: Triangulation,
    e_a: set[tuple[int, int]],
    p: int,
    r: int,
) -> list[tuple[tuple[int, int], Provenance]]:
    """Edges contributed for the selected edge (p, r) with r in cone i of p.

    Cone indices below follow the construction stated for i = 0 and are
    rotated by i; the first extremal edge is handled with the mirrored cone
    indices of the last one.
    """
    if edge_key(p, r) not in e_a:
        raise ValueError(f"({p},{r}) not in the selected incident set")
    ps = T.points
    can = canonical_subgraph(T, p, r)
    i = can.cone
    out: list[tuple[tuple[int, int], Provenance]] = []

    # Step 2: all non-extremal canonical edges, when there are at least 3.
    if len(can.edges) >= 3:
        for s, t in can.edges[1:-1]:
            out.append((edge_key(s, t), Provenance("2", p, r)))

    # Step 3: the edge incident to the anchor, when the anchor is extremal
    # and there is more than one edge.
    if len(can.edges) > 1:
        if r == can.first_vertex:
            out.append((edge_key(*can.edges[0]), Provenance("3", p, r)))
        elif r == can.last_vertex:
            out.append((edge_key(*can.edges[-1]), Provenance("3", p, r)))

    # Step 4: the extremal edges.  A single canonical edge is both first and
    # last and is examined under both orientations.
    if can.edges:
        _process_extremal(T, e_a, can, i, last=True, out=out)
        _process_extremal(T, e_a, can, i, last=False, out=out)
    return out


def _process_extremal(T, e_a, can: CanonicalSubgraph, i: int, *, last: bool, out):
    """Step 4 for one extremal edge.

    For the last edge (y, z) the relevant cones of z are i+5 (add the edge),
    and i+4 (add it when no selected incident edge occupies that cone of z,
    otherwise add the unique canonical edge of z with endpoint y there).  The
    first edge is the mirror image: cones i+1 and i+2.
    """
    ps = T.points
    p, r = can.apex, can.anchor
    if last:
        y, z = can.edges[-1]
        outer, inner = (i + 5) % 6, (i + 4) % 6
    else:
        z, y = can.edges[0]
        outer, inner = (i + 1) % 6, (i + 2) % 6
    j = cone_index(ps[z], ps[y])
    prov = lambda step: Provenance(step, p, r, end_vertex=z, cone=j)
    if j == outer:
        out.append((edge_key(y, z), prov("4a")))
    elif j == inner:
        u = _e_a_edge_in_cone(T, e_a, z, inner)
        if u is None:
            out.append((edge_key(y, z), prov("4b")))
        elif u == y:
            pass  # (y, z) is itself a selected incident edge; nothing to add
        else:
            nb = cone_neighbourhood(T, z, inner)
            candidates = [e for e in nb.canonical_edges if y in e]
            if len(candidates) != 1:
                raise ConstructionError(
                    f"expected exactly one canonical edge of {z} with endpoint "
                    f"{y} in cone {inner}; found {candidates} "
                    f"(apex {p}, anchor {r}, subgraph {can.vertices})"
                )
            w, yy = candidates[0]
            out.append((edge_key(w, yy), prov("4c")))
    # Otherwise the edge lies in the cone facing the apex and nothing is
    # added for this end.


def construct_d8(
    ps: PointSet, *, skip_checks: bool = False
) -> tuple[Triangulation, EdgeSelection]:
    """Full construction: triangulation, sorted edge list, greedy incident
    selection, then canonical completion from both endpoints of every
    selected edge in sorted order."""
    T = build_dt(ps, skip_checks=skip_checks)
    L = sort_edges(T)
    e_a = add_incident(T, L)
    e_can: set[tuple[int, int]] = set()
    provenance: dict[tuple[int, int], list[Provenance]] = {}
    for se in L:
        if se.edge not in e_a:
            continue
        p, q = se.edge
        for apex, anchor in ((p, q), (q, p)):
            for edge, prov in add_canonical(T, e_a, apex, anchor):
                e_can.add(edge)
                provenance.setdefault(edge, []).append(prov)
    sel = EdgeSelection(
        e_a=frozenset(e_a), e_can=frozenset(e_can), provenance=provenance
    )
    return T, sel
