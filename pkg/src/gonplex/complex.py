"""Polyhedra glued from a presentation, their vertex links and counts."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import BadVertex, Disconnected, InternalInconsistency, UncheckedPresentation
from .graphs import Graph, check_generalized_m_gon
from .plane import dualize, incidence_graph
from .presentation import LabeledCopy, LineLabel, PointLabel, Presentation, STRAIGHT
from .report import Report

EUCLIDEAN, HYPERBOLIC, NEITHER = "euclidean", "hyperbolic", "neither"


@dataclass
class Polyhedron:
    """One k-gon per rotation class of tuples, sides glued by label.

    Vertex ``v`` is the vertex whose link is copy ``v + 1``.  The side
    labelled ``x_i^t`` runs from vertex ``t - 1`` to vertex ``t mod n``, so
    ``corners[f][s]`` (the vertex where side ``s`` of face ``f`` starts) is
    determined by the copy of that side.
    """

    presentation: Presentation = field(repr=False)
    num_vertices: int
    edges: tuple[PointLabel, ...]
    faces: tuple[tuple[PointLabel, ...], ...]
    corners: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return self.presentation.k

    def endpoints(self, label: PointLabel) -> tuple[int, int]:
        return label.t - 1, label.t % self.num_vertices


def assemble(p: Presentation) -> Polyhedron:
    if p.verified is not True:
        raise UncheckedPresentation("run verify_presentation first")
    n = p.n
    faces = p.base_tuples
    used = sorted({x for f in faces for x in f}, key=lambda x: (x.t, x.i))
    corners = []
    for face in faces:
        row = tuple(x.t - 1 for x in face)
        for s, x in enumerate(face):
            if x.t % n != row[(s + 1) % len(face)]:
                raise InternalInconsistency(f"sides {x} and {face[(s + 1) % len(face)]} do not share a corner")
        corners.append(row)
    return Polyhedron(p, n, tuple(used), faces, tuple(corners))


def orientation_consistent(X: Polyhedron) -> bool:
    """Every side of every face runs along its edge in the edge's own direction."""
    for face, row in zip(X.faces, X.corners):
        for s, x in enumerate(face):
            if (row[s], row[(s + 1) % len(face)]) != X.endpoints(x):
                return False
    return True


@dataclass(frozen=True)
class LinkGraph:
    vertex: int
    nodes: tuple  # PointLabel for outgoing edge-ends, LineLabel for incoming ones
    arcs: tuple[tuple[int, int], ...]

    def to_graph(self) -> Graph:
        n_points = sum(isinstance(x, PointLabel) for x in self.nodes)
        return Graph(len(self.nodes), self.arcs, parts=(n_points, len(self.nodes) - n_points))


def link(X: Polyhedron, v: int) -> LinkGraph:
    """Edge-ends at ``v`` joined by the face corners at ``v``.

    An edge leaving ``v`` contributes its own label; an edge arriving at
    ``v`` contributes the lambda image of its label.
    """
    if not 0 <= v < X.num_vertices:
        raise BadVertex(f"vertex {v} not in 0..{X.num_vertices - 1}")
    lam = X.presentation.lam
    starts = [x for x in X.edges if X.endpoints(x)[0] == v]
    ends = [lam[x] for x in X.edges if X.endpoints(x)[1] == v]
    nodes = tuple(sorted(starts, key=lambda x: (x.t, x.i)) + sorted(ends, key=lambda y: (y.t, y.i)))
    index = {lbl: pos for pos, lbl in enumerate(nodes)}
    arcs = []
    for face, row in zip(X.faces, X.corners):
        for s, corner in enumerate(row):
            if corner == v:
                incoming = face[s - 1]
                arcs.append((index[lam[incoming]], index[face[s]]))
    return LinkGraph(v, nodes, tuple(arcs))


def natural_map(copy: LabeledCopy) -> tuple[Graph, dict, str]:
    """Expected incidence graph of a copy and the label -> vertex map.

    Returns ``(graph, mapping, name)`` with name ``"G"`` or ``"G'"``.
    """
    plane, tmap = copy.plane, copy.tmap
    n = plane.num_points
    t = copy.t
    mapping = {}
    if copy.orientation == STRAIGHT:
        for i in range(n):
            mapping[PointLabel(i, t)] = i
            mapping[LineLabel(i, t)] = n + tmap[i]
        return incidence_graph(plane), mapping, "G"
    dual = dualize(plane)
    for i in range(n):
        # points of G' are the lines of G and vice versa
        mapping[PointLabel(i, t)] = tmap[i]
        mapping[LineLabel(i, t)] = dual.num_points + i
    return incidence_graph(dual), mapping, "G'"


def check_link_isomorphism(lk: LinkGraph, expected: Graph, mapping: dict) -> Report:
    """Whether ``mapping`` (node label -> expected vertex) is a graph isomorphism."""
    rep = Report(f"link {lk.vertex} label isomorphism")
    images = [mapping.get(lbl) for lbl in lk.nodes]
    bad = next((str(lbl) for lbl, im in zip(lk.nodes, images) if im is None), None)
    onto = bad is None and sorted(images) == list(range(expected.n))
    rep.add("node bijection", onto, bad, f"{len(lk.nodes)} nodes vs {expected.n} vertices")
    if not onto:
        return rep
    edges = expected.edge_set()
    seen = set()
    witness = None
    for a, b in lk.arcs:
        e = frozenset((images[a], images[b]))
        if e not in edges or e in seen:
            witness = (str(lk.nodes[a]), str(lk.nodes[b]), "not an edge" if e not in edges else "repeated")
            break
        seen.add(e)
    if witness is None and seen != edges:
        u, w = sorted(next(iter(sorted(edges - seen, key=sorted))))
        inverse = {im: lbl for lbl, im in zip(lk.nodes, images)}
        witness = (str(inverse[u]), str(inverse[w]), "missing arc")
    rep.add("adjacency preserved", witness is None, witness)
    return rep


@dataclass(frozen=True)
class GonParams:
    face_size: int
    link_gon: int
    curvature: str


def classify_curvature(k: int, m: int) -> GonParams:
    if k < 3 or m < 2:
        raise ValueError(f"need k >= 3 and m >= 2, got k={k}, m={m}")
    if (k, m) == (3, 3):
        cls = EUCLIDEAN
    elif m * k > 2 * m + k:
        cls = HYPERBOLIC
    else:
        cls = NEITHER
    return GonParams(k, m, cls)


@dataclass(frozen=True)
class LinkSummary:
    vertex: int
    nodes: int
    arcs: int
    m: Optional[int]
    iso: str  # "G", "G'" or "FAIL"


@dataclass(frozen=True)
class ComplexStats:
    V: int
    E: int
    F: int
    k: int
    link_nodes: tuple[int, ...]
    link_arcs: tuple[int, ...]

    @property
    def chi(self) -> int:
        return self.V - self.E + self.F

    @property
    def edges_from_ends(self) -> bool:
        return 2 * self.E == sum(self.link_nodes)

    @property
    def corners_from_faces(self) -> bool:
        return self.k * self.F == sum(self.link_arcs)

    @property
    def literal_edges(self) -> int:
        """``k * sum(s_i)``, the edge count as literally stated for presentations."""
        return self.k * sum(self.link_nodes)

    @property
    def literal_faces(self) -> int:
        return sum(self.link_arcs)


def stats(X: Polyhedron) -> ComplexStats:
    links = [link(X, v) for v in range(X.num_vertices)]
    return ComplexStats(
        V=X.num_vertices,
        E=len(X.edges),
        F=len(X.faces),
        k=X.k,
        link_nodes=tuple(len(lk.nodes) for lk in links),
        link_arcs=tuple(len(lk.arcs) for lk in links),
    )


@dataclass(frozen=True)
class ComplexAnalysis:
    stats: ComplexStats
    links: tuple[LinkSummary, ...]
    curvature: Optional[GonParams]

    @property
    def ok(self) -> bool:
        return (
            all(l.m == 3 and l.iso != "FAIL" for l in self.links)
            and self.stats.edges_from_ends
            and self.stats.corners_from_faces
        )


def analyze(X: Polyhedron) -> ComplexAnalysis:
    """Counts, per-vertex generalized-polygon test and natural link isomorphism."""
    summaries = []
    for v in range(X.num_vertices):
        lk = link(X, v)
        try:
            m = check_generalized_m_gon(lk.to_graph()).m
        except Disconnected:
            m = None
        expected, mapping, name = natural_map(X.presentation.copy(v + 1))
        iso = name if check_link_isomorphism(lk, expected, mapping).ok else "FAIL"
        summaries.append(LinkSummary(v, len(lk.nodes), len(lk.arcs), m, iso))
    ms = {s.m for s in summaries}
    curvature = classify_curvature(X.k, ms.pop()) if len(ms) == 1 and None not in ms else None
    return ComplexAnalysis(stats(X), tuple(summaries), curvature)


def write_complex_report(a: ComplexAnalysis) -> str:
    s = a.stats
    cls = a.curvature.curvature if a.curvature else "undetermined"
    out = [f"complex V={s.V} E={s.E} F={s.F} k={s.k} chi={s.chi} curvature={cls}"]
    for l in a.links:
        m = l.m if l.m is not None else "none"
        out.append(f"link {l.vertex}: nodes={l.nodes} arcs={l.arcs} gen-gon m={m} iso={l.iso}")
    return "\n".join(out) + "\n"
