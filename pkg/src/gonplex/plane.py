"""Finite projective planes as explicit incidence structures."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .errors import AxiomViolation, PlaneFormatError, SameLine, SamePoint
from .gf import FieldElement, FieldTower, trace
from .graphs import Graph, check_generalized_m_gon
from .report import Report


@dataclass(frozen=True)
class Plane:
    """Points ``0..N-1``, lines ``0..N-1``; ``incidence[l]`` lists the points on line ``l``.

    Equality compares name, order and incidence only.
    """

    name: str
    order_q: int
    incidence: tuple[tuple[int, ...], ...]
    num_points: int
    point_labels: tuple[str, ...] = field(default=(), compare=False, repr=False)
    line_labels: tuple[str, ...] = field(default=(), compare=False, repr=False)
    provenance: str = field(default="file", compare=False)

    @property
    def num_lines(self) -> int:
        return len(self.incidence)

    @cached_property
    def point_lines(self) -> tuple[tuple[int, ...], ...]:
        through: list[list[int]] = [[] for _ in range(self.num_points)]
        for line, pts in enumerate(self.incidence):
            for p in pts:
                through[p].append(line)
        return tuple(tuple(ls) for ls in through)

    @cached_property
    def _line_sets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(pts) for pts in self.incidence)

    @cached_property
    def _point_sets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(ls) for ls in self.point_lines)

    @cached_property
    def _join(self) -> dict:
        table = {}
        for a, b in combinations(range(self.num_points), 2):
            table[a, b] = tuple(sorted(self._point_sets[a] & self._point_sets[b]))
        return table

    @cached_property
    def _meet(self) -> dict:
        table = {}
        for a, b in combinations(range(self.num_lines), 2):
            table[a, b] = tuple(sorted(self._line_sets[a] & self._line_sets[b]))
        return table

    def incident(self, point: int, line: int) -> bool:
        return point in self._line_sets[line]

    def common_lines(self, p1: int, p2: int) -> tuple[int, ...]:
        return self._join[min(p1, p2), max(p1, p2)]

    def common_points(self, l1: int, l2: int) -> tuple[int, ...]:
        return self._meet[min(l1, l2), max(l1, l2)]

    def label(self, point: int) -> str:
        return self.point_labels[point] if self.point_labels else f"p{point}"


def line_through(plane: Plane, p1: int, p2: int) -> int:
    if p1 == p2:
        raise SamePoint(f"p{p1} given twice")
    lines = plane.common_lines(p1, p2)
    if len(lines) != 1:
        raise AxiomViolation(f"points p{p1}, p{p2} lie on {len(lines)} common lines", (p1, p2))
    return lines[0]


def meet(plane: Plane, l1: int, l2: int) -> int:
    if l1 == l2:
        raise SameLine(f"L{l1} given twice")
    pts = plane.common_points(l1, l2)
    if len(pts) != 1:
        raise AxiomViolation(f"lines L{l1}, L{l2} share {len(pts)} points", (l1, l2))
    return pts[0]


def is_collinear(plane: Plane, points: Iterable[int]) -> bool:
    pts = set(points)
    if len(pts) <= 1:
        return True
    first = next(iter(pts))
    return any(pts <= plane._line_sets[line] for line in plane.point_lines[first])


def make_plane(name: str, lines: Sequence[Iterable[int]], num_points: Optional[int] = None,
               provenance: str = "file", **labels) -> Plane:
    """Build a plane from line point-lists, inferring the order from line size."""
    incidence = tuple(tuple(sorted(set(pts))) for pts in lines)
    if num_points is None:
        num_points = max((max(pts) for pts in incidence if pts), default=-1) + 1
    sizes = {len(pts) for pts in incidence}
    order = max(sizes) - 1 if sizes else 0
    return Plane(name, order, incidence, num_points, provenance=provenance, **labels)


# -- algebraic construction ---------------------------------------------------

def canonical_representative(g: FieldElement) -> FieldElement:
    """Scale ``g`` so that its highest nonzero coordinate is 1."""
    base = g.tower.base
    lead = next(c for c in reversed(g.coeffs) if c)
    inv = base.inv(lead)
    return g.tower.element([base.mul(inv, c) for c in g.coeffs])


def projective_representatives(tower: FieldTower) -> list[FieldElement]:
    """Canonical representatives of K*/F*, sorted by coefficient tuple."""
    reps = {canonical_representative(g).coeffs for g in tower.nonzero_elements()}
    return [tower.element(c) for c in sorted(reps)]


def _rep_label(g: FieldElement) -> str:
    return "(" + ",".join(str(c) for c in g.coeffs) + ")"


def build_pg2(tower: FieldTower, name: Optional[str] = None) -> Plane:
    """PG(2, q) as 1- and 2-dimensional F_q-subspaces of K = F_{q^3}.

    Point ``i`` is ``g_i F`` and line ``i`` is ``g_i E`` with ``E = ker(Tr)``,
    where ``g_i`` is the i-th canonical representative; ``g F`` lies on
    ``h E`` iff ``Tr(g / h) = 0``.
    """
    reps = projective_representatives(tower)
    inverses = [h.inv() for h in reps]
    lines = []
    for h_inv in inverses:
        lines.append([i for i, g in enumerate(reps) if not trace(g * h_inv)])
    labels = tuple(_rep_label(g) for g in reps)
    return make_plane(
        name or f"pg2_{tower.q}",
        lines,
        num_points=len(reps),
        provenance=algebraic_provenance(tower),
        point_labels=labels,
        line_labels=tuple(lbl + "E" for lbl in labels),
    )


def algebraic_provenance(tower: FieldTower) -> str:
    return f"algebraic(q={tower.q},p={tower.char_p},e={tower.base_degree_e})"


# -- validation ---------------------------------------------------------------

def find_quadrangle(plane: Plane) -> Optional[tuple[int, int, int, int]]:
    """Four points no three collinear, first in index order, or None."""
    n = plane.num_points
    for a, b in combinations(range(n), 2):
        for c in range(b + 1, n):
            if is_collinear(plane, (a, b, c)):
                continue
            for d in range(c + 1, n):
                if not any(is_collinear(plane, t) for t in ((a, b, d), (a, c, d), (b, c, d))):
                    return a, b, c, d
    return None


def validate_plane(plane: Plane) -> Report:
    """Check every projective-plane axiom; failures carry the first witness."""
    rep = Report(f"plane {plane.name}")
    q = plane.order_q
    expected = q * q + q + 1
    rep.add(
        "point/line count",
        plane.num_points == expected and plane.num_lines == expected,
        (plane.num_points, plane.num_lines),
        f"expected {expected} for order {q}",
    )
    bad_line = next((l for l, pts in enumerate(plane.incidence) if len(pts) != q + 1), None)
    rep.add("line size q+1", bad_line is None,
            None if bad_line is None else (f"L{bad_line}", len(plane.incidence[bad_line])))
    bad_pt = next((p for p, ls in enumerate(plane.point_lines) if len(ls) != q + 1), None)
    rep.add("point degree q+1", bad_pt is None,
            None if bad_pt is None else (f"p{bad_pt}", len(plane.point_lines[bad_pt])))
    bad_pair = next(((a, b) for (a, b), ls in plane._join.items() if len(ls) != 1), None)
    rep.add("two points, one line", bad_pair is None,
            None if bad_pair is None else
            (f"p{bad_pair[0]}", f"p{bad_pair[1]}", len(plane.common_lines(*bad_pair))))
    bad_meet = next(((a, b) for (a, b), ps in plane._meet.items() if len(ps) != 1), None)
    rep.add("two lines, one point", bad_meet is None,
            None if bad_meet is None else
            (f"L{bad_meet[0]}", f"L{bad_meet[1]}", len(plane.common_points(*bad_meet))))
    quad = find_quadrangle(plane)
    rep.add("nondegenerate quadrangle", quad is not None, detail="" if quad is None else f"{quad}")
    try:
        gon = check_generalized_m_gon(incidence_graph(plane))
        rep.add("generalized 3-gon", gon.m == 3, (gon.diameter, gon.girth),
                f"diameter={gon.diameter} girth={gon.girth}")
    except Exception as exc:  # Disconnected
        rep.add("generalized 3-gon", False, str(exc))
    return rep


def dualize(plane: Plane) -> Plane:
    """Swap points and lines; the name toggles a ``_dual`` suffix."""
    if plane.name.endswith("_dual"):
        name = plane.name[: -len("_dual")]
    else:
        name = plane.name + "_dual"
    return Plane(
        name,
        plane.order_q,
        plane.point_lines,
        plane.num_lines,
        point_labels=plane.line_labels,
        line_labels=plane.point_labels,
        provenance=f"dual-of({plane.name})",
    )


def incidence_graph(plane: Plane) -> Graph:
    """Points are vertices ``0..N-1``, line ``l`` is vertex ``N + l``."""
    n = plane.num_points
    edges = [(p, n + l) for l, pts in enumerate(plane.incidence) for p in pts]
    return Graph(n + plane.num_lines, edges, parts=(n, plane.num_lines))


# -- file format --------------------------------------------------------------

_HEADER = re.compile(r"^plane\s+(\S+)\s+order\s+(\d+)$")
_RECORD = re.compile(r"^L(\d+):((?:\s+p\d+)*)$")


def write_plane(plane: Plane) -> str:
    out = [f"plane {plane.name} order {plane.order_q}"]
    for l, pts in enumerate(plane.incidence):
        out.append(f"L{l}: " + " ".join(f"p{p}" for p in pts))
    return "\n".join(out) + "\n"


def _content_lines(text: str):
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line


def read_plane(text: str) -> Plane:
    lines = list(_content_lines(text))
    if not lines:
        raise PlaneFormatError("empty plane file")
    head = _HEADER.match(lines[0])
    if not head:
        raise PlaneFormatError(f"bad header: {lines[0]!r}")
    name, order = head.group(1), int(head.group(2))
    records: dict[int, list[int]] = {}
    for line in lines[1:]:
        m = _RECORD.match(line)
        if not m:
            raise PlaneFormatError(f"bad record: {line!r}")
        idx = int(m.group(1))
        if idx in records:
            raise PlaneFormatError(f"line L{idx} listed twice")
        records[idx] = [int(tok[1:]) for tok in m.group(2).split()]
    if sorted(records) != list(range(len(records))):
        raise PlaneFormatError("line indices are not 0..n-1")
    sizes = {len(pts) for pts in records.values()}
    if len(sizes) > 1:
        raise PlaneFormatError(f"mixed line sizes {sorted(sizes)}")
    if sizes and sizes.pop() != order + 1:
        raise PlaneFormatError(f"line size does not match declared order {order}")
    plane = make_plane(name, [records[i] for i in range(len(records))], provenance="file")
    return plane
