"""The triple set K of a basic bijection and the unique-extension lemma.

With ``y_t = T(x_t)``, a triple ``(i, j, k)`` belongs to K when

    x_i on y_k,   x_j on y_i,   x_j on y_k.

The conditions are not invariant under rotating ``(i, j, k)``.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import NoExtension, NotCertified, PlaneFormatError, StaleInput
from .plane import Plane, line_through, meet
from .pointline import PointLineBijection, induced_permutation
from .report import Report


class Triple(NamedTuple):
    i: int
    j: int
    k: int


@dataclass
class TripleSet:
    plane: Plane = field(repr=False)
    bijection: PointLineBijection = field(repr=False)
    triples: tuple[Triple, ...]
    source_hash: str = ""

    def __post_init__(self):
        if not self.source_hash:
            self.source_hash = self.bijection.content_hash()

    def __len__(self):
        return len(self.triples)

    def __iter__(self):
        return iter(self.triples)

    def check_fresh(self, plane: Plane, T: PointLineBijection) -> None:
        if T.plane != plane or T.content_hash() != self.source_hash:
            raise StaleInput(f"triples were derived from {self.source_hash}, not {T.content_hash()}")


def admissible(plane: Plane, T: PointLineBijection, kind: str, a: int, b: int) -> bool:
    """Whether the ordered pair ``(a, b)`` of the given projection extends to a triple."""
    if kind == "ik":  # x_i on y_k
        return plane.incident(a, T.map[b])
    if kind == "ij":  # x_j on y_i
        return plane.incident(b, T.map[a])
    if kind == "jk":  # x_j on y_k
        return plane.incident(a, T.map[b])
    raise ValueError(f"unknown pair kind {kind!r}")


def satisfies_conditions(plane: Plane, T: PointLineBijection, t: Triple) -> bool:
    i, j, k = t
    return (
        plane.incident(i, T.map[k])
        and plane.incident(j, T.map[i])
        and plane.incident(j, T.map[k])
    )


def enumerate_triples(plane: Plane, T: PointLineBijection) -> TripleSet:
    """One triple per flag ``(x_i, y_k)``, with ``x_j = y_i ^ y_k``."""
    if not T.certified:
        raise NotCertified(f"bijection is {T.certification}")
    inverse = T.inverse()
    out = []
    for line, pts in enumerate(plane.incidence):
        k = inverse[line]
        for i in pts:
            j = meet(plane, T.map[i], line)
            t = Triple(i, j, k)
            if not satisfies_conditions(plane, T, t):
                raise NotCertified(f"{t} violates the triple conditions")
            out.append(t)
    return TripleSet(plane, T, tuple(sorted(out)))


def complete_pair(ts: TripleSet, kind: str, a: int, b: int) -> Triple:
    """The unique triple whose ``kind`` projection is ``(a, b)``."""
    plane, T = ts.plane, ts.bijection
    if not T.certified:
        raise NotCertified(f"bijection is {T.certification}")
    if not admissible(plane, T, kind, a, b):
        raise NoExtension(f"pair ({a}, {b}) of kind {kind} is not admissible")
    if kind == "ik":
        i, k = a, b
        return Triple(i, meet(plane, T.map[i], T.map[k]), k)
    if kind == "ij":
        i, j = a, b
        k = T.inverse()[line_through(plane, i, j)]
        return Triple(i, j, k)
    j, k = a, b
    perm = induced_permutation(plane, T, T.map[k]).perm
    i = next(x for x, image in perm.items() if image == j)
    return Triple(i, j, k)


_PROJECTIONS = {
    "ik": lambda t: (t.i, t.k),
    "ij": lambda t: (t.i, t.j),
    "jk": lambda t: (t.j, t.k),
}


def verify_crucial_lemma(ts: TripleSet) -> Report:
    """Each admissible pair lies in exactly one triple, each other pair in none."""
    plane, T = ts.plane, ts.bijection
    rep = Report("unique extension")
    bad = next((t for t in ts.triples if not satisfies_conditions(plane, T, t)), None)
    rep.add("triple conditions", bad is None, bad)
    n = plane.num_points
    for kind, proj in _PROJECTIONS.items():
        counts = Counter(proj(t) for t in ts.triples)
        witness = None
        for a in range(n):
            for b in range(n):
                want = 1 if admissible(plane, T, kind, a, b) else 0
                if counts.get((a, b), 0) != want:
                    witness = (a, b, counts.get((a, b), 0), want)
                    break
            if witness:
                break
        rep.add(f"pair {kind}", witness is None, witness, f"{n * n} ordered pairs")
    return rep


def rotation_closed(ts: TripleSet) -> bool:
    members = set(ts.triples)
    return all(Triple(t.j, t.k, t.i) in members for t in ts.triples)


# -- file format --------------------------------------------------------------

_HEADER = re.compile(r"^triples over (\S+) ([0-9a-f]+)$")
_RECORD = re.compile(r"^t:\s*(\d+)\s+(\d+)\s+(\d+)$")


def write_triples(ts: TripleSet) -> str:
    out = [f"triples over {ts.plane.name} {ts.source_hash}"]
    out += [f"t: {t.i} {t.j} {t.k}" for t in ts.triples]
    return "\n".join(out) + "\n"


def read_triples(text: str, plane: Plane, T: PointLineBijection) -> TripleSet:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    head = _HEADER.match(lines[0]) if lines else None
    if not head:
        raise PlaneFormatError("bad triples header")
    if head.group(1) != plane.name or head.group(2) != T.content_hash():
        raise StaleInput("triples file does not match the given plane and bijection")
    triples = []
    for ln in lines[1:]:
        m = _RECORD.match(ln)
        if not m:
            raise PlaneFormatError(f"bad triple record: {ln!r}")
        triples.append(Triple(*map(int, m.groups())))
    return TripleSet(plane, T, tuple(triples), head.group(2))
