"""Polygonal presentations over labelled copies of a plane and its dual.

Copy ``t`` (1-based) carries point labels ``x_i^t`` and line labels
``y_i^t`` where ``y_i = T(x_i)``.  In a *straight* copy ``x_i^t`` is point
``x_i`` and ``y_i^t`` is line ``y_i``; in a *dual* copy the roles swap, so
``x_i^t`` stands for the line ``y_i`` and ``y_i^t`` for the point ``x_i``.
The basic bijection is always ``x_i^t -> y_i^(t+1)`` with ``t+1`` cyclic.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .errors import (
    BadAlphabet,
    BadPrefix,
    CyclicPower,
    PlaneFormatError,
    ProperPower,
    SameLetter,
)
from .plane import Plane
from .pointline import PointLineBijection
from .report import Report
from .triples import TripleSet

STRAIGHT, DUAL = "straight", "dual"
ROLE_INDEX = {"a": 0, "b": 1, "c": 2}  # letter -> position in (i, j, k)

# (u, v) such that every triple has x_u on y_v
_TRIPLE_INCIDENCES = {("b", "a"), ("b", "c"), ("a", "c")}


@dataclass(frozen=True, order=True)
class PointLabel:
    i: int
    t: int

    def __str__(self):
        return f"x{self.i}^{self.t}"


@dataclass(frozen=True, order=True)
class LineLabel:
    i: int
    t: int

    def __str__(self):
        return f"y{self.i}^{self.t}"


@dataclass(frozen=True)
class LabeledCopy:
    t: int
    orientation: str
    plane: Plane = field(repr=False, compare=False)
    tmap: tuple[int, ...] = field(repr=False, compare=False)

    def incident(self, i: int, j: int) -> bool:
        """Whether ``x_i^t`` and ``y_j^t`` are incident in this copy."""
        if self.orientation == STRAIGHT:
            return self.plane.incident(i, self.tmap[j])
        return self.plane.incident(j, self.tmap[i])

    @property
    def size(self) -> int:
        return self.plane.num_points

    def point_labels(self) -> list[PointLabel]:
        return [PointLabel(i, self.t) for i in range(self.size)]

    def line_labels(self) -> list[LineLabel]:
        return [LineLabel(i, self.t) for i in range(self.size)]


@dataclass(frozen=True)
class Word:
    letters: str

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return self.letters


def validate_word(s: str) -> Word:
    if not s or set(s) - set("abc"):
        raise BadAlphabet(f"{s!r} is not a word over a, b, c")
    if len(s) < 3 or not s.startswith("abc"):
        raise BadPrefix(f"{s!r} must start with 'abc'")
    for t in range(len(s) - 1):
        if s[t] == s[t + 1]:
            raise ProperPower(f"{s!r} repeats {s[t]!r} at position {t + 1}")
    if s[-1] == "a":
        raise CyclicPower(f"{s!r} ends in 'a', which repeats cyclically")
    return Word(s)


def sign(u: str, v: str) -> int:
    """The letter-pair sign table: +1 for ab, bc, ac and -1 for ba, cb, ca."""
    if u not in ROLE_INDEX or v not in ROLE_INDEX:
        raise BadAlphabet(f"{u!r}{v!r} is not a pair of letters a, b, c")
    if u == v:
        raise SameLetter(f"{u!r} given twice")
    return 1 if u < v else -1


def copy_orientation(prev: str, cur: str) -> str:
    """Orientation forced on the copy where letter ``cur`` follows ``prev``.

    The incidence checked there is ``x_cur ~ lambda(x_prev) = y_prev``.  A
    straight copy reads it as ``x_cur on y_prev``, a dual copy as
    ``x_prev on y_cur``; exactly one of these is a triple condition.
    """
    if (cur, prev) in _TRIPLE_INCIDENCES:
        return STRAIGHT
    if (prev, cur) in _TRIPLE_INCIDENCES:
        return DUAL
    raise SameLetter(f"{prev!r}{cur!r} has no orientation")


@dataclass(eq=False)
class Presentation:
    k: int
    word: Optional[str]  # None for the triangle presentation
    copies: tuple[LabeledCopy, ...]
    lam: dict
    tuples: frozenset
    plane: Optional[Plane] = field(default=None, repr=False)
    bijection: Optional[PointLineBijection] = field(default=None, repr=False)
    verified: Optional[bool] = None

    @property
    def n(self) -> int:
        return len(self.copies)

    def copy(self, t: int) -> LabeledCopy:
        return self.copies[t - 1]

    def points(self) -> list[PointLabel]:
        return [x for c in self.copies for x in c.point_labels()]

    def lines(self) -> list[LineLabel]:
        return [y for c in self.copies for y in c.line_labels()]

    @property
    def base_tuples(self) -> tuple[tuple[PointLabel, ...], ...]:
        """One rotation per orbit: the one opening with the lowest copy."""
        base = set()
        for tup in self.tuples:
            r = min(range(len(tup)), key=lambda s: (tup[s].t, tup[s].i, s))
            base.add(tup[r:] + tup[:r])
        return tuple(sorted(base))

    def structure(self):
        return (
            self.k,
            tuple((c.t, c.orientation) for c in self.copies),
            tuple(sorted(self.lam.items())),
            tuple(sorted(self.tuples)),
        )

    def same_structure(self, other: "Presentation") -> bool:
        return self.structure() == other.structure()

    def __eq__(self, other):
        if not isinstance(other, Presentation):
            return NotImplemented
        return self.word == other.word and self.same_structure(other)


def _cyclic_lambda(copies: Sequence[LabeledCopy]) -> dict:
    n = len(copies)
    return {
        PointLabel(i, c.t): LineLabel(i, c.t % n + 1)
        for c in copies
        for i in range(c.size)
    }


def with_rotations(base) -> frozenset:
    return frozenset(tup[r:] + tup[:r] for tup in base for r in range(len(tup)))


def build_euclidean(plane: Plane, T: PointLineBijection, triples: TripleSet) -> Presentation:
    """Triangles ``(x_i^1, x_j^2, x_k^3)`` over copies G, G, G'."""
    triples.check_fresh(plane, T)
    copies = tuple(
        LabeledCopy(t, o, plane, T.map) for t, o in ((1, STRAIGHT), (2, STRAIGHT), (3, DUAL))
    )
    base = tuple(
        (PointLabel(i, 1), PointLabel(j, 2), PointLabel(k, 3)) for i, j, k in triples
    )
    return Presentation(3, None, copies, _cyclic_lambda(copies), with_rotations(base), plane, T)


def build_hyperbolic(
    plane: Plane,
    T: PointLineBijection,
    triples: TripleSet,
    w: Union[str, Word],
    literal_sign: bool = False,
) -> Presentation:
    """One n-gon per triple, the letters of ``w`` choosing i, j or k per side.

    Copy ``t`` is oriented by :func:`copy_orientation` on the cyclic letter
    pair ``(z_{t-1}, z_t)``.  ``literal_sign=True`` instead makes copy ``t``
    straight iff ``sign(z_t, z_{t+1}) == +1``; that rule agrees on ``abc``
    but breaks the presentation conditions on longer words, and is kept to
    demonstrate exactly that.
    """
    word = w if isinstance(w, Word) else validate_word(w)
    z = word.letters
    n = len(z)
    triples.check_fresh(plane, T)
    copies = []
    for t in range(1, n + 1):
        if literal_sign:
            o = STRAIGHT if sign(z[t - 1], z[t % n]) == 1 else DUAL
        else:
            o = copy_orientation(z[t - 2], z[t - 1])  # z[-1] wraps to z_n
        copies.append(LabeledCopy(t, o, plane, T.map))
    copies = tuple(copies)
    base = tuple(
        tuple(PointLabel(tri[ROLE_INDEX[z[t]]], t + 1) for t in range(n)) for tri in triples
    )
    return Presentation(n, word.letters, copies, _cyclic_lambda(copies), with_rotations(base), plane, T)


def verify_presentation(p: Presentation) -> Report:
    """Exhaustive check of the polygonal-presentation conditions.

    (1) closure under rotation, (2) ``(x1, x2, ...)`` exists iff ``x2`` is
    incident to ``lambda(x1)`` in some copy, (3) at most one ``x3`` per
    ``(x1, x2)``; plus disjoint copies and a bijective lambda.
    """
    rep = Report(f"presentation k={p.k} n={p.n}")
    ts = [c.t for c in p.copies]
    rep.add("disjoint copies", len(set(ts)) == len(ts), ts)
    points, lines = p.points(), p.lines()
    point_set = set(points)
    stray = next((x for tup in p.tuples for x in tup if x not in point_set), None)
    rep.add("labels in P", stray is None, stray)

    images = [p.lam.get(x) for x in points]
    bij = set(p.lam) == point_set and len(set(images)) == len(images) and set(images) == set(lines)
    rep.add("lambda bijection", bij, next((x for x in points if x not in p.lam), None))

    bad_len = next((tup for tup in p.tuples if len(tup) != p.k), None)
    rep.add("tuple length k", bad_len is None, _fmt(bad_len))

    all_tuples = p.tuples
    missing = next((t[1:] + t[:1] for t in sorted(all_tuples) if t[1:] + t[:1] not in all_tuples), None)
    rep.add("condition 1 (rotation)", missing is None, _fmt(missing))

    continuations = defaultdict(set)
    for tup in all_tuples:
        continuations[tup[0], tup[1]].add(tup[2] if p.k > 2 else None)
    copy_by_t = {c.t: c for c in p.copies}

    def incident(x1, x2):
        y = p.lam.get(x1)
        if y is None or y.t != x2.t or x2.t not in copy_by_t:
            return False
        return copy_by_t[x2.t].incident(x2.i, y.i)

    cond2 = cond3 = None
    for x1 in points:
        for x2 in points:
            extendable = (x1, x2) in continuations
            if cond2 is None and extendable != incident(x1, x2):
                cond2 = (str(x1), str(x2), "extends" if extendable else "no tuple")
            if cond3 is None and len(continuations.get((x1, x2), ())) > 1:
                cond3 = (str(x1), str(x2), sorted(str(x) for x in continuations[x1, x2]))
    rep.add("condition 2 (lambda incidence)", cond2 is None, cond2, f"{len(points) ** 2} pairs")
    rep.add("condition 3 (unique continuation)", cond3 is None, cond3)
    p.verified = rep.ok
    return rep


def _fmt(tup):
    return None if tup is None else " ".join(str(x) for x in tup)


# -- file format --------------------------------------------------------------

_HEADER = re.compile(r"^presentation k=(\d+) n=(\d+) word=(\S+)$")
_COPY = re.compile(r"^copy (\d+) (straight|dual)$")
_FACE = re.compile(r"^f:((?:\s+x\d+\^\d+)+)$")
LAMBDA_RULE = "lambda x<i>^<t> -> y<i>^<t+1>"


def write_presentation(p: Presentation) -> str:
    out = [f"presentation k={p.k} n={p.n} word={p.word or 'triangle'}"]
    if p.bijection is not None:
        out.append(f"# over {p.plane.name} {p.bijection.content_hash()}")
    out += [f"copy {c.t} {c.orientation}" for c in p.copies]
    out.append(LAMBDA_RULE)
    out += ["f: " + " ".join(str(x) for x in tup) for tup in p.base_tuples]
    return "\n".join(out) + "\n"


def read_presentation(text: str, plane: Plane, T: PointLineBijection) -> Presentation:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    head = _HEADER.match(lines[0]) if lines else None
    if not head:
        raise PlaneFormatError("bad presentation header")
    k, n, word = int(head.group(1)), int(head.group(2)), head.group(3)
    copies, base = [], []
    seen_rule = False
    for ln in lines[1:]:
        if m := _COPY.match(ln):
            copies.append(LabeledCopy(int(m.group(1)), m.group(2), plane, T.map))
        elif ln == LAMBDA_RULE:
            seen_rule = True
        elif m := _FACE.match(ln):
            tup = []
            for tok in m.group(1).split():
                i, t = tok[1:].split("^")
                tup.append(PointLabel(int(i), int(t)))
            base.append(tuple(tup))
        else:
            raise PlaneFormatError(f"bad presentation record: {ln!r}")
    if not seen_rule:
        raise PlaneFormatError("missing lambda rule")
    if len(copies) != n or [c.t for c in copies] != list(range(1, n + 1)):
        raise PlaneFormatError("copy table does not list copies 1..n")
    copies = tuple(copies)
    return Presentation(
        k,
        None if word == "triangle" else word,
        copies,
        _cyclic_lambda(copies),
        with_rotations(base),
        plane,
        T,
    )
