"""Basic point-to-line bijections T and their certification.

A bijection ``T: points -> lines`` is *basic* when

* P1: no point lies on its own image line, and
* P2: for distinct points x1, x2 the point ``T(x1) ^ T(x2)`` is not on the
  line joining x1 and x2.

The algebraic construction ``T(gF) = gE`` lives in :func:`trace_bijection`;
:func:`search_bijection` finds one by backtracking on arbitrary planes.
"""

from __future__ import annotations

import hashlib
import logging
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .errors import (
    AxiomViolation,
    BudgetExceeded,
    CharacteristicThree,
    InternalInconsistency,
    NotBijective,
    NotCertified,
    PlaneFormatError,
    PlaneMismatch,
    SearchExhausted,
)
from .gf import FieldElement, FieldTower, trace
from .plane import (
    Plane,
    algebraic_provenance,
    canonical_representative,
    line_through,
    meet,
    projective_representatives,
    write_plane,
)

log = logging.getLogger(__name__)

UNCHECKED, PASS, FAIL = "unchecked", "pass", "fail"


@dataclass(frozen=True)
class Certification:
    status: str = UNCHECKED
    violated: Optional[str] = None  # "P1" or "P2"
    witness: Optional[tuple] = None

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def __str__(self):
        if self.status != FAIL:
            return self.status
        return f"fail {self.violated} witness={self.witness}"


@dataclass
class PointLineBijection:
    plane: Plane
    map: tuple[int, ...]
    certification: Certification = field(default_factory=Certification, compare=False)

    def __call__(self, point: int) -> int:
        return self.map[point]

    @property
    def certified(self) -> bool:
        return self.certification.passed

    def inverse(self) -> dict[int, int]:
        return {line: point for point, line in enumerate(self.map)}

    def content_hash(self) -> str:
        """Digest of the plane incidence and the map; stale-input detection."""
        h = hashlib.sha256()
        h.update(write_plane(self.plane).encode())
        h.update(write_bijection(self).encode())
        return h.hexdigest()[:16]


def verify_properties(plane: Plane, T: PointLineBijection) -> Certification:
    """Exhaustive P1/P2 check; stores and returns the certification.

    Raises NotBijective (witness = duplicated line) before anything else.
    """
    if len(T.map) != plane.num_points:
        raise NotBijective(f"map has {len(T.map)} entries for {plane.num_points} points")
    seen: dict[int, int] = {}
    for x, line in enumerate(T.map):
        if not 0 <= line < plane.num_lines:
            raise NotBijective(f"p{x} -> L{line} is not a line", line)
        if line in seen:
            raise NotBijective(f"L{line} is the image of p{seen[line]} and p{x}", line)
        seen[line] = x
    if len(seen) != plane.num_lines:
        raise NotBijective("map is not onto the lines")

    cert = Certification(PASS)
    bad = next((x for x, line in enumerate(T.map) if plane.incident(x, line)), None)
    if bad is not None:
        cert = Certification(FAIL, "P1", (bad,))
    else:
        try:
            witness = _first_p2_violation(plane, T.map)
        except AxiomViolation as exc:
            witness = ("axiom", exc.witness)
        if witness is not None:
            cert = Certification(FAIL, "P2", witness)
    T.certification = cert
    return cert


def _first_p2_violation(plane: Plane, mapping) -> Optional[tuple]:
    n = plane.num_points
    for x1 in range(n):
        for x2 in range(x1 + 1, n):
            z = meet(plane, mapping[x1], mapping[x2])
            if plane.incident(z, line_through(plane, x1, x2)):
                return x1, x2, z
    return None


def trace_bijection(tower: FieldTower, plane: Plane, allow_char3: bool = False) -> PointLineBijection:
    """``T(gF) = gE`` on the plane built from ``tower``, certified.

    ``allow_char3`` forces the map through in characteristic 3, where it is
    known to break P1 (``Tr(1) = 0`` puts F inside E); for diagnostics only.
    """
    if tower.char_p == 3 and not allow_char3:
        raise CharacteristicThree("the trace construction needs characteristic != 3")
    if plane.provenance != algebraic_provenance(tower):
        raise PlaneMismatch(f"plane {plane.name} was not built from {tower!r}")
    reps = projective_representatives(tower)
    if len(reps) != plane.num_points:
        raise PlaneMismatch("representative count differs from the plane")
    line_of = {h.coeffs: j for j, h in enumerate(reps)}
    # line j is reps[j] * E, so gE is the line labelled by g's canonical form
    mapping = tuple(line_of[canonical_representative(g).coeffs] for g in reps)
    T = PointLineBijection(plane, mapping)
    verify_properties(plane, T)
    return T


def coset_permutation(tower: FieldTower, c: FieldElement) -> tuple[int, ...]:
    """Index permutation induced by multiplication with ``c`` on K*/F*.

    Points and lines share labels, so the same permutation acts on both.
    """
    reps = projective_representatives(tower)
    index = {g.coeffs: i for i, g in enumerate(reps)}
    return tuple(index[canonical_representative(c * g).coeffs] for g in reps)


@dataclass(frozen=True)
class InducedPermutation:
    line: int
    perm: dict

    def is_fixed_point_free(self) -> bool:
        return all(x != y for x, y in self.perm.items())

    def cycle_type(self) -> tuple[int, ...]:
        seen, lengths = set(), []
        for start in sorted(self.perm):
            if start in seen:
                continue
            length, x = 0, start
            while x not in seen:
                seen.add(x)
                x = self.perm[x]
                length += 1
            lengths.append(length)
        return tuple(sorted(lengths))


def induced_permutation(plane: Plane, T: PointLineBijection, y: int) -> InducedPermutation:
    """``x -> T(x) ^ y`` on the points of line ``y``."""
    if not T.certified:
        raise NotCertified(f"bijection is {T.certification}")
    pts = plane.incidence[y]
    perm = {x: meet(plane, T.map[x], y) for x in pts}
    if sorted(perm.values()) != list(pts):
        raise InternalInconsistency(f"induced map on L{y} is not a permutation")
    result = InducedPermutation(y, perm)
    if not result.is_fixed_point_free():
        raise InternalInconsistency(f"induced map on L{y} has a fixed point")
    return result


# -- trace proof obligation ---------------------------------------------------

@dataclass(frozen=True)
class TraceUniqueness:
    """Solutions of ``Tr(g) = Tr(1/g) = 1`` over K*.

    ``normalized`` solves ``Tr(g) = Tr(1/g) = Tr(1)`` instead, which is the
    condition for ``g - 1`` to lie in ``E`` and in ``gE``.  The two coincide
    in characteristic 2 only, where ``Tr(1) = 3 = 1``.
    """

    q: int
    trace_of_one: int
    solutions: tuple[FieldElement, ...]
    normalized: tuple[FieldElement, ...]

    @property
    def ok(self) -> bool:
        return [g.coeffs for g in self.solutions] == [(1, 0, 0)]

    @property
    def normalized_ok(self) -> bool:
        return [g.coeffs for g in self.normalized] == [(1, 0, 0)]


def verify_trace_uniqueness(tower: FieldTower) -> TraceUniqueness:
    if tower.char_p == 3:
        raise CharacteristicThree("Tr(1) = 0 in characteristic 3")
    one = tower.one()
    t1 = trace(one)
    lit, norm = [], []
    for g in tower.nonzero_elements():
        tg, tinv = trace(g), trace(g.inv())
        if tg == one and tinv == one:
            lit.append(g)
        if tg == t1 and tinv == t1:
            norm.append(g)
    return TraceUniqueness(tower.q, t1.coeffs[0], tuple(lit), tuple(norm))


# -- backtracking search ------------------------------------------------------

class _SearchContext:
    """Bitmask tables for the search.

    ``compat[x][l][w]`` is the set of lines still allowed for point ``w``
    once ``x -> l`` is fixed: not ``l`` itself, not through ``w`` (P1) and
    P2-consistent for the pair ``(x, w)``.
    """

    def __init__(self, plane: Plane):
        n = plane.num_points
        self.n = n
        nl = plane.num_lines
        inc = [[plane.incident(p, l) for l in range(nl)] for p in range(n)]

        def join(a, b):
            ls = plane.common_lines(a, b)
            return ls[0] if ls else None

        def cross(a, b):
            ps = plane.common_points(a, b)
            return ps[0] if ps else None

        self.initial = []
        for w in range(n):
            self.initial.append(sum(1 << l for l in range(nl) if not inc[w][l]))
        self.compat = []
        for x in range(n):
            per_line = []
            for l in range(nl):
                per_w = []
                for w in range(n):
                    if w == x:
                        per_w.append(0)
                        continue
                    jl = join(x, w)
                    mask = 0
                    for m in range(nl):
                        if m == l or inc[w][m]:
                            continue
                        z = cross(l, m)
                        # undecidable on a broken plane: leave it to certification
                        if z is not None and jl is not None and inc[z][jl]:
                            continue
                        mask |= 1 << m
                    per_w.append(mask)
                per_line.append(per_w)
            self.compat.append(per_line)


class _Search:
    def __init__(self, ctx: _SearchContext, budget: Optional[int]):
        self.ctx = ctx
        self.budget = budget
        self.nodes = 0

    def run(self, prefix: tuple[int, ...] = ()) -> Optional[tuple[int, ...]]:
        ctx = self.ctx
        domains = list(ctx.initial)
        assignment = []
        for x, l in enumerate(prefix):
            if not domains[x] >> l & 1:
                return None
            domains = self._restrict(domains, x, l)
            if domains is None:
                return None
            assignment.append(l)
        return self._dfs(len(prefix), domains, assignment)

    def _restrict(self, domains, x, l):
        row = self.ctx.compat[x][l]
        out = list(domains)
        for w in range(x + 1, self.ctx.n):
            out[w] = domains[w] & row[w]
            if not out[w]:
                return None
        return out

    def _dfs(self, x, domains, assignment):
        if x == self.ctx.n:
            return tuple(assignment)
        dom = domains[x]
        while dom:
            low = dom & -dom
            l = low.bit_length() - 1
            dom ^= low
            self.nodes += 1
            if self.budget is not None and self.nodes > self.budget:
                raise BudgetExceeded(self.nodes)
            child = self._restrict(domains, x, l)
            if child is None:
                continue
            assignment.append(l)
            found = self._dfs(x + 1, child, assignment)
            if found is not None:
                return found
            assignment.pop()
        return None


_WORKER_CTX: Optional[_SearchContext] = None


def _init_worker(ctx):
    global _WORKER_CTX
    _WORKER_CTX = ctx


def _search_prefix(args):
    prefix, budget = args
    search = _Search(_WORKER_CTX, budget)
    try:
        return search.run(prefix), search.nodes, False
    except BudgetExceeded:
        return None, search.nodes, True


def search_bijection(plane: Plane, budget: Optional[int] = None, jobs: int = 1) -> PointLineBijection:
    """Lexicographically first basic bijection by depth-first search.

    Points are assigned in index order, candidate lines in index order.  A
    branch dies when its point has no line left that avoids the point, is
    unused, and is P2-consistent with every earlier assignment.  With
    ``jobs > 1`` the subtrees below ``x0`` run in worker processes, each
    with the full ``budget``; the first solving subtree in line order wins,
    so the answer does not depend on ``jobs``.

    Raises SearchExhausted when no bijection exists and BudgetExceeded when
    the node budget runs out first.
    """
    ctx = _SearchContext(plane)
    if jobs <= 1:
        search = _Search(ctx, budget)
        found = search.run()
        nodes = search.nodes
    else:
        prefixes = [(l,) for l in range(plane.num_lines)]
        found, nodes = None, 0
        with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(ctx,)) as pool:
            for result, n, over in pool.map(_search_prefix, [(p, budget) for p in prefixes]):
                nodes += n
                if over:
                    pool.shutdown(cancel_futures=True)
                    raise BudgetExceeded(nodes)
                if result is not None:
                    found = result
                    pool.shutdown(cancel_futures=True)
                    break
    log.info("search on %s: %d nodes", plane.name, nodes)
    if found is None:
        raise SearchExhausted(nodes)
    T = PointLineBijection(plane, found)
    verify_properties(plane, T)
    return T


# -- file format --------------------------------------------------------------

_BIJ_HEADER = re.compile(r"^bijection over (\S+)$")
_BIJ_RECORD = re.compile(r"^p(\d+)\s*->\s*L(\d+)$")


def write_bijection(T: PointLineBijection) -> str:
    out = [f"bijection over {T.plane.name}"]
    out += [f"p{x} -> L{l}" for x, l in enumerate(T.map)]
    return "\n".join(out) + "\n"


def read_bijection(text: str, plane: Plane) -> PointLineBijection:
    """Parse a bijection file and recertify it against ``plane``."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    head = _BIJ_HEADER.match(lines[0]) if lines else None
    if not head:
        raise PlaneFormatError("bad bijection header")
    if head.group(1) != plane.name:
        raise PlaneMismatch(f"bijection is over {head.group(1)}, not {plane.name}")
    entries = {}
    for ln in lines[1:]:
        m = _BIJ_RECORD.match(ln)
        if not m:
            raise PlaneFormatError(f"bad bijection record: {ln!r}")
        entries[int(m.group(1))] = int(m.group(2))
    if sorted(entries) != list(range(plane.num_points)):
        raise PlaneFormatError("bijection does not list every point exactly once")
    T = PointLineBijection(plane, tuple(entries[x] for x in range(plane.num_points)))
    verify_properties(plane, T)
    return T
