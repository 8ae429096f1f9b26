"""Exact arithmetic in the tower F_p <= F_q <= K = F_{q^3}.

Elements of the base field F_q are plain ints in ``range(q)``: the integer
``sum(c_i * p**i)`` encodes the residue vector ``(c_0, ..., c_{e-1})`` over
F_p in the power basis of ``base_modulus``.  Elements of K are
:class:`FieldElement` objects holding three such ints, the coordinates in the
power basis ``1, u, u^2`` of ``ext_modulus``.

Moduli are the smallest monic irreducible polynomials in the ordering that
scans coefficient vectors (low-to-high) by increasing integer encoding, so a
tower depends only on ``(p, e)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterator, Sequence

from .errors import (
    CompositeCharacteristic,
    DivisionByZero,
    InternalInconsistency,
    NotPrimePower,
    SizeBound,
    TowerMismatch,
)

MAX_CHAR = 97
MAX_ORDER = 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q`` as ``p**e``; raise NotPrimePower otherwise."""
    if q < 2:
        raise NotPrimePower(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, rest = 0, q
    while rest % p == 0:
        rest //= p
        e += 1
    if rest != 1:
        raise NotPrimePower(f"{q} is not a prime power")
    return p, e


# -- polynomials over F_p (tuples of ints, low-to-high) ----------------------

def _poly_rem_mod_p(num: Sequence[int], den: Sequence[int], p: int) -> list[int]:
    num = list(num)
    lead_inv = pow(den[-1], p - 2, p)
    d = len(den) - 1
    for shift in range(len(num) - 1 - d, -1, -1):
        c = num[shift + d] * lead_inv % p
        if c:
            for i, dc in enumerate(den):
                num[shift + i] = (num[shift + i] - c * dc) % p
    return num[:d] if d else []


def _monic_polys(p: int, degree: int) -> Iterator[tuple[int, ...]]:
    """Monic polynomials of ``degree`` by increasing integer encoding."""
    for code in range(p**degree):
        low = tuple((code // p**i) % p for i in range(degree))
        yield low + (1,)


def _irreducible_mod_p(f: Sequence[int], p: int) -> bool:
    deg = len(f) - 1
    for d in range(1, deg // 2 + 1):
        for g in _monic_polys(p, d):
            if not any(_poly_rem_mod_p(f, g, p)):
                return False
    return True


def smallest_irreducible_mod_p(p: int, degree: int) -> tuple[int, ...]:
    for f in _monic_polys(p, degree):
        if _irreducible_mod_p(f, p):
            return f
    raise InternalInconsistency(f"no irreducible polynomial of degree {degree} over F_{p}")


class BaseField:
    """F_q = F_p[x] / (base_modulus), elements encoded as ints."""

    def __init__(self, p: int, modulus: tuple[int, ...]):
        self.p = p
        self.e = len(modulus) - 1
        self.q = p**self.e
        self.modulus = modulus
        q = self.q
        self._add = [[self._vec_add(a, b) for b in range(q)] for a in range(q)]
        self._mul = [[self._vec_mul(a, b) for b in range(q)] for a in range(q)]
        self._neg = [row.index(0) for row in self._add]
        self._inv = [0] + [self._mul[a].index(1) for a in range(1, q)]

    def digits(self, a: int) -> tuple[int, ...]:
        return tuple((a // self.p**i) % self.p for i in range(self.e))

    def encode(self, digits: Sequence[int]) -> int:
        return sum((c % self.p) * self.p**i for i, c in enumerate(digits))

    def _vec_add(self, a, b):
        return self.encode([x + y for x, y in zip(self.digits(a), self.digits(b))])

    def _vec_mul(self, a, b):
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] = (prod[i + j] + x * y) % self.p
        if self.e > 1:
            prod = _poly_rem_mod_p(prod, self.modulus, self.p)
        return self.encode(prod)

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of 0 in F_q")
        return self._inv[a]

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` under Z -> F_q."""
        return n % self.p


def _base_has_root(base: BaseField, f: Sequence[int]) -> bool:
    for x in range(base.q):
        acc = 0
        for c in reversed(f):
            acc = base.add(base.mul(acc, x), c)
        if acc == 0:
            return True
    return False


def smallest_irreducible_cubic(base: BaseField) -> tuple[int, ...]:
    # a cubic is irreducible iff it has no root
    for code in range(base.q**3):
        f = (code % base.q, (code // base.q) % base.q, code // base.q**2, 1)
        if not _base_has_root(base, f):
            return f
    raise InternalInconsistency("no irreducible cubic found")


@dataclass(frozen=True, eq=False)
class FieldTower:
    char_p: int
    base_degree_e: int
    base_modulus: tuple[int, ...]
    ext_modulus: tuple[int, ...]
    base: BaseField = field(repr=False)

    @property
    def q(self) -> int:
        return self.base.q

    @property
    def Q(self) -> int:
        return self.base.q**3

    def __eq__(self, other):
        if not isinstance(other, FieldTower):
            return NotImplemented
        return (self.char_p, self.base_modulus, self.ext_modulus) == (
            other.char_p,
            other.base_modulus,
            other.ext_modulus,
        )

    def __hash__(self):
        return hash((self.char_p, self.base_modulus, self.ext_modulus))

    def element(self, coeffs: Sequence[int]) -> "FieldElement":
        if len(coeffs) != 3 or any(not 0 <= c < self.q for c in coeffs):
            raise ValueError(f"bad coefficient vector {coeffs!r} for q={self.q}")
        return FieldElement(self, tuple(coeffs))

    def scalar(self, a: int) -> "FieldElement":
        return FieldElement(self, (a, 0, 0))

    def zero(self) -> "FieldElement":
        return self.scalar(0)

    def one(self) -> "FieldElement":
        return self.scalar(1)

    def generator(self) -> "FieldElement":
        """The class of ``u``, a root of ``ext_modulus``."""
        return FieldElement(self, (0, 1, 0))

    def elements(self) -> Iterator["FieldElement"]:
        for c2, c1, c0 in product(range(self.q), repeat=3):
            yield FieldElement(self, (c0, c1, c2))

    def nonzero_elements(self) -> Iterator["FieldElement"]:
        return (g for g in self.elements() if g)

    @cached_property
    def _frobenius_images(self) -> tuple["FieldElement", ...]:
        u = self.generator()
        return tuple((u**i) ** self.q for i in range(3))

    def __repr__(self):
        return f"FieldTower(p={self.char_p}, e={self.base_degree_e}, q={self.q})"


@lru_cache(maxsize=None)
def make_tower(char_p: int, base_degree_e: int = 1, max_q: int = MAX_ORDER) -> FieldTower:
    if not is_prime(char_p):
        raise CompositeCharacteristic(f"characteristic {char_p} is not prime")
    if base_degree_e < 1:
        raise ValueError("base degree must be positive")
    q = char_p**base_degree_e
    if char_p > MAX_CHAR or q > max_q:
        raise SizeBound(f"q = {q} exceeds the bound {max_q}")
    base_mod = smallest_irreducible_mod_p(char_p, base_degree_e)
    base = BaseField(char_p, base_mod)
    ext_mod = smallest_irreducible_cubic(base)
    return FieldTower(char_p, base_degree_e, base_mod, ext_mod, base)


def tower_for_order(q: int, max_q: int = MAX_ORDER) -> FieldTower:
    p, e = prime_power(q)
    return make_tower(p, e, max_q)


class FieldElement:
    __slots__ = ("tower", "coeffs")

    def __init__(self, tower: FieldTower, coeffs: tuple[int, int, int]):
        self.tower = tower
        self.coeffs = coeffs

    def _check(self, other) -> "FieldElement":
        if isinstance(other, int):
            return self.tower.scalar(self.tower.base.from_int(other))
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.tower is not self.tower and other.tower != self.tower:
            raise TowerMismatch(f"{self.tower!r} vs {other.tower!r}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        add = self.tower.base.add
        a, b = self.coeffs, other.coeffs
        return FieldElement(self.tower, (add(a[0], b[0]), add(a[1], b[1]), add(a[2], b[2])))

    __radd__ = __add__

    def __neg__(self):
        neg = self.tower.base.neg
        return FieldElement(self.tower, tuple(neg(c) for c in self.coeffs))

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        base = self.tower.base
        add, mul = base.add, base.mul
        a, b = self.coeffs, other.coeffs
        prod = [0] * 5
        for i in range(3):
            if a[i]:
                for j in range(3):
                    prod[i + j] = add(prod[i + j], mul(a[i], b[j]))
        # u^3 = -(m0 + m1 u + m2 u^2)
        m = self.tower.ext_modulus
        for d in (4, 3):
            c = prod[d]
            if c:
                prod[d] = 0
                for i in range(3):
                    prod[d - 3 + i] = base.sub(prod[d - 3 + i], mul(c, m[i]))
        return FieldElement(self.tower, (prod[0], prod[1], prod[2]))

    __rmul__ = __mul__

    def inv(self) -> "FieldElement":
        if not self:
            raise DivisionByZero("inverse of 0")
        # g^(Q-2) = g^-1 in K*
        return self ** (self.tower.Q - 2)

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        result = self.tower.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.coeffs == other.coeffs and self.tower == other.tower

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return self.coeffs != (0, 0, 0)

    def in_base(self) -> bool:
        return self.coeffs[1] == 0 and self.coeffs[2] == 0

    def __repr__(self):
        return f"FieldElement{self.coeffs}"

    def frobenius(self) -> "FieldElement":
        return frobenius(self)

    def trace(self) -> "FieldElement":
        return trace(self)


def frobenius(g: FieldElement) -> FieldElement:
    """``g ** q``, evaluated through the F_q-linear images of 1, u, u^2."""
    tower = g.tower
    mul, add = tower.base.mul, tower.base.add
    out = [0, 0, 0]
    for c, img in zip(g.coeffs, tower._frobenius_images):
        if c:
            for i in range(3):
                out[i] = add(out[i], mul(c, img.coeffs[i]))
    return FieldElement(tower, tuple(out))


def trace(g: FieldElement) -> FieldElement:
    g1 = frobenius(g)
    t = g + g1 + frobenius(g1)
    if not t.in_base():
        raise InternalInconsistency(f"trace of {g!r} left the base field")
    return t


@dataclass(frozen=True)
class MinimalPolynomial:
    """Monic polynomial over F_q, coefficients low-to-high."""

    tower: FieldTower = field(repr=False, compare=False)
    coeffs: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, g: FieldElement) -> FieldElement:
        acc = g.tower.zero()
        for c in reversed(self.coeffs):
            acc = acc * g + g.tower.scalar(c)
        return acc

    def __str__(self):
        terms = []
        for d in range(self.degree, -1, -1):
            c = self.coeffs[d]
            if not c:
                continue
            mono = "" if d == 0 else ("x" if d == 1 else f"x^{d}")
            if c == 1 and mono:
                terms.append(mono)
            else:
                terms.append(f"{c}{'*' if mono else ''}{mono}")
        return " + ".join(terms) or "0"


def _solve_in_span(base: BaseField, vectors: list[tuple[int, ...]], target: tuple[int, ...]):
    """Coefficients expressing ``target`` in the span of ``vectors`` or None.

    ``vectors`` must be linearly independent.
    """
    n = len(vectors)
    # rows = coordinates, columns = unknowns | rhs
    rows = [[vectors[j][r] for j in range(n)] + [target[r]] for r in range(3)]
    pivots = []
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, 3) if rows[i][col]), None)
        if pivot is None:
            raise InternalInconsistency("powers of a field element became dependent early")
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = base.inv(rows[r][col])
        rows[r] = [base.mul(inv, x) for x in rows[r]]
        for i in range(3):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [base.sub(x, base.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    if any(rows[i][n] for i in range(r, 3)):
        return None
    return [rows[i][n] for i in range(n)]


def minimal_poly(g: FieldElement) -> MinimalPolynomial:
    """First F_q-linear dependency among 1, g, g^2, g^3."""
    tower = g.tower
    base = tower.base
    powers = [tower.one().coeffs]
    cur = tower.one()
    for d in range(1, 4):
        cur = cur * g
        sol = _solve_in_span(base, powers, cur.coeffs)
        if sol is not None:
            if d == 2:
                raise InternalInconsistency(f"{g!r} has a quadratic minimal polynomial over F_q")
            return MinimalPolynomial(tower, tuple(base.neg(c) for c in sol) + (1,))
        powers.append(cur.coeffs)
    raise InternalInconsistency(f"{g!r} has no minimal polynomial of degree <= 3")
