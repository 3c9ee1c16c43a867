"""Square classes, Hilbert symbols and splitting-variety points over Q.

All arithmetic is exact (``int`` and ``fractions.Fraction``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from sympy import factorint, isprime

from .errors import HeightCapExceeded, NotANorm, NotDefined

INF = "inf"


@lru_cache(maxsize=4096)
def _split_square(a: int) -> tuple[int, int]:
    """(squarefree r, s > 0) with a = r * s**2."""
    if a == 0:
        raise ValueError("zero has no square class")
    r, s = (-1 if a < 0 else 1), 1
    for q, e in factorint(abs(a)).items():
        if e % 2:
            r *= q
        s *= q ** (e // 2)
    return r, s


@dataclass(frozen=True)
class SquareClass:
    """Class of a nonzero integer in Q*/Q*^2, kept as its squarefree representative."""

    representative: int

    def __post_init__(self):
        rep, _ = _split_square(int(self.representative))
        object.__setattr__(self, "representative", rep)

    @classmethod
    def of(cls, a) -> SquareClass:
        return a if isinstance(a, SquareClass) else cls(int(a))

    @property
    def is_square(self) -> bool:
        return self.representative == 1

    def __mul__(self, other: SquareClass) -> SquareClass:
        return SquareClass(self.representative * SquareClass.of(other).representative)

    def __int__(self) -> int:
        return self.representative

    def __str__(self) -> str:
        return str(self.representative)


def _value(a) -> int:
    if isinstance(a, SquareClass):
        return a.representative
    a = int(a)
    if a == 0:
        raise ValueError("zero has no square class")
    return a


def _legendre(u: int, q: int) -> int:
    r = pow(u % q, (q - 1) // 2, q)
    return -1 if r == q - 1 else r


def _valuation(a: int, q: int) -> tuple[int, int]:
    k = 0
    while a % q == 0:
        a //= q
        k += 1
    return k, a


def hilbert_symbol(a, b, place) -> int:
    """Local Hilbert symbol (a, b) at a prime or at ``"inf"``."""
    a, b = _value(a), _value(b)
    if place == INF or place == float("inf"):
        return -1 if a < 0 and b < 0 else 1
    q = int(place)
    if not isprime(q):
        raise ValueError(f"{place} is not a place of Q")
    alpha, u = _valuation(a, q)
    beta, v = _valuation(b, q)
    if q == 2:
        def eps(t: int) -> int:
            return ((t - 1) // 2) % 2

        def omega(t: int) -> int:
            return ((t * t - 1) // 8) % 2

        e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if e % 2 else 1
    sign = -1 if (alpha * beta * ((q - 1) // 2)) % 2 else 1
    return sign * _legendre(u, q) ** beta * _legendre(v, q) ** alpha


def relevant_places(*values) -> list:
    """``inf``, 2 and the odd primes dividing any of the values."""
    primes = {2}
    for v in values:
        primes |= set(factorint(abs(_value(v))))
    return [INF] + sorted(primes)


def cup_vanishes(a, b) -> bool:
    """Whether b is a norm from Q(sqrt a), i.e. all local symbols are +1."""
    return all(hilbert_symbol(a, b, v) == 1 for v in relevant_places(a, b))


def holzer_bound(a: int, b: int) -> int:
    """Height below which x^2 = a y^2 + b z^2 has a solution with z != 0, if any."""
    ra, _ = _split_square(a)
    rb, _ = _split_square(b)
    return max(isqrt(abs(ra)), isqrt(abs(rb))) + 1


def norm_solve(a, b, height_cap: int | None = None) -> tuple[Fraction, Fraction]:
    """Rationals (s, t) with b = s**2 - a * t**2."""
    a, b = _value(a), _value(b)
    if not cup_vanishes(a, b):
        raise NotANorm(f"{b} is not a norm from Q(sqrt({a}))")
    ra, sa = _split_square(a)
    rb, sb = _split_square(b)
    if ra == 1:
        # s^2 - (sa t)^2 = b via s - sa t = 1, s + sa t = b
        return Fraction(b + 1, 2), Fraction(b - 1, 2 * sa)
    bound = holzer_bound(ra, rb)
    cap = bound if height_cap is None else min(height_cap, bound)
    for h in range(1, cap + 1):
        for z in range(1, h + 1):
            ys = range(h + 1) if z == h else (h,)
            for y in ys:
                rhs = ra * y * y + rb * z * z
                if rhs < 0:
                    continue
                x = isqrt(rhs)
                if x * x == rhs:
                    return Fraction(x * sb, z), Fraction(y * sb, z * sa)
    raise HeightCapExceeded(f"no point of height <= {cap} on x^2 = {ra}y^2 + {rb}z^2")


@dataclass(frozen=True)
class SplittingPoint:
    """Rational point (x, y1..y4) with x != 0 on the splitting variety of (a, b, c)."""

    a: int
    b: int
    c: int
    x: Fraction
    y: tuple[Fraction, Fraction, Fraction, Fraction]

    def lhs(self) -> Fraction:
        return self.b * self.x ** 2

    def rhs(self) -> Fraction:
        a, c = self.a, self.c
        y1, y2, y3, y4 = self.y
        first = y1 ** 2 - a * y2 ** 2 + c * y3 ** 2 - a * c * y4 ** 2
        second = y1 * y3 - a * y2 * y4
        return first ** 2 - 4 * c * second ** 2

    def verify(self) -> bool:
        return self.x != 0 and self.lhs() == self.rhs()

    def coordinates(self) -> tuple[Fraction, ...]:
        return (self.x, *self.y)

    def to_json(self) -> dict:
        return {
            "x": str(self.x),
            "y": [str(v) for v in self.y],
            "lhs": str(self.lhs()),
            "rhs": str(self.rhs()),
        }


@dataclass(frozen=True)
class TrivialVanishing:
    """One of a, b, c is a square, so its character is trivial."""

    square: str
    value: int

    def to_json(self) -> dict:
        return {"trivial_character": self.square, "value": self.value}


def _rescale(point: SplittingPoint, a: int, b: int, c: int) -> SplittingPoint:
    """Move a point for squarefree representatives to the original a, b, c."""
    _, sa = _split_square(a)
    _, sb = _split_square(b)
    _, sc = _split_square(c)
    y1, y2, y3, y4 = point.y
    return SplittingPoint(a, b, c, point.x / sb,
                          (y1, y2 / sa, y3 / sc, y4 / (sa * sc)))


def _point(a, b, c, height_cap=None) -> tuple[SplittingPoint | TrivialVanishing, dict]:
    a, b, c = _value(a), _value(b), _value(c)
    for name, v in (("a", a), ("b", b), ("c", c)):
        if _split_square(v)[0] == 1:
            return TrivialVanishing(name, v), {}
    if not (cup_vanishes(a, b) and cup_vanishes(b, c)):
        raise NotDefined(f"<{a}, {b}, {c}> is not defined")
    ra, rb, rc = (_split_square(v)[0] for v in (a, b, c))
    one = Fraction(1)
    alpha = norm_solve(ra, rb, height_cap)
    norms = {"a": alpha}
    if ra == rc:
        a1, a2 = alpha
        if a1 != 0:
            base = SplittingPoint(ra, rb, ra, 4 * a1, (2 * a1, a2, a2, 0 * one))
        else:
            base = SplittingPoint(ra, rb, ra, 4 * ra * one, (ra * one, a2, a2, -one))
    else:
        gamma = norm_solve(rc, rb, height_cap)
        norms["c"] = gamma
        total = alpha[0] + gamma[0]
        if total == 0:
            raise RuntimeError("alpha1 + gamma1 vanished for non-square a/c and b")
        base = SplittingPoint(ra, rb, rc, 2 * total, (total, alpha[1], gamma[1], 0 * one))
    point = _rescale(base, a, b, c)
    if not point.verify():
        raise RuntimeError(f"splitting point {point} fails the quartic identity")
    return point, norms


def splitting_point(a, b, c, height_cap: int | None = None) -> SplittingPoint | TrivialVanishing:
    """A verified rational point on the splitting variety, or a trivial-character marker."""
    return _point(a, b, c, height_cap)[0]


@dataclass
class GaloisReport:
    a: int
    b: int
    c: int
    defined: bool
    certificate: SplittingPoint | TrivialVanishing | None = None
    norms: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "Defined" if self.defined else "NotDefined"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "triple": [self.a, self.b, self.c],
            "certificate": self.certificate.to_json() if self.certificate else None,
            "norms": {k: [str(v) for v in pair] for k, pair in self.norms.items()},
        }


def galois_triple_check(a, b, c, height_cap: int | None = None) -> GaloisReport:
    """Definedness of <chi_a, chi_b, chi_c> over Q and, if defined, a vanishing certificate."""
    a, b, c = _value(a), _value(b), _value(c)
    defined = cup_vanishes(a, b) and cup_vanishes(b, c)
    if not defined:
        return GaloisReport(a, b, c, False)
    cert, norms = _point(a, b, c, height_cap)
    return GaloisReport(a, b, c, True, cert, norms)

