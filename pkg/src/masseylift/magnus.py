"""Magnus images in F_p<<X_1..X_d>> truncated above degree 3.

The image of a word ``w`` in the free pro-p group S determines its class in
S/S_(4): ``w`` lies in the Zassenhaus term S_(n) (n <= 4) exactly when its
image is congruent to 1 modulo terms of degree n. The canonical
decomposition modulo S_(4) is read off degree by degree:

* p = 2:  prod x_i^(2 a_i) * prod [x_i,x_j]^b_ij * prod [[x_i,x_j],x_k]^c_ijk * r'
* p = 3:  prod [x_i,x_j]^b_ij * prod x_i^(3 a_i) * prod [[x_i,x_j],x_k]^c_ijk * r'
* p >= 5: prod [x_i,x_j]^b_ij * prod [[x_i,x_j],x_k]^c_ijk * r'

with i < j, k <= j, every product taken in lexicographic order of its
index tuple, and r' in S_(4).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import kernel
from .errors import InternalBasisError, NotInS2
from .gfp import ColumnSolver
from .words import FreeWord, commutator, generator, identity, word_power

LEVEL_AT_LEAST_4 = 4


class TruncatedSeries:
    """Noncommutative polynomial of degree <= 3 with coefficients mod p.

    Coefficients live in one dense vector: the constant term, then the
    ``d`` linear, ``d**2`` quadratic and ``d**3`` cubic monomials, each block
    in lexicographic order of the variable indices.
    """

    __slots__ = ("p", "d", "coeffs")

    def __init__(self, p: int, d: int, coeffs=None):
        self.p = p
        self.d = d
        size = 1 + d + d * d + d ** 3
        if coeffs is None:
            coeffs = np.zeros(size, dtype=np.int64)
            coeffs[0] = 1
        coeffs = np.asarray(coeffs, dtype=np.int64) % p
        if coeffs.shape != (size,):
            raise ValueError(f"expected {size} coefficients, got {coeffs.shape}")
        self.coeffs = coeffs

    @classmethod
    def one(cls, p: int, d: int) -> TruncatedSeries:
        return cls(p, d)

    @classmethod
    def from_parts(cls, p, d, c0, c1, c2, c3) -> TruncatedSeries:
        flat = np.concatenate([[c0], np.ravel(c1), np.ravel(c2), np.ravel(c3)])
        return cls(p, d, flat)

    @property
    def c0(self) -> int:
        return int(self.coeffs[0])

    @property
    def c1(self) -> np.ndarray:
        return self.coeffs[1:1 + self.d]

    @property
    def c2(self) -> np.ndarray:
        d = self.d
        return self.coeffs[1 + d:1 + d + d * d].reshape(d, d)

    @property
    def c3(self) -> np.ndarray:
        d = self.d
        return self.coeffs[1 + d + d * d:].reshape(d, d, d)

    def coefficient(self, *monomial: int) -> int:
        """Coefficient of X_{i1}...X_{im} (1-based indices, m <= 3)."""
        idx = tuple(i - 1 for i in monomial)
        if not idx:
            return self.c0
        part = (self.c1, self.c2, self.c3)[len(idx) - 1]
        return int(part[idx])

    def __mul__(self, other: TruncatedSeries) -> TruncatedSeries:
        if (self.p, self.d) != (other.p, other.d):
            raise ValueError("series over different rings")
        a0, a1, a2, a3 = self.c0, self.c1, self.c2, self.c3
        b0, b1, b2, b3 = other.c0, other.c1, other.c2, other.c3
        c1 = a0 * b1 + a1 * b0
        c2 = a0 * b2 + np.multiply.outer(a1, b1) + a2 * b0
        c3 = (a0 * b3 + np.multiply.outer(a1, b2) + np.multiply.outer(a2, b1)
              + a3 * b0)
        return TruncatedSeries.from_parts(self.p, self.d, a0 * b0, c1, c2, c3)

    def inverse(self) -> TruncatedSeries:
        if self.c0 != 1:
            raise ValueError("only series with constant term 1 are inverted here")
        one = TruncatedSeries.one(self.p, self.d)
        nil = TruncatedSeries(self.p, self.d, one.coeffs - self.coeffs)
        nil.coeffs[0] = 0
        # (1 - N)^-1 = 1 + N + N^2 + N^3 in degree <= 3
        total, power = one, one
        for _ in range(3):
            power = power * nil
            power.coeffs[0] = 0
            total = TruncatedSeries(self.p, self.d, total.coeffs + power.coeffs)
        return total

    def __pow__(self, n: int) -> TruncatedSeries:
        base = self if n >= 0 else self.inverse()
        out = TruncatedSeries.one(self.p, self.d)
        for _ in range(abs(n)):
            out = out * base
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.p, self.d) == (other.p, other.d) and np.array_equal(
            self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.p, self.d, self.coeffs.tobytes()))

    def is_identity(self) -> bool:
        return self.c0 == 1 and not self.coeffs[1:].any()

    def level(self) -> int:
        """Largest n <= 4 with self == 1 modulo degree n."""
        if self.c1.any():
            return 1
        if self.c2.any():
            return 2
        if self.c3.any():
            return 3
        return LEVEL_AT_LEAST_4

    def __repr__(self) -> str:
        terms = []
        for part in (self.c1, self.c2, self.c3):
            for idx in zip(*np.nonzero(part)):
                mono = "".join(f"X{i + 1}" for i in idx)
                terms.append(f"{int(part[idx])}*{mono}")
        body = " + ".join(["1"] + terms) if self.c0 == 1 else repr(self.coeffs)
        return f"TruncatedSeries(p={self.p}, d={self.d}: {body})"


def magnus_image(w: FreeWord, p: int) -> TruncatedSeries:
    """Image of ``w`` under x_i -> 1 + X_i."""
    runs = np.array([(g - 1, e) for g, e in w.letters], dtype=np.int64).reshape(-1, 2)
    return TruncatedSeries(p, w.d, kernel.magnus_runs(runs, w.d, p))


def zassenhaus_level(w: FreeWord, p: int) -> int:
    """Largest n <= 4 with w in S_(n); ``LEVEL_AT_LEAST_4`` means n >= 4."""
    return magnus_image(w, p).level()


def pair_indices(d: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, d + 1) for j in range(i + 1, d + 1)]


def triple_indices(d: int) -> list[tuple[int, int, int]]:
    return [(i, j, k) for i in range(1, d + 1) for j in range(i + 1, d + 1)
            for k in range(1, j + 1)]


def has_power_terms(p: int) -> bool:
    return p in (2, 3)


@dataclass
class CanonicalDecomposition:
    """Exponents of the canonical decomposition modulo S_(4).

    ``a`` is empty unless p is 2 or 3. All maps carry every index, zeros
    included.
    """

    p: int
    d: int
    a: dict[int, int]
    b: dict[tuple[int, int], int]
    c: dict[tuple[int, int, int], int]
    residual: TruncatedSeries = field(repr=False)

    def u(self, i: int, j: int) -> int:
        if i == j:
            raise ValueError("u is only defined for distinct indices")
        return self.b[(min(i, j), max(i, j))]

    def nonzero(self) -> dict[str, int]:
        """Nonzero exponents keyed like ``a1``, ``b45``, ``c231``."""
        sep = "," if self.d >= 10 else ""
        out: dict[str, int] = {}
        for name, table in (("a", self.a), ("b", self.b), ("c", self.c)):
            for key, val in table.items():
                if val:
                    idx = key if isinstance(key, tuple) else (key,)
                    out[name + sep.join(map(str, idx))] = val
        return out

    def to_word(self) -> FreeWord:
        return compose_canonical(self.p, self.d, self.a, self.b, self.c)


def compose_canonical(p: int, d: int, a=None, b=None, c=None) -> FreeWord:
    """The product word prescribed by the canonical decomposition shape."""
    a, b, c = a or {}, b or {}, c or {}
    x = [None] + [generator(i, d) for i in range(1, d + 1)]
    powers = identity(d)
    for i in range(1, d + 1):
        if a.get(i, 0):
            powers = powers * word_power(x[i], p * a[i])
    commutators = identity(d)
    for i, j in pair_indices(d):
        if b.get((i, j), 0):
            commutators = commutators * word_power(commutator(x[i], x[j]), b[(i, j)])
    triples = identity(d)
    for i, j, k in triple_indices(d):
        if c.get((i, j, k), 0):
            triples = triples * word_power(
                commutator(commutator(x[i], x[j]), x[k]), c[(i, j, k)])
    if p == 2:
        return powers * commutators * triples
    if p == 3:
        return commutators * powers * triples
    return commutators * triples


class _DegreeThreeBasis:
    """Degree-3 parts of [[x_i,x_j],x_k] (and x_i^3 when p = 3) as columns."""

    def __init__(self, p: int, d: int):
        self.labels: list[tuple] = []
        columns = []
        x = [None] + [generator(i, d) for i in range(1, d + 1)]
        if p == 3:
            for i in range(1, d + 1):
                self.labels.append(("a", i))
                columns.append(magnus_image(word_power(x[i], 3), p).c3.ravel())
        for i, j, k in triple_indices(d):
            self.labels.append(("c", (i, j, k)))
            w = commutator(commutator(x[i], x[j]), x[k])
            columns.append(magnus_image(w, p).c3.ravel())
        if not columns:
            self.solver = None
            return
        matrix = np.stack(columns, axis=1)
        try:
            self.solver = ColumnSolver(matrix, p)
        except ValueError as exc:
            raise InternalBasisError(f"degree-3 basis for p={p}, d={d}: {exc}") from exc

    def solve(self, target: np.ndarray) -> dict[tuple, int]:
        if self.solver is None:
            if np.any(target):
                raise InternalBasisError("nonzero degree-3 part with empty basis")
            return {}
        x = self.solver.solve(target)
        if x is None:
            raise InternalBasisError("degree-3 part is outside the span of the basis")
        return dict(zip(self.labels, (int(v) for v in x)))


@lru_cache(maxsize=None)
def degree_three_basis(p: int, d: int) -> _DegreeThreeBasis:
    return _DegreeThreeBasis(p, d)


def canonical_decompose(w, p: int) -> CanonicalDecomposition:
    """Canonical decomposition modulo S_(4) of a word (or its Magnus image)."""
    img = w if isinstance(w, TruncatedSeries) else magnus_image(w, p)
    d = img.d
    if img.c1.any():
        raise NotInS2("element has nonzero degree-1 Magnus coefficients")
    if not degree_two_is_lie(img):
        raise InternalBasisError("degree-2 part is not in the Lie span")
    c2 = img.c2
    if p == 2:
        a = {i: int(c2[i - 1, i - 1]) for i in range(1, d + 1)}
    else:
        a = {i: 0 for i in range(1, d + 1)} if p == 3 else {}
    b = {(i, j): int(c2[i - 1, j - 1]) for i, j in pair_indices(d)}

    prefix = magnus_image(compose_canonical(p, d, a=a if p == 2 else None, b=b), p)
    rest = prefix.inverse() * img
    if rest.level() < 3:
        raise InternalBasisError("quotient by the degree-2 prefix is not in S_(3)")
    solved = degree_three_basis(p, d).solve(rest.c3.ravel())
    c = {t: 0 for t in triple_indices(d)}
    for (kind, key), val in solved.items():
        if kind == "a":
            a[key] = val
        else:
            c[key] = val
    full = magnus_image(compose_canonical(p, d, a=a, b=b, c=c), p)
    residual = full.inverse() * img
    if not residual.is_identity():
        raise InternalBasisError("residual is not trivial modulo degree 4")
    return CanonicalDecomposition(p, d, a, b, c, residual)


def degree_two_is_lie(img: TruncatedSeries) -> bool:
    """Whether the quadratic part is symmetric (p = 2) or alternating (p odd)."""
    c2 = img.c2
    p = img.p
    if p == 2:
        return bool(np.array_equal(c2, c2.T))
    return not ((c2 + c2.T) % p).any()

