"""Unipotent upper-triangular matrices over F_p and representation search.

Matrices are ``(n+1) x (n+1)`` with unit diagonal; positions are 1-based in
the public API. A :class:`BarUnipotent` is the quotient by the centre: its
top-right corner is held at zero and never compared.

A homomorphism from a presented group to the bar group with prescribed
near-diagonal entries is searched level by level. Level ``m`` means the
entries ``(i, i+m)``. Since every relator has exponent sums divisible by
``p``, the level-``m`` entries of a relator image depend only on the
generator entries of levels below ``m``. So the search fixes one level at a
time and prunes on the next relator level.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from . import kernel
from .errors import BudgetExceeded, DimensionMismatch, FoldTooLarge, GeneratorIndexError
from .words import FreeWord, PresentationSpec

DEFAULT_BUDGET = 10 ** 7
BUDGET_ENV = "MASSEY_BUDGET"


def resolve_budget(budget: int | None = None) -> int:
    """Explicit budget, else ``$MASSEY_BUDGET``, else ``DEFAULT_BUDGET``."""
    if budget is None:
        env = os.environ.get(BUDGET_ENV)
        budget = int(env) if env else DEFAULT_BUDGET
    if budget <= 0:
        raise ValueError("budget must be positive")
    return budget


@dataclass(frozen=True, eq=False)
class UnipotentMatrix:
    """Element of U_{n+1}(F_p), stored as a tuple of rows."""

    p: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        size = len(self.rows)
        if size < 2:
            raise ValueError("need at least a 2x2 matrix")
        rows = []
        for i, row in enumerate(self.rows):
            if len(row) != size:
                raise ValueError("matrix is not square")
            row = tuple(int(v) % self.p for v in row)
            if row[i] != 1 or any(row[:i]):
                raise ValueError("matrix is not upper unitriangular")
            rows.append(row)
        object.__setattr__(self, "rows", tuple(rows))

    @property
    def n(self) -> int:
        return len(self.rows) - 1

    @classmethod
    def identity(cls, n: int, p: int):
        return cls(p, tuple(tuple(int(i == j) for j in range(n + 1)) for i in range(n + 1)))

    @classmethod
    def from_entries(cls, n: int, p: int, entries: dict[tuple[int, int], int]):
        """Identity plus the given 1-based off-diagonal entries."""
        rows = [[int(i == j) for j in range(n + 1)] for i in range(n + 1)]
        for (i, j), v in entries.items():
            if not 1 <= i < j <= n + 1:
                raise ValueError(f"({i},{j}) is not strictly above the diagonal")
            rows[i - 1][j - 1] = v
        return cls(p, tuple(map(tuple, rows)))

    @classmethod
    def from_array(cls, a, p: int):
        return cls(p, tuple(tuple(int(v) for v in row) for row in np.asarray(a)))

    def entry(self, i: int, j: int) -> int:
        return self.rows[i - 1][j - 1]

    @property
    def corner(self) -> int:
        return self.rows[0][-1]

    def to_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64)

    def upper_entries(self) -> list[list[int]]:
        return [list(row) for row in self.rows]

    def masked(self) -> BarUnipotent:
        return BarUnipotent(self.p, self.rows)

    def is_identity(self) -> bool:
        return self == type(self).identity(self.n, self.p)

    def _key(self):
        return self.rows

    def __eq__(self, other) -> bool:
        if not isinstance(other, UnipotentMatrix):
            return NotImplemented
        if isinstance(other, BarUnipotent) != isinstance(self, BarUnipotent):
            return False
        return self.p == other.p and self._key() == other._key()

    def __hash__(self):
        return hash((type(self).__name__, self.p, self._key()))

    def __mul__(self, other):
        return mat_multiply(self, other)

    def __pow__(self, k: int):
        return mat_power(self, k)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(p={self.p}, rows={self.rows})"


class BarUnipotent(UnipotentMatrix):
    """Element of U_{n+1}(F_p) modulo its centre; the corner reads as 0."""

    def __post_init__(self):
        super().__post_init__()
        rows = [list(r) for r in self.rows]
        rows[0][-1] = 0
        object.__setattr__(self, "rows", tuple(map(tuple, rows)))

    def lift(self, corner: int = 0) -> UnipotentMatrix:
        rows = [list(r) for r in self.rows]
        rows[0][-1] = corner
        return UnipotentMatrix(self.p, tuple(map(tuple, rows)))

    def masked(self) -> BarUnipotent:
        return self


def _check_compatible(x: UnipotentMatrix, y: UnipotentMatrix) -> None:
    if x.n != y.n or x.p != y.p:
        raise DimensionMismatch(f"U_{x.n + 1}(F_{x.p}) vs U_{y.n + 1}(F_{y.p})")


def _result_type(*mats: UnipotentMatrix) -> type:
    return BarUnipotent if any(isinstance(m, BarUnipotent) for m in mats) else UnipotentMatrix


def mat_multiply(x: UnipotentMatrix, y: UnipotentMatrix) -> UnipotentMatrix:
    _check_compatible(x, y)
    size, p = x.n + 1, x.p
    a, b = x.rows, y.rows
    rows = tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(i, j + 1)) % p if j >= i else 0
              for j in range(size))
        for i in range(size))
    return _result_type(x, y)(p, rows)


def mat_invert(x: UnipotentMatrix) -> UnipotentMatrix:
    size, p, m = x.n + 1, x.p, x.rows
    inv = [[int(i == j) for j in range(size)] for i in range(size)]
    for j in range(size):
        for i in range(j - 1, -1, -1):
            inv[i][j] = -sum(m[i][t] * inv[t][j] for t in range(i + 1, j + 1)) % p
    return type(x)(p, tuple(map(tuple, inv)))


def mat_power(x: UnipotentMatrix, k: int) -> UnipotentMatrix:
    base = x if k >= 0 else mat_invert(x)
    out = type(x).identity(x.n, x.p)
    for _ in range(abs(k)):
        out = mat_multiply(out, base)
    return out


def mat_commutator(x: UnipotentMatrix, y: UnipotentMatrix) -> UnipotentMatrix:
    """[x, y] = x^-1 y^-1 x y."""
    _check_compatible(x, y)
    return mat_multiply(mat_multiply(mat_invert(x), mat_invert(y)), mat_multiply(x, y))


@dataclass(frozen=True)
class RepAssignment:
    """Images of the generators x1..xd."""

    images: tuple[UnipotentMatrix, ...]

    def __post_init__(self):
        images = tuple(self.images)
        if not images:
            raise ValueError("an assignment needs at least one generator")
        for m in images[1:]:
            _check_compatible(images[0], m)
        object.__setattr__(self, "images", images)

    @property
    def d(self) -> int:
        return len(self.images)

    @property
    def n(self) -> int:
        return self.images[0].n

    @property
    def p(self) -> int:
        return self.images[0].p

    def masked(self) -> RepAssignment:
        return RepAssignment(tuple(m.masked() for m in self.images))

    def lift(self, corners: Sequence[int] | None = None) -> RepAssignment:
        corners = corners or [0] * self.d
        return RepAssignment(tuple(m.masked().lift(t) for m, t in zip(self.images, corners)))

    def to_array(self) -> np.ndarray:
        return np.stack([m.to_array() for m in self.images])

    @classmethod
    def from_array(cls, arr, p: int, masked: bool = False) -> RepAssignment:
        kind = BarUnipotent if masked else UnipotentMatrix
        return cls(tuple(kind.from_array(a, p) for a in np.asarray(arr)))


def evaluate_word(assignment: RepAssignment, w: FreeWord) -> UnipotentMatrix:
    """Image of ``w`` under the homomorphism fixed by ``assignment``."""
    images = assignment.images
    out = type(images[0]).identity(assignment.n, assignment.p)
    inverses: dict[int, UnipotentMatrix] = {}
    for g, e in w.letters:
        if g > assignment.d:
            raise GeneratorIndexError(f"x{g} has no image among {assignment.d} generators")
        if e > 0:
            factor = images[g - 1]
        else:
            if g not in inverses:
                inverses[g] = mat_invert(images[g - 1])
            factor = inverses[g]
        for _ in range(abs(e)):
            out = mat_multiply(out, factor)
    return out


# ---------------------------------------------------------------------------
# search over representations


def free_entries_per_generator(n: int) -> int:
    return (n + 1) * n // 2 - n - 1


def _relator_runs(spec: PresentationSpec) -> list[np.ndarray]:
    return [np.array([(g - 1, e) for g, e in r.letters], dtype=np.int64).reshape(-1, 2)
            for r in spec.relators]


def _level_positions(n: int, m: int) -> list[tuple[int, int]]:
    return [(i, i + m) for i in range(n + 1 - m)]


def _level_slots(d: int, n: int, m: int) -> np.ndarray:
    return np.array([(g, i, j) for g in range(d) for i, j in _level_positions(n, m)],
                    dtype=np.int64).reshape(-1, 3)


def _fill(base: np.ndarray, slots: np.ndarray, index: int, p: int) -> np.ndarray:
    out = base.copy()
    for g, i, j in slots.tolist():
        out[g, i, j] = index % p
        index //= p
    return out


def _character_rows(spec: PresentationSpec, n: int, chars) -> list[tuple[int, ...]]:
    if n < 3:
        raise ValueError("fold count must be at least 3")
    chars = [tuple(int(v) % spec.p for v in c) for c in chars]
    if len(chars) != n:
        raise DimensionMismatch(f"{len(chars)} characters for an {n}-fold product")
    for c in chars:
        if len(c) != spec.d:
            raise DimensionMismatch(f"character of length {len(c)} on {spec.d} generators")
    return chars


def prescribed_base(spec: PresentationSpec, n: int, chars) -> np.ndarray:
    """Identity matrices with entry (i, i+1) of generator g set to -chars[i][g]."""
    chars = _character_rows(spec, n, chars)
    base = np.broadcast_to(np.eye(n + 1, dtype=np.int64), (spec.d, n + 1, n + 1)).copy()
    for i, c in enumerate(chars):
        for g, v in enumerate(c):
            base[g, i, i + 1] = (-v) % spec.p
    return base


def _guard_fold(spec: PresentationSpec, n: int, budget: int | None) -> None:
    budget = resolve_budget(budget)
    raw = spec.p ** (free_entries_per_generator(n) * spec.d)
    if raw > budget:
        raise FoldTooLarge(f"{spec.p}^{free_entries_per_generator(n) * spec.d} "
                           f"assignments exceed the budget {budget}")


def _defining_prefixes(spec: PresentationSpec, n: int, base: np.ndarray,
                       stop: int | None = None) -> Iterator[np.ndarray]:
    """Bases with levels below ``stop`` fixed and relator levels up to ``stop`` trivial.

    ``stop`` defaults to ``n - 1``, the last level that is not the corner.
    """
    p, d = spec.p, spec.d
    stop = n - 1 if stop is None else stop
    runs = _relator_runs(spec)
    ones = [1] * len(runs)
    empty = np.zeros((0, 3), dtype=np.int64)
    root, _ = kernel.scan(runs, ones, base, empty, _level_positions(n, 2), p, 0, 1)
    if not root:
        return

    def descend(current: np.ndarray, m: int) -> Iterator[np.ndarray]:
        if m >= stop:
            yield current
            return
        slots = _level_slots(d, n, m)
        accepted, _ = kernel.scan(runs, ones, current, slots, _level_positions(n, m + 1),
                                  p, 0, p ** len(slots))
        for idx in accepted:
            yield from descend(_fill(current, slots, idx, p), m + 1)

    yield from descend(base, 2)


def enumerate_defining_reps(spec: PresentationSpec, n: int, chars,
                            budget: int | None = None) -> Iterator[RepAssignment]:
    """Every bar representation with entries (i, i+1) equal to -chars[i].

    Raises ``FoldTooLarge`` before yielding anything if the raw assignment
    count exceeds the budget.
    """
    _guard_fold(spec, n, budget)
    base = prescribed_base(spec, n, chars)
    last = _level_slots(spec.d, n, n - 1)
    for prefix in _defining_prefixes(spec, n, base):
        for idx in range(spec.p ** len(last)):
            yield RepAssignment.from_array(_fill(prefix, last, idx, spec.p), spec.p, masked=True)


@dataclass(frozen=True)
class LiftResult:
    """Outcome of a lift test.

    On success ``lift`` holds the zero-corner lift. On failure ``relator``
    and ``corner`` name the first relator whose image keeps a nonzero corner.
    """

    exists: bool
    lift: RepAssignment | None = None
    relator: int | None = None
    corner: int | None = None

    def __bool__(self) -> bool:
        return self.exists


def relator_corners(spec: PresentationSpec, rep: RepAssignment) -> list[int]:
    """Corner entries of the relator images under the zero-corner lift."""
    lifted = rep.lift()
    corners = []
    for idx, r in enumerate(spec.relators):
        img = evaluate_word(lifted, r)
        if img.masked() != BarUnipotent.identity(rep.n, rep.p):
            raise ValueError(f"relator {idx} is not trivial modulo the centre")
        corners.append(img.corner)
    return corners


def lift_exists(spec: PresentationSpec, rep: RepAssignment) -> LiftResult:
    """Whether ``rep`` lifts from the bar group to U_{n+1}(F_p).

    Changing the corner of generator g by t moves the corner of a relator
    image by (exponent sum of g) * t, which is 0 mod p. So the zero-corner
    lift decides the question.
    """
    if rep.d != spec.d:
        raise DimensionMismatch(f"assignment on {rep.d} generators, presentation on {spec.d}")
    for idx, corner in enumerate(relator_corners(spec, rep)):
        if corner:
            return LiftResult(False, relator=idx, corner=corner)
    return LiftResult(True, lift=rep.lift())


def _chunks(start: int, stop: int, parts: int) -> list[tuple[int, int]]:
    span = stop - start
    size = max(4096, -(-span // max(parts * 8, 1)))
    return [(lo, min(stop, lo + size)) for lo in range(start, stop, size)]


def first_accepted(words, want_zero, base, slots, checks, p: int, total: int,
                   threads: int = 1) -> tuple[int | None, int]:
    """Smallest-effort search for one accepted filling.

    Returns ``(index or None, fillings scanned)``. With several threads the
    index range is split; the returned index is the first one found, not
    necessarily the smallest.
    """
    if threads <= 1 or total < 2 * 4096:
        hits, scanned = kernel.scan(words, want_zero, base, slots, checks, p, 0, total, 1)
        return (hits[0] if hits else None), scanned
    found: list[int] = []
    scanned = 0
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(kernel.scan, words, want_zero, base, slots, checks, p, lo, hi, 1)
                   for lo, hi in _chunks(0, total, threads)]
        for fut in futures:
            if found:
                fut.cancel()
                continue
            hits, count = fut.result()
            scanned += count
            if hits:
                found.append(hits[0])
    return (found[0] if found else None), scanned


@dataclass(frozen=True)
class LiftSearch:
    """Exhaustive search for a lift among all defining representations.

    ``defining`` counts the defining representations and is only filled in
    when no lift exists; ``sample`` is then one of them and ``violation``
    its failed lift test.
    """

    defined: bool
    lift: RepAssignment | None
    defining: int | None = None
    violation: LiftResult | None = None
    sample: RepAssignment | None = None


def search_lift(spec: PresentationSpec, n: int, chars, threads: int = 1,
                budget: int | None = None) -> LiftSearch:
    """Find a representation into U_{n+1}(F_p) extending the prescribed bar data.

    The last two free levels are scanned together: a filling lifts when the
    relator entries one level up and the corner all vanish.
    """
    _guard_fold(spec, n, budget)
    p, d = spec.p, spec.d
    base = prescribed_base(spec, n, chars)
    runs = _relator_runs(spec)
    ones = [1] * len(runs)
    last = _level_slots(d, n, n - 1)
    if n > 3:
        inner = _level_slots(d, n, n - 2)
        tail = np.concatenate([inner, last])
        checks = _level_positions(n, n - 1) + [(0, n)]
        prefixes = _defining_prefixes(spec, n, base, stop=n - 2)
    else:
        inner = np.zeros((0, 3), dtype=np.int64)
        tail = last
        checks = [(0, n)]
        prefixes = _defining_prefixes(spec, n, base)
    prefixes = list(prefixes)
    for prefix in prefixes:
        idx, _ = first_accepted(runs, ones, prefix, tail, checks, p, p ** len(tail), threads)
        if idx is not None:
            return LiftSearch(True, RepAssignment.from_array(_fill(prefix, tail, idx, p), p))

    defining = 0
    sample = None
    for prefix in prefixes:
        accepted, _ = kernel.scan(runs, ones, prefix, inner, _level_positions(n, n - 1),
                                  p, 0, p ** len(inner))
        defining += len(accepted) * p ** len(last)
        if accepted and sample is None:
            sample = RepAssignment.from_array(_fill(prefix, inner, accepted[0], p), p,
                                              masked=True)
    if sample is None:
        return LiftSearch(False, None, defining=0)
    return LiftSearch(True, None, defining=defining, violation=lift_exists(spec, sample),
                      sample=sample)


def separating_rep(spec: PresentationSpec, w: FreeWord, n: int, budget: int | None = None,
                   threads: int = 1) -> RepAssignment | None:
    """A representation into U_{n+1}(F_p) killing the relators but not ``w``."""
    if w.d != spec.d:
        raise DimensionMismatch(f"word on {w.d} generators, presentation on {spec.d}")
    if n < 1:
        raise ValueError("block parameter must be positive")
    budget = resolve_budget(budget)
    p, d = spec.p, spec.d
    positions = [(i, j) for i in range(n + 1) for j in range(i + 1, n + 1)]
    if p ** (len(positions) * d) > budget:
        raise BudgetExceeded(f"{p}^{len(positions) * d} assignments exceed the budget {budget}")
    if w.is_identity:
        return None
    slots = np.array([(g, i, j) for g in range(d) for i, j in positions], dtype=np.int64)
    base = np.broadcast_to(np.eye(n + 1, dtype=np.int64), (d, n + 1, n + 1)).copy()
    runs = _relator_runs(spec)
    target = np.array([(g - 1, e) for g, e in w.letters], dtype=np.int64).reshape(-1, 2)
    idx, _ = first_accepted(runs + [target], [1] * len(runs) + [0], base, slots, positions,
                            p, p ** len(slots), threads)
    if idx is None:
        return None
    return RepAssignment.from_array(_fill(base, slots, idx, p), p)


# ---------------------------------------------------------------------------
# fixed matrices


def triple_commutator_matrices(p: int, a=(0, 0, 0), b=(0, 0, 0), c=(0, 0, 0)):
    """Three U_4(F_p) matrices whose [[B,C],A] is the central element with corner -1.

    ``a``, ``b``, ``c`` are the free parameters at positions (1,3), (1,4) and
    (2,4) of A, B, C respectively.
    """
    def make(k: int, level_one: dict) -> UnipotentMatrix:
        entries = {(1, 3): a[k], (1, 4): b[k], (2, 4): c[k]}
        entries.update(level_one)
        return UnipotentMatrix.from_entries(3, p, entries)

    return make(0, {(1, 2): 1}), make(1, {(2, 3): 1}), make(2, {(3, 4): 1})


def corner_commutator_pair(p: int) -> tuple[UnipotentMatrix, UnipotentMatrix]:
    """U_4(F_p) pair with [[u,v],u] central of corner -1 and [[u,v],v] = 1."""
    u = UnipotentMatrix.from_entries(3, p, {(2, 3): 1, (3, 4): 1})
    v = UnipotentMatrix.from_entries(3, p, {(1, 2): 1})
    return u, v


def u4_f2_generators() -> tuple[UnipotentMatrix, UnipotentMatrix, UnipotentMatrix]:
    """Three involutions generating U_4(F_2)."""
    x = UnipotentMatrix.from_entries(3, 2, {(2, 3): 1})
    y = UnipotentMatrix.from_entries(3, 2, {(1, 2): 1})
    z = UnipotentMatrix.from_entries(3, 2, {(3, 4): 1})
    return x, y, z


def generated_subgroup(generators: Sequence[UnipotentMatrix], cap: int = 1 << 20) -> set:
    """All products of the generators (finite group, so closure under products)."""
    gens = list(generators)
    one = type(gens[0]).identity(gens[0].n, gens[0].p)
    seen = {one}
    frontier = [one]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                h = mat_multiply(m, g)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
                    if len(seen) > cap:
                        raise BudgetExceeded(f"subgroup larger than {cap}")
        frontier = nxt
    return seen
