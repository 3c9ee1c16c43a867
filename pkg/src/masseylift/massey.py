"""Massey product decisions, trace maps and relator-shape obstructions."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Sequence

from .errors import DimensionMismatch, GeneratorIndexError, WordSyntaxError
from .magnus import CanonicalDecomposition, canonical_decompose
from .unipotent import (
    RepAssignment,
    evaluate_word,
    relator_corners,
    search_lift,
)
from .words import PresentationSpec

NOT_DEFINED = "NotDefined"
VANISHES = "Vanishes"
DOES_NOT_VANISH = "DoesNotVanish"

NOT_REALIZABLE = "not realizable as G_F(2)"


@dataclass(frozen=True)
class Character:
    """A homomorphism to F_p given by its values on x1..xd."""

    p: int
    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) % self.p for v in self.values))

    @classmethod
    def dual(cls, i: int, d: int, p: int) -> Character:
        """The character that is 1 on x_i and 0 on the other generators."""
        if not 1 <= i <= d:
            raise GeneratorIndexError(f"x{i} is not among x1..x{d}")
        return cls(p, tuple(int(g == i) for g in range(1, d + 1)))

    @property
    def d(self) -> int:
        return len(self.values)

    def __neg__(self) -> Character:
        return Character(self.p, tuple(-v for v in self.values))

    def __add__(self, other: Character) -> Character:
        if (self.p, self.d) != (other.p, other.d):
            raise DimensionMismatch("characters of different shape")
        return Character(self.p, tuple(a + b for a, b in zip(self.values, other.values)))

    def __str__(self) -> str:
        terms = []
        for g, v in enumerate(self.values, 1):
            if v:
                terms.append(f"x{g}" if v == 1 else f"{v}*x{g}")
        return "+".join(terms) or "0"


_TERM = re.compile(r"\s*([+-]?)\s*(?:(\d+)\s*\*\s*)?x(\d+)\s*")


def parse_character(text: str, d: int, p: int) -> Character:
    """Parse ``x2``, ``x1+x3``, ``2*x1-x4`` or ``0`` into a character."""
    values = [0] * d
    text = text.strip()
    if text == "0":
        return Character(p, tuple(values))
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or (pos and not m.group(1)):
            raise WordSyntaxError(f"bad character {text!r} at offset {pos}")
        sign = -1 if m.group(1) == "-" else 1
        coeff = int(m.group(2)) if m.group(2) else 1
        g = int(m.group(3))
        if not 1 <= g <= d:
            raise GeneratorIndexError(f"x{g} is not among x1..x{d}")
        values[g - 1] += sign * coeff
        pos = m.end()
    if not text:
        raise WordSyntaxError("empty character")
    return Character(p, tuple(values))


def _vectors(spec: PresentationSpec, chars) -> list[tuple[int, ...]]:
    out = []
    for c in chars:
        values = c.values if isinstance(c, Character) else tuple(c)
        if len(values) != spec.d:
            raise DimensionMismatch(f"character of length {len(values)} on {spec.d} generators")
        out.append(tuple(int(v) % spec.p for v in values))
    return out


@dataclass
class MasseyReport:
    """Verdict on <chars> with its certificate.

    ``lift`` is set for Vanishes. For DoesNotVanish, ``defining`` counts the
    defining representations exhausted and ``sample`` is one of them, whose
    relator ``relator`` keeps corner ``corner`` under every lift.
    """

    verdict: str
    chars: tuple[Character, ...]
    lift: RepAssignment | None = None
    defining: int | None = None
    sample: RepAssignment | None = None
    relator: int | None = None
    corner: int | None = None

    @property
    def n(self) -> int:
        return len(self.chars)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "triple": [str(c) for c in self.chars],
            "witness": self.witness_json(),
            "obstructions": [],
        }

    def witness_json(self) -> dict:
        if self.verdict == VANISHES:
            return {"lift": _images_json(self.lift)}
        if self.verdict == DOES_NOT_VANISH:
            return {
                "defining_reps": self.defining,
                "relator": self.relator,
                "corner": self.corner,
                "sample": _images_json(self.sample),
            }
        return {"defining_reps": 0}


def _images_json(rep: RepAssignment | None) -> dict | None:
    if rep is None:
        return None
    return {f"x{g}": m.upper_entries() for g, m in enumerate(rep.images, 1)}


def _revalidate(spec: PresentationSpec, vectors, lift: RepAssignment) -> None:
    p = spec.p
    for g, m in enumerate(lift.images):
        for i, v in enumerate(vectors):
            if m.entry(i + 1, i + 2) != (-v[g]) % p:
                raise RuntimeError(f"lift has the wrong entry ({i + 1},{i + 2}) at x{g + 1}")
    for idx, r in enumerate(spec.relators):
        if not evaluate_word(lift, r).is_identity():
            raise RuntimeError(f"lift does not kill relator {idx}")


def massey_check(spec: PresentationSpec, chars: Sequence, threads: int = 1,
                 budget: int | None = None) -> MasseyReport:
    """Decide whether <chars> is defined and whether it contains 0.

    Representations to the bar group have entries (i, i+1) equal to
    -chars[i]; the product vanishes when one of them lifts.
    """
    vectors = _vectors(spec, chars)
    labels = tuple(c if isinstance(c, Character) else Character(spec.p, c) for c in chars)
    found = search_lift(spec, len(vectors), vectors, threads=threads, budget=budget)
    if not found.defined:
        return MasseyReport(NOT_DEFINED, labels, defining=0)
    if found.lift is not None:
        _revalidate(spec, vectors, found.lift)
        return MasseyReport(VANISHES, labels, lift=found.lift)
    violation = found.violation
    return MasseyReport(DOES_NOT_VANISH, labels, defining=found.defining, sample=found.sample,
                        relator=violation.relator, corner=violation.corner)


def trace_of_value(spec: PresentationSpec, rep: RepAssignment, relator: int) -> int:
    """Trace against relator ``relator`` of the Massey value attached to ``rep``."""
    corners = relator_corners(spec, rep)
    return (-corners[relator]) % spec.p


@lru_cache(maxsize=256)
def relator_decompositions(spec: PresentationSpec) -> tuple[CanonicalDecomposition, ...]:
    return tuple(canonical_decompose(r, spec.p) for r in spec.relators)


def _power_coefficient(dec: CanonicalDecomposition, i: int) -> int:
    return dec.a.get(i, 0) if dec.p == 2 else 0


def cup_trace(spec: PresentationSpec, relator: int, i: int, j: int) -> int:
    """Trace of chi_i cup chi_j against a relator, for dual-basis characters.

    Equals u_ij for distinct indices; the sign is fixed to +u_ij.
    """
    for g in (i, j):
        if not 1 <= g <= spec.d:
            raise GeneratorIndexError(f"x{g} is not among x1..x{spec.d}")
    dec = relator_decompositions(spec)[relator]
    if i == j:
        return _power_coefficient(dec, i)
    return dec.u(i, j)


@dataclass(frozen=True)
class ObstructionWitness:
    """A relator whose decomposition forces a non-vanishing triple product.

    ``pattern`` is ``Ob1`` with ``indices = (i, j, k)``, or ``Ob2a`` / ``Ob2b``
    with ``indices = (i, j)``.
    """

    relator: int
    pattern: str
    indices: tuple[int, ...]
    triple: tuple[Character, Character, Character]
    not_realizable: bool = False
    coefficient: int = field(default=0)

    @property
    def trace(self) -> int:
        """Trace of every value of the triple against the relator.

        ``[[x_i,x_j],x_j]`` is ``[[x_j,x_i],x_j]^-1`` modulo S_(4), so Ob2b
        carries the opposite sign.
        """
        p = self.triple[0].p
        return (-self.coefficient if self.pattern == "Ob2b" else self.coefficient) % p

    def describe(self) -> str:
        idx = ",".join(map(str, self.indices))
        text = (f"relator {self.relator}: {self.pattern}({idx}) -> "
                f"<{', '.join(str(c) for c in self.triple)}> does not vanish")
        if self.not_realizable:
            text += f"; {NOT_REALIZABLE}"
        return text

    def to_json(self) -> dict:
        return {
            "relator": self.relator,
            "pattern": self.pattern,
            "indices": list(self.indices),
            "triple": [str(c) for c in self.triple],
            "coefficient": self.coefficient,
            "trace": self.trace,
            "not_realizable": self.not_realizable,
        }


def _ob1_witnesses(spec, decs, r_idx) -> list[ObstructionWitness]:
    dec, d, p = decs[r_idx], spec.d, spec.p
    others = [s for t, s in enumerate(decs) if t != r_idx]
    out = []
    for i, j, k in permutations(range(1, d + 1), 3):
        if not (i < j and k < j):
            continue
        coeff = dec.c[(i, j, k)]
        if not coeff:
            continue
        if dec.u(i, j) or dec.u(k, j) or dec.u(k, i):
            continue
        rest = [g for g in range(1, d + 1) if g not in (i, j, k)]
        if any(dec.u(k, g) or dec.u(j, g) for g in rest):
            continue
        if p == 2 and (dec.a[k] or dec.a[j]):
            continue
        if any(s.u(k, i) or s.u(i, j) for s in others):
            continue
        triple = tuple(-Character.dual(g, d, p) for g in (k, i, j))
        out.append(ObstructionWitness(r_idx, "Ob1", (i, j, k), triple, p == 2, coeff))
    return out


def _ob2_witnesses(spec, decs, r_idx) -> list[ObstructionWitness]:
    dec, d, p = decs[r_idx], spec.d, spec.p
    others = [s for t, s in enumerate(decs) if t != r_idx]
    out = []
    for i in range(1, d + 1):
        for j in range(i + 1, d + 1):
            if dec.u(i, j):
                continue
            rest = [g for g in range(1, d + 1) if g not in (i, j)]
            if any(dec.u(i, g) or dec.u(j, g) for g in rest):
                continue
            if p == 2 and (dec.a[i] or dec.a[j]):
                continue
            if any(s.u(i, j) for s in others):
                continue
            for pattern, key, repeated, order in (("Ob2a", (i, j, i), i, (j, i, i)),
                                                  ("Ob2b", (i, j, j), j, (i, j, j))):
                coeff = dec.c[key]
                if not coeff:
                    continue
                if p == 2 and any(s.a[repeated] for s in others):
                    continue
                triple = tuple(-Character.dual(g, d, p) for g in order)
                out.append(ObstructionWitness(r_idx, pattern, (i, j), triple, p == 2, coeff))
    return out


def obstruction_scan(spec: PresentationSpec) -> list[ObstructionWitness]:
    """Witnesses read off the canonical decompositions of the relators."""
    decs = relator_decompositions(spec)
    out: list[ObstructionWitness] = []
    for r_idx in range(len(decs)):
        out += _ob1_witnesses(spec, decs, r_idx)
        out += _ob2_witnesses(spec, decs, r_idx)
    return out


def report_json(report: MasseyReport | None = None,
                obstructions: Sequence[ObstructionWitness] = ()) -> dict:
    """The JSON report: verdict, triple, witness and obstructions."""
    if report is None:
        body = {"verdict": None, "triple": [], "witness": None}
    else:
        body = report.to_json()
    body["obstructions"] = [w.to_json() for w in obstructions]
    return body
