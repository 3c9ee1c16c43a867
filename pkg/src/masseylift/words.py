"""Free-group words over generators x1..xd and presentation files.

Words are stored run-length encoded as ``((generator, exponent), ...)`` with
1-based generator indices. Commutators follow ``[u, v] = u^-1 v^-1 u v``.

Grammar accepted by :func:`parse_word`::

    word := term {'*' term}
    term := atom ['^' integer]
    atom := 'x'k | '(' word ')' | '[' word ',' word ']' | '1'

``'1'`` (or an empty string) denotes the identity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DimensionMismatch, GeneratorIndexError, NotInS2, WordSyntaxError


def _normalize(pairs) -> tuple[tuple[int, int], ...]:
    stack: list[list[int]] = []
    for g, e in pairs:
        if e == 0:
            continue
        if stack and stack[-1][0] == g:
            stack[-1][1] += e
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([g, e])
    return tuple((g, e) for g, e in stack)


@dataclass(frozen=True)
class FreeWord:
    """Element of the free group on ``d`` generators, in normalized form."""

    letters: tuple[tuple[int, int], ...]
    d: int
    _checked: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        if self._checked:
            return
        for g, _ in self.letters:
            if not 1 <= g <= self.d:
                raise GeneratorIndexError(f"generator x{g} outside 1..{self.d}")
        object.__setattr__(self, "letters", _normalize(self.letters))
        object.__setattr__(self, "_checked", True)

    def __mul__(self, other: FreeWord) -> FreeWord:
        return word_multiply(self, other)

    def __invert__(self) -> FreeWord:
        return word_invert(self)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return word_str(self)

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def expanded(self) -> list[int]:
        """Signed letter list: ``+g`` for x_g, ``-g`` for x_g^-1."""
        out: list[int] = []
        for g, e in self.letters:
            out.extend([g if e > 0 else -g] * abs(e))
        return out


def identity(d: int) -> FreeWord:
    return FreeWord((), d)


def generator(i: int, d: int) -> FreeWord:
    return FreeWord(((i, 1),), d)


def _reduced(letters, d: int) -> FreeWord:
    return FreeWord(letters, d, _checked=True)


def word_multiply(u: FreeWord, v: FreeWord) -> FreeWord:
    if u.d != v.d:
        raise DimensionMismatch(f"words on {u.d} and {v.d} generators")
    # both sides are reduced: only the seam can cancel
    left, right = list(u.letters), list(v.letters)
    k = 0
    while left and k < len(right):
        g, e = right[k]
        if left[-1][0] != g:
            break
        total = left[-1][1] + e
        left.pop()
        k += 1
        if total:
            left.append((g, total))
            break
    return _reduced(tuple(left) + tuple(right[k:]), u.d)


def word_invert(u: FreeWord) -> FreeWord:
    return _reduced(tuple((g, -e) for g, e in reversed(u.letters)), u.d)


def word_power(u: FreeWord, n: int) -> FreeWord:
    base = u if n >= 0 else word_invert(u)
    out, n = identity(u.d), abs(n)
    while n:
        if n & 1:
            out = word_multiply(out, base)
        base = word_multiply(base, base)
        n >>= 1
    return out


def commutator(u: FreeWord, v: FreeWord) -> FreeWord:
    return word_invert(u) * word_invert(v) * u * v


def exponent_sum(u: FreeWord, g: int) -> int:
    return sum(e for h, e in u.letters if h == g)


def word_str(u: FreeWord) -> str:
    if not u.letters:
        return "1"
    return "*".join(f"x{g}" if e == 1 else f"x{g}^{e}" for g, e in u.letters)


_TOKEN = re.compile(r"\s*(?:(x)(\d+)|(-?\d+)|(\S))")


class _Parser:
    def __init__(self, text: str, d: int):
        self.d = d
        self.tokens: list[tuple[str, str]] = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                break
            if m.group(1):
                self.tokens.append(("gen", m.group(2)))
            elif m.group(3) is not None:
                self.tokens.append(("int", m.group(3)))
            else:
                self.tokens.append(("sym", m.group(4)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def expect(self, sym: str):
        kind, val = self.peek()
        if kind != "sym" or val != sym:
            raise WordSyntaxError(f"expected {sym!r}, got {val!r}")
        self.i += 1

    def word(self) -> FreeWord:
        w = self.term()
        while self.peek() == ("sym", "*"):
            self.i += 1
            w = w * self.term()
        return w

    def term(self) -> FreeWord:
        w = self.atom()
        if self.peek() == ("sym", "^"):
            self.i += 1
            kind, val = self.peek()
            if kind != "int":
                raise WordSyntaxError(f"expected integer exponent, got {val!r}")
            self.i += 1
            w = word_power(w, int(val))
        return w

    def atom(self) -> FreeWord:
        kind, val = self.peek()
        if kind == "gen":
            self.i += 1
            k = int(val)
            if not 1 <= k <= self.d:
                raise GeneratorIndexError(f"generator x{k} outside 1..{self.d}")
            return generator(k, self.d)
        if kind == "int" and val == "1":
            self.i += 1
            return identity(self.d)
        if (kind, val) == ("sym", "("):
            self.i += 1
            w = self.word()
            self.expect(")")
            return w
        if (kind, val) == ("sym", "["):
            self.i += 1
            u = self.word()
            self.expect(",")
            v = self.word()
            self.expect("]")
            return commutator(u, v)
        raise WordSyntaxError(f"unexpected token {val!r}")


def parse_word(text: str, d: int) -> FreeWord:
    if not text.strip():
        return identity(d)
    parser = _Parser(text, d)
    w = parser.word()
    if parser.i != len(parser.tokens):
        raise WordSyntaxError(f"trailing input at token {parser.peek()[1]!r}")
    return w


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class PresentationSpec:
    """A pro-p presentation <x1..xd | relators> with relators in S_(2).

    Membership in S_(2) is checked through exponent sums, which are the
    degree-1 Magnus coefficients.
    """

    p: int
    d: int
    relators: tuple[FreeWord, ...] = ()

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.d < 1:
            raise ValueError("need at least one generator")
        object.__setattr__(self, "relators", tuple(self.relators))
        for idx, r in enumerate(self.relators):
            if r.d != self.d:
                raise DimensionMismatch(f"relator {idx} is on {r.d} generators")
            for g in range(1, self.d + 1):
                if exponent_sum(r, g) % self.p:
                    raise NotInS2(f"relator {idx} ({r}) has exponent sum "
                                  f"{exponent_sum(r, g)} in x{g}")

    def with_relators(self, relators) -> PresentationSpec:
        return PresentationSpec(self.p, self.d, tuple(relators))

    def to_text(self) -> str:
        lines = [f"p = {self.p}", f"generators = {self.d}"]
        lines += [f"relator = {r}" for r in self.relators]
        return "\n".join(lines) + "\n"


def parse_presentation(text: str) -> PresentationSpec:
    """Parse the ``p = / generators = / relator =`` file format."""
    p = d = None
    raw: list[str] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise WordSyntaxError(f"line {lineno}: expected 'key = value'")
        key, value = key.strip(), value.strip()
        if key == "p" and p is None and not raw:
            p = int(value)
        elif key == "generators" and d is None and p is not None:
            d = int(value)
        elif key == "relator" and d is not None:
            raw.append(value)
        else:
            raise WordSyntaxError(f"line {lineno}: unexpected {key!r}")
    if p is None or d is None:
        raise WordSyntaxError("presentation needs 'p =' and 'generators =' lines")
    return PresentationSpec(p, d, tuple(parse_word(t, d) for t in raw))


def load_presentation(path) -> PresentationSpec:
    return parse_presentation(Path(path).read_text(encoding="utf-8"))
