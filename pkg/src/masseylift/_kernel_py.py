"""Numpy implementation of the hot kernels (used when the extension is absent).

Both kernels mirror ``_ckernel.pyx`` exactly; see :mod:`masseylift.kernel`
for the argument conventions.
"""

from __future__ import annotations

import numpy as np

CHUNK = 8192


def binomials(e: int, p: int) -> tuple[int, int, int, int]:
    """Coefficients of (1+X)^e up to X^3, reduced mod p (e may be negative)."""
    out = [1]
    num, den = 1, 1
    for k in range(1, 4):
        num *= e - k + 1
        den *= k
        out.append((num // den) % p)
    return tuple(out)


def magnus_runs(runs: np.ndarray, d: int, p: int) -> np.ndarray:
    c0 = 1
    c1 = np.zeros(d, dtype=np.int64)
    c2 = np.zeros((d, d), dtype=np.int64)
    c3 = np.zeros((d, d, d), dtype=np.int64)
    for g, e in np.asarray(runs, dtype=np.int64).reshape(-1, 2).tolist():
        _, b1, b2, b3 = binomials(e, p)
        c3[:, :, g] = (c3[:, :, g] + b1 * c2) % p
        c3[:, g, g] = (c3[:, g, g] + b2 * c1) % p
        c3[g, g, g] = (c3[g, g, g] + b3 * c0) % p
        c2[:, g] = (c2[:, g] + b1 * c1) % p
        c2[g, g] = (c2[g, g] + b2 * c0) % p
        c1[g] = (c1[g] + b1 * c0) % p
    return np.concatenate([[c0], c1, c2.ravel(), c3.ravel()]).astype(np.int64)


def _unipotent_inverse(m: np.ndarray, p: int) -> np.ndarray:
    n = m.shape[-1]
    eye = np.eye(n, dtype=np.int64)
    neg = (eye - m) % p
    inv = eye + neg
    power = neg
    for _ in range(n - 2):
        power = power @ neg % p
        inv = inv + power
    return inv % p


def scan(words, want_zero, base, slots, checks, p, start, stop, limit):
    """Enumerate slot assignments ``start <= idx < stop`` and filter them.

    Returns ``(accepted, scanned)``; scanning stops once ``limit`` accepted
    indices have been collected (``limit < 0`` means no limit).
    """
    base = np.asarray(base, dtype=np.int64)
    slots = np.asarray(slots, dtype=np.int64).reshape(-1, 3)
    checks = np.asarray(checks, dtype=np.int64).reshape(-1, 2)
    words = [np.asarray(w, dtype=np.int64).reshape(-1, 2) for w in words]
    d, n, _ = base.shape
    k = len(slots)
    need_inv = np.zeros(d, dtype=bool)
    for w in words:
        need_inv[w[w[:, 1] < 0, 0]] = True
    radix = p ** np.arange(k, dtype=np.int64)
    eye = np.eye(n, dtype=np.int64)
    accepted: list[int] = []
    pos = start
    while pos < stop:
        hi = min(stop, pos + CHUNK)
        idx = np.arange(pos, hi, dtype=np.int64)
        b = len(idx)
        mats = np.broadcast_to(base, (b, d, n, n)).copy()
        if k:
            digits = (idx[:, None] // radix[None, :]) % p
            mats[:, slots[:, 0], slots[:, 1], slots[:, 2]] = digits
        invs = np.empty_like(mats)
        for g in np.nonzero(need_inv)[0]:
            invs[:, g] = _unipotent_inverse(mats[:, g], p)
        ok = np.ones(b, dtype=bool)
        for w, wz in zip(words, want_zero):
            acc = np.broadcast_to(eye, (b, n, n)).copy()
            for g, e in w.tolist():
                factor = mats[:, g] if e > 0 else invs[:, g]
                for _ in range(abs(e)):
                    acc = acc @ factor % p
            if len(checks):
                zero = np.all(acc[:, checks[:, 0], checks[:, 1]] == 0, axis=1)
            else:
                zero = np.ones(b, dtype=bool)
            ok &= zero if wz else ~zero
        hits = idx[ok].tolist()
        if limit >= 0 and len(accepted) + len(hits) >= limit:
            accepted.extend(hits[: limit - len(accepted)])
            scanned = (accepted[-1] - start + 1) if accepted else 0
            return accepted, scanned
        accepted.extend(hits)
        pos = hi
    return accepted, stop - start
