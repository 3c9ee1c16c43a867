"""Backend selection for the hot kernels.

The compiled extension ``_ckernel`` is used when it imports; otherwise the
numpy implementation in ``_kernel_py``. Set ``MASSEYLIFT_PURE=1`` to force
the fallback.

Kernel conventions (0-based throughout):

* ``magnus_runs(runs, d, p)``: ``runs`` is an ``(L, 2)`` array of
  ``(generator, exponent)``; returns the flat coefficient vector of the
  Magnus image truncated above degree 3.
* ``scan(words, want_zero, base, slots, checks, p, start, stop, limit)``:
  enumerates the ``p**len(slots)`` fillings of ``slots`` (rows of
  ``(generator, row, col)``, first slot least significant) on top of the
  ``(d, N, N)`` matrices ``base``. A filling is accepted when, for every
  word, the ``checks`` entries of its image are all zero exactly when
  ``want_zero`` is set. Returns ``(accepted indices, scanned count)``.
"""

from __future__ import annotations

import os

from . import _kernel_py

try:
    from . import _ckernel
except ImportError:  # extension not built
    _ckernel = None

BACKENDS = {"python": _kernel_py}
if _ckernel is not None:
    BACKENDS["compiled"] = _ckernel

if _ckernel is not None and not os.environ.get("MASSEYLIFT_PURE"):
    BACKEND = "compiled"
else:
    BACKEND = "python"

_active = BACKENDS[BACKEND]


def use_backend(name: str) -> None:
    """Switch the active backend (``"compiled"`` or ``"python"``)."""
    global BACKEND, _active
    if name not in BACKENDS:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}")
    BACKEND = name
    _active = BACKENDS[name]


def magnus_runs(runs, d, p):
    return _active.magnus_runs(runs, d, p)


def scan(words, want_zero, base, slots, checks, p, start, stop, limit=-1):
    return _active.scan(words, want_zero, base, slots, checks, p, start, stop, limit)
