"""Kernel backend selection.

The compiled extension is preferred when importable; ``PERIODLAB_PURE=1`` in
the environment forces the pure-Python twin.  ``use_backend`` exists so tests
and benchmarks can exercise both implementations in one process.
"""

from __future__ import annotations

import os

from . import _kernels_py

try:
    from . import _kernels as _compiled  # type: ignore[attr-defined]
except ImportError:
    _compiled = None

_active = _kernels_py
if _compiled is not None and not os.environ.get("PERIODLAB_PURE"):
    _active = _compiled


def available_backends() -> tuple[str, ...]:
    return ("compiled", "pure") if _compiled is not None else ("pure",)


def active_backend() -> str:
    return "compiled" if _active is _compiled else "pure"


def use_backend(name: str) -> None:
    global _active
    if name == "pure":
        _active = _kernels_py
    elif name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        _active = _compiled
    else:
        raise ValueError(f"unknown backend {name!r}")


def hurwitz_em(a, x, m0, bern_even):
    return _active.hurwitz_em(a, x, m0, bern_even)


def bessel_series(nu, x, g0p, g0m, max_terms):
    return _active.bessel_series(nu, x, g0p, g0m, max_terms)


def bessel_cosh_quad(nu, x, edges, gl_nodes, gl_wts):
    return _active.bessel_cosh_quad(nu, x, edges, gl_nodes, gl_wts)
