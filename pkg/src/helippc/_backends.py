"""Integration-kernel backend selection.

The compiled Cython kernel is preferred when its extension module imported
successfully; otherwise the pure-Python kernel is used.  Both implement the
same arithmetic; the benchmark script compares their speed and agreement.
"""

from __future__ import annotations

from . import _loop as _loop_py

try:
    from . import _loop_cy  # type: ignore[attr-defined]
except ImportError:
    _loop_cy = None

HAVE_COMPILED = _loop_cy is not None


def available_backends() -> tuple[str, ...]:
    return ("compiled", "python") if HAVE_COMPILED else ("python",)


def default_backend() -> str:
    return "compiled" if HAVE_COMPILED else "python"


def resolve_backend(name: str | None) -> str:
    if name is None:
        return default_backend()
    if name not in ("compiled", "python"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "compiled" and not HAVE_COMPILED:
        raise ValueError("compiled backend requested but extension not built")
    return name


def get_run_loop(name: str):
    if name == "compiled":
        if not HAVE_COMPILED:
            raise ValueError("compiled backend not available")
        return _loop_cy.run_loop
    return _loop_py.run_loop
