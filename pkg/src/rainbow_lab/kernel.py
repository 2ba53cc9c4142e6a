"""Search-backend selection.

The compiled extension is used when it imported successfully, the
instance fits in 64-bit masks, and ``RAINBOW_LAB_PURE`` is unset.  Both
backends implement the same searches and return identical witnesses.
"""

from __future__ import annotations

import os
from typing import Optional, Sequence

from . import _searchpure

FOUND = _searchpure.FOUND
NONE = _searchpure.NONE
ABORTED = _searchpure.ABORTED

try:
    from . import _searchcore  # type: ignore[attr-defined]
except ImportError:  # pragma: no cover - depends on build environment
    _searchcore = None


def _force_pure() -> bool:
    return bool(os.environ.get("RAINBOW_LAB_PURE"))


def backend_name() -> str:
    """Name of the backend the next dispatch would use for small instances."""
    if _searchcore is not None and not _force_pure():
        return _searchcore.BACKEND_NAME
    return _searchpure.BACKEND_NAME


def available_backends() -> tuple[str, ...]:
    names = [_searchpure.BACKEND_NAME]
    if _searchcore is not None:
        names.append(_searchcore.BACKEND_NAME)
    return tuple(names)


def get_backend(name: str):
    """Explicit backend lookup, used by the benchmark."""
    if name == _searchpure.BACKEND_NAME:
        return _searchpure
    if _searchcore is not None and name == _searchcore.BACKEND_NAME:
        return _searchcore
    raise ValueError(f"unknown or unavailable backend {name!r}")


def _pick(n_vertices: int):
    if _searchcore is not None and n_vertices <= 64 and not _force_pure():
        return _searchcore
    return _searchpure


def rainbow_search(
    color_masks: Sequence[Sequence[int]],
    n_vertices: int,
    node_budget: int = 0,
    deadline: float = 0.0,
) -> tuple[int, Optional[list[int]], int]:
    backend = _pick(n_vertices)
    return backend.rainbow_search(
        color_masks, node_budget=node_budget, deadline=deadline
    )


def exact_cover(
    masks: Sequence[int],
    n_vertices: int,
    node_budget: int = 0,
    deadline: float = 0.0,
) -> tuple[int, Optional[list[int]], int]:
    backend = _pick(n_vertices)
    return backend.exact_cover(
        masks, n_vertices, node_budget=node_budget, deadline=deadline
    )


def max_disjoint_edges(
    masks: Sequence[int],
    k: int,
    n_vertices: int,
    node_budget: int = 0,
    deadline: float = 0.0,
) -> tuple[int, list[int], int]:
    backend = _pick(n_vertices)
    return backend.max_disjoint_edges(
        masks, k, n_vertices, node_budget=node_budget, deadline=deadline
    )
