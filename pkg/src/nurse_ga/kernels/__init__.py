"""Hot evaluation loops with a compiled backend and a numpy fallback.

The compiled extension is used when it was built; setting the environment
variable ``NURSE_GA_PURE_PYTHON=1`` forces the numpy implementation.
"""

from __future__ import annotations

import os
from types import ModuleType

import numpy as np

from . import _pykernels


def _load_compiled() -> ModuleType | None:
    try:
        from . import _ckernels
    except ImportError:
        return None
    return _ckernels


_compiled = _load_compiled()
_backend: ModuleType = _pykernels if os.environ.get("NURSE_GA_PURE_PYTHON") or _compiled is None else _compiled
BACKEND = "cython" if _backend is _compiled else "python"


def available_backends() -> list[str]:
    return ["python"] + (["cython"] if _compiled is not None else [])


def get_backend(name: str | None = None) -> ModuleType:
    if name is None:
        return _backend
    if name == "python":
        return _pykernels
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernels are not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def population_costs(genes, cover, penalty, grade, demand, masks, senior, backend: str | None = None):
    """Return ``(pref, shortfall, senior_excess)`` arrays, one entry per gene row."""
    genes = np.ascontiguousarray(genes, dtype=np.int64)
    if genes.ndim == 1:
        genes = genes[None, :]
    masks = np.ascontiguousarray(np.broadcast_to(np.asarray(masks, dtype=np.uint8), (genes.shape[0],)))
    return get_backend(backend).population_costs(
        genes,
        np.ascontiguousarray(cover, dtype=np.uint8),
        np.ascontiguousarray(penalty, dtype=np.int64),
        np.ascontiguousarray(grade, dtype=np.int8),
        np.ascontiguousarray(demand, dtype=np.int64),
        masks,
        np.ascontiguousarray(senior, dtype=np.uint8),
    )


def enumerate_optimum(table, sizes, cover, penalty, grade, demand, senior, demand_weight, senior_weight,
                      backend: str | None = None):
    """Exhaustive minimum; see ``_pykernels.enumerate_optimum`` for the return layout."""
    return get_backend(backend).enumerate_optimum(
        np.ascontiguousarray(table, dtype=np.int64),
        np.ascontiguousarray(sizes, dtype=np.int64),
        np.ascontiguousarray(cover, dtype=np.uint8),
        np.ascontiguousarray(penalty, dtype=np.int64),
        np.ascontiguousarray(grade, dtype=np.int8),
        np.ascontiguousarray(demand, dtype=np.int64),
        np.ascontiguousarray(senior, dtype=np.uint8),
        int(demand_weight),
        int(senior_weight),
    )
