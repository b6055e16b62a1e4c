"""Select the compiled kernels when available, else the numpy reference ones."""

import numpy as np

from . import _pycore

try:
    from . import _core
except ImportError:  # extension not built
    _core = None

_ACTIVE = _core if _core is not None else _pycore

INT64_SAFE = 1 << 62


def available_backends():
    return ("compiled", "python") if _core is not None else ("python",)


def backend() -> str:
    return _ACTIVE.BACKEND


def use_backend(name: str) -> str:
    """Switch kernels (``compiled`` or ``python``); returns the previous backend."""
    global _ACTIVE
    prev = _ACTIVE.BACKEND
    if name == "compiled":
        if _core is None:
            raise RuntimeError("compiled kernels are not built")
        _ACTIVE = _core
    elif name == "python":
        _ACTIVE = _pycore
    else:
        raise ValueError(f"unknown backend {name!r}")
    return prev


def accumulate_pairs(idx, wa, wb, k: int, n_edges: int, total: int | None = None):
    """Exact pair sums; falls back to Python integers when int64 could overflow."""
    idx = np.asarray(idx, dtype=np.int64)
    wa_i = [int(x) for x in wa]
    wb_i = [int(x) for x in wb]
    big = max([abs(x) for x in wa_i] + [1]) + k * max([abs(x) for x in wb_i] + [0])
    # each pair entry gathers at most one term per instance
    if 2 * big * big * max(total or len(idx), 1) >= INT64_SAFE:
        return _pycore.accumulate_pairs(
            idx, np.array(wa_i, dtype=object), np.array(wb_i, dtype=object), k, n_edges
        )
    return _ACTIVE.accumulate_pairs(
        idx, np.array(wa_i, dtype=np.int64), np.array(wb_i, dtype=np.int64), k, n_edges
    )


def magnetization_block(n_sites: int, edges, n_up: int):
    if n_sites > 62:
        raise ValueError("bit-string basis limited to 62 sites")
    return _ACTIVE.magnetization_block(n_sites, edges, n_up)


def block_states(n_sites: int, n_up: int):
    return _ACTIVE.block_states(n_sites, n_up)
