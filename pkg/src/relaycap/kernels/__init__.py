"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The active path is chosen at import time by :mod:`relaycap._backend`
(set ``RELAYCAP_DISABLE_NUMBA=1`` to force numpy). Both implementations
stay importable as :mod:`relaycap.kernels._numpy` and, when numba is
present, :mod:`relaycap.kernels._numba`, so tests and benchmarks can
compare them directly.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple

import numpy as np

from relaycap._backend import BACKEND, USE_NUMBA
from relaycap.kernels import _numpy

if USE_NUMBA:
    from relaycap.kernels import _numba as _impl
else:
    _impl = _numpy

__all__ = [
    "BACKEND",
    "SplitTables",
    "cap_array",
    "cumsum0",
    "exhaustive_min",
    "prefix_min",
    "split_tables",
]


class SplitTables(NamedTuple):
    """Subset sums of a weight vector over the low and high halves of a mask.

    For ``mask = hi << nlo | lo`` the subset sum is ``lo[lo] + hi[hi]``,
    each half accumulated in ascending bit order.
    """

    lo: np.ndarray
    hi: np.ndarray
    nlo: int

    def at(self, mask: int):
        return self.lo[..., mask & (self.lo.shape[-1] - 1)] + self.hi[..., mask >> self.nlo]

    def many(self, masks: np.ndarray) -> np.ndarray:
        masks = np.asarray(masks, dtype=np.int64)
        return self.lo[..., masks & (self.lo.shape[-1] - 1)] + self.hi[..., masks >> self.nlo]


def _doubling_table(w: np.ndarray) -> np.ndarray:
    # w has shape (..., m); result (..., 2**m) with t[.., s] = sum of w over bits of s
    m = w.shape[-1]
    t = np.zeros(w.shape[:-1] + (1 << m,), dtype=np.float64)
    for j in range(m):
        half = 1 << j
        t[..., half:2 * half] = t[..., :half] + w[..., j:j + 1]
    return t


def split_tables(w, nlo: int | None = None) -> SplitTables:
    """Build :class:`SplitTables` for ``w`` of shape ``(n,)`` or ``(rows, n)``."""
    w = np.asarray(w, dtype=np.float64)
    n = w.shape[-1]
    if nlo is None:
        nlo = n // 2
    return SplitTables(_doubling_table(w[..., :nlo]), _doubling_table(w[..., nlo:]), nlo)


def cap_array(x) -> np.ndarray:
    """Vectorized ``0.5*log2(1+x)`` using the active backend's arithmetic."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    if USE_NUMBA:
        return _impl.cap_array(x.ravel()).reshape(x.shape)
    return _numpy.cap_array(x)


def cumsum0(x) -> np.ndarray:
    """Running sums along the last axis with a leading zero column."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    if USE_NUMBA:
        flat = x.reshape(-1, x.shape[-1]) if x.shape[-1] else x.reshape(-1, 0)
        return _impl.cumsum0_2d(flat).reshape(x.shape[:-1] + (x.shape[-1] + 1,))
    return _numpy.cumsum0(x)


def prefix_min(suffix, macp, bc_scale: float) -> tuple[float, int, int]:
    """Minimize ``cap(bc_scale*suffix[k]) + cap(macp[d, k])`` over ``(d, k)``.

    Ties resolve to the smallest ``d`` and then the smallest ``k``.
    """
    suffix = np.ascontiguousarray(suffix, dtype=np.float64)
    macp = np.ascontiguousarray(macp, dtype=np.float64)
    v, d, k = _impl.prefix_min(suffix, macp, float(bc_scale))
    return float(v), int(d), int(k)


def exhaustive_min(bc: SplitTables, mac: SplitTables, pen: SplitTables, *,
                   bc_scale: float, square_mac: bool, workers: int = 1,
                   impl=None) -> tuple[float, int, int]:
    """Exact minimum over all ``(d, mask)`` of the generic cut expression.

    ``bc``/``pen`` are tables over relay weights, ``mac`` over per-destination
    weights (rows). With ``workers > 1`` the high-half range is partitioned
    and the partial results are reduced by ``(value, d, mask)``, so the
    output does not depend on ``workers``.
    """
    impl = impl or _impl
    args = (
        np.ascontiguousarray(bc.lo), np.ascontiguousarray(bc.hi),
        np.ascontiguousarray(mac.lo), np.ascontiguousarray(mac.hi),
        np.ascontiguousarray(pen.lo), np.ascontiguousarray(pen.hi),
        int(bc.nlo), float(bc_scale), bool(square_mac),
    )
    n_hi = bc.hi.shape[0]
    workers = max(1, min(int(workers), n_hi))
    if workers == 1:
        v, d, m = impl.exhaustive_min(*args, 0, n_hi)
        return float(v), int(d), int(m)
    bounds = np.linspace(0, n_hi, workers + 1).astype(int)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda r: impl.exhaustive_min(*args, int(r[0]), int(r[1])),
                              zip(bounds[:-1], bounds[1:])))
    v, d, m = min((float(v), int(d), int(m)) for v, d, m in parts if d >= 0)
    return v, d, m
