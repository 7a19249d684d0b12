"""Brute-force cut enumeration: the slow, obviously-correct reference.

Nothing here uses the kernel tables or the profile's prefix arrays; subset
sums come from an explicit membership matrix so that agreement with the
fast bounds is meaningful.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from relaycap.bounds import EXHAUSTIVE_LIMIT, cutset_upper_exhaustive, cutset_upper_prefix, pdf_dms_lower
from relaycap.core import BoundKind, BoundResult, SnrProfile
from relaycap.errors import ResourceError

_CHUNK = 1 << 16


@dataclass(frozen=True)
class CutValueFn:
    """Value of cut ``(d, J)`` for destinations ``d < l`` and relay masks ``J``.

    ``batch(d, masks)`` is optional and must agree with ``evaluate``.
    """

    n: int
    l: int  # noqa: E741
    evaluate: Callable[[int, int], float]
    batch: Callable[[int, np.ndarray], np.ndarray] | None = None

    def values(self, d: int, masks: np.ndarray) -> np.ndarray:
        if self.batch is not None:
            return np.asarray(self.batch(d, masks), dtype=np.float64)
        return np.array([self.evaluate(d, int(m)) for m in masks], dtype=np.float64)


def _scan(f: CutValueFn, start: int, stop: int):
    best = (math.inf, -1, -1)
    for d in range(f.l):
        for lo in range(start, stop, _CHUNK):
            masks = np.arange(lo, min(lo + _CHUNK, stop), dtype=np.int64)
            vals = f.values(d, masks)
            i = int(np.argmin(vals))
            cand = (float(vals[i]), d, int(masks[i]))
            if cand < best:
                best = cand
    return best


def enumerate_min_cut(f: CutValueFn, limit: int = EXHAUSTIVE_LIMIT, workers: int = 1) -> BoundResult:
    """Minimum of ``f`` over all ``L * 2**N`` cuts.

    Ties resolve to the smallest value, then smallest ``d``, then smallest
    mask, so any ``workers`` setting gives the same witness.
    """
    if f.n > limit:
        raise ResourceError(f"enumerating 2**{f.n} subsets exceeds the limit n <= {limit}")
    total = 1 << f.n
    workers = max(1, min(workers, total))
    if workers == 1:
        v, d, m = _scan(f, 0, total)
    else:
        edges = np.linspace(0, total, workers + 1).astype(int)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(lambda e: _scan(f, int(e[0]), int(e[1])), zip(edges[:-1], edges[1:]))
            v, d, m = min(parts)
    return BoundResult(v, BoundKind.EXACT, witness_dest=d, witness_mask=m, eval_count=f.l * total)


def _cap(x):
    return 0.5 * np.log1p(x) / math.log(2.0)


def _membership(n: int, masks: np.ndarray) -> np.ndarray:
    return ((masks[:, None] >> np.arange(n)) & 1).astype(np.float64)


def cutset_cut_fn(profile: SnrProfile) -> CutValueFn:
    """Coherent cutset value ``C(sum_{not J} S) + C((sum_J sqrt S~_d)**2)``."""
    n, s, rt = profile.n, profile.snr_relay, profile.sqrt_dest

    def batch(d, masks):
        b = _membership(n, masks)
        return _cap((1.0 - b) @ s) + _cap((b @ rt[d]) ** 2)

    return CutValueFn(n, profile.l, lambda d, m: float(batch(d, np.array([m]))[0]), batch)


def independent_cut_fn(profile: SnrProfile) -> CutValueFn:
    """Independent-input cut value ``C(sum_{not J} S) + C(sum_J S~_d)``."""
    n, s, st = profile.n, profile.snr_relay, profile.snr_dest

    def batch(d, masks):
        b = _membership(n, masks)
        return _cap((1.0 - b) @ s) + _cap(b @ st[d])

    return CutValueFn(n, profile.l, lambda d, m: float(batch(d, np.array([m]))[0]), batch)


def pdf_dms_cut_fn(profile: SnrProfile) -> CutValueFn:
    """Degraded-message-set cut value over arbitrary ``J``.

    ``C(sum_{not J} S / N) + C(sum_{j <= max J} S~_dj)``; the second-hop
    term depends on ``J`` only through its largest element.
    """
    n, s, st = profile.n, profile.snr_relay, profile.snr_dest

    def batch(d, masks):
        b = _membership(n, masks)
        # upto[i, j] = 1 when j <= max(J_i)
        top = np.where(b.any(axis=1), n - 1 - np.argmax(b[:, ::-1], axis=1), -1)
        upto = (np.arange(n)[None, :] <= top[:, None]).astype(np.float64)
        return _cap(((1.0 - b) @ s) / n) + _cap(upto @ st[d])

    return CutValueFn(n, profile.l, lambda d, m: float(batch(d, np.array([m]))[0]), batch)


@dataclass(frozen=True)
class PrefixReductionReport:
    """Outcome of checking the prefix-cut reduction on one profile.

    ``claim_a``: the full enumeration of the degraded-message-set cut
    function equals the prefix-only minimum. ``claim_b``: the exhaustive
    cutset bound does not exceed its prefix restriction.
    """

    sorted_ok: bool
    claim_a: bool
    claim_b: bool
    brute_min: float
    prefix_min: float
    cutset_exhaustive: float
    cutset_prefix: float

    @property
    def passed(self) -> bool:
        return self.sorted_ok and self.claim_a and self.claim_b


def verify_prefix_reduction(profile: SnrProfile, limit: int = EXHAUSTIVE_LIMIT,
                            tol: float = 1e-9) -> PrefixReductionReport:
    if profile.n > limit:
        raise ResourceError(f"prefix-reduction check enumerates 2**{profile.n} subsets; limit {limit}")
    brute = enumerate_min_cut(pdf_dms_cut_fn(profile), limit).value_bits
    pre = pdf_dms_lower(profile).value_bits
    cs_ex = cutset_upper_exhaustive(profile, limit).value_bits
    cs_pre = cutset_upper_prefix(profile).value_bits
    return PrefixReductionReport(
        sorted_ok=profile.is_sorted,
        claim_a=abs(brute - pre) <= tol,
        claim_b=cs_ex <= cs_pre + tol,
        brute_min=brute, prefix_min=pre,
        cutset_exhaustive=cs_ex, cutset_prefix=cs_pre)
