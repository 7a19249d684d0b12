"""Set functions on relay subsets and the polymatroid tools built on them.

Subsets of ``{0, ..., n-1}`` are encoded as integer bitmasks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from relaycap import kernels
from relaycap.core import BoundKind, BoundResult
from relaycap.errors import DomainError, ResourceError, ShapeError

MAX_GROUND = 30
AXIOM_LIMIT = 16
EXHAUSTIVE_LIMIT = 24
_CHUNK = 1 << 20


def mask_of(members: Iterable[int]) -> int:
    m = 0
    for j in members:
        m |= 1 << int(j)
    return m


def members(mask: int) -> tuple[int, ...]:
    return tuple(j for j in range(mask.bit_length()) if mask >> j & 1)


class SubsetFn:
    """A real-valued function of relay subsets with memoized evaluation.

    ``batch`` maps an int64 array of masks to values; when omitted the
    scalar ``evaluator`` is looped. Scalar calls of a batched function go
    through ``batch`` too, so both routes give bit-identical values.
    """

    def __init__(self, ground_size: int, evaluator: Callable[[int], float] | None = None,
                 batch: Callable[[np.ndarray], np.ndarray] | None = None, name: str = ""):
        if not 1 <= ground_size <= MAX_GROUND:
            raise ShapeError(f"ground size must be in [1, {MAX_GROUND}], got {ground_size}")
        if evaluator is None and batch is None:
            raise ValueError("need an evaluator or a batch evaluator")
        self.ground_size = ground_size
        self._evaluator = evaluator
        self._batch = batch
        self.name = name
        self.memo: dict[int, float] = {}

    @property
    def full(self) -> int:
        return (1 << self.ground_size) - 1

    def __call__(self, mask: int) -> float:
        mask = int(mask)
        if not 0 <= mask <= self.full:
            raise DomainError(f"mask {mask:#x} outside ground set of size {self.ground_size}")
        v = self.memo.get(mask)
        if v is None:
            if self._batch is not None:
                v = float(self._batch(np.array([mask], dtype=np.int64))[0])
            else:
                v = float(self._evaluator(mask))
            self.memo[mask] = v
        return v

    def values(self, masks) -> np.ndarray:
        masks = np.asarray(masks, dtype=np.int64)
        if self._batch is not None:
            return np.asarray(self._batch(masks), dtype=np.float64)
        return np.array([self(int(m)) for m in masks], dtype=np.float64)

    def table(self) -> np.ndarray:
        """Values on every subset, indexed by mask."""
        return self.values(np.arange(1 << self.ground_size, dtype=np.int64))

    def __repr__(self):
        return f"SubsetFn({self.name or '?'}, n={self.ground_size})"


@dataclass
class AxiomReport:
    normalized: bool
    monotone: bool
    submodular: bool
    exhaustive: bool = True
    first_violation: tuple | None = field(default=None)

    @property
    def is_polymatroid(self) -> bool:
        return self.exhaustive and self.normalized and self.monotone and self.submodular


def _pairs(n):
    for a in range(n):
        for b in range(a + 1, n):
            yield a, b


def check_polymatroid_axioms(f: SubsetFn, tol: float = 1e-12, *,
                             samples: int | None = None, seed: int = 0) -> AxiomReport:
    """Check normalization, monotonicity and submodularity of ``f``.

    Submodularity uses the local exchange form
    ``f(J+a) - f(J) >= f(J+a+b) - f(J+b)``. The first violation is recorded
    as ``(axiom, subsets, values)``; for submodularity the subsets are the
    pair ``(J+a, J+b)`` whose meet/join inequality fails.

    With ``samples`` set, ``samples`` random ``(J, a, b)`` triples are tested
    instead; such a report can expose violations but never certifies.
    """
    n = f.ground_size
    if samples is not None:
        return _sampled_axioms(f, tol, samples, seed)
    if n > AXIOM_LIMIT:
        raise ResourceError(
            f"exhaustive axiom check limited to n <= {AXIOM_LIMIT}; pass samples= for a "
            "sampled check that only reports violations")
    t = f.table()
    masks = np.arange(1 << n, dtype=np.int64)
    report = AxiomReport(True, True, True)

    if abs(t[0]) > tol:
        report.normalized = False
        report.first_violation = ("normalized", (0,), (float(t[0]),))

    for a in range(n):
        base = masks[(masks >> a & 1) == 0]
        up = base | (1 << a)
        bad = np.nonzero(t[up] < t[base] - tol)[0]
        if bad.size:
            report.monotone = False
            if report.first_violation is None:
                j = int(base[bad[0]])
                report.first_violation = ("monotone", (j, j | 1 << a), (float(t[j]), float(t[j | 1 << a])))
            break

    for a, b in _pairs(n):
        base = masks[((masks >> a & 1) == 0) & ((masks >> b & 1) == 0)]
        ja, jb, jab = base | 1 << a, base | 1 << b, base | 1 << a | 1 << b
        bad = np.nonzero(t[ja] + t[jb] < t[base] + t[jab] - tol)[0]
        if bad.size:
            report.submodular = False
            if report.first_violation is None:
                i = bad[0]
                report.first_violation = (
                    "submodular", (int(ja[i]), int(jb[i])),
                    (float(t[ja[i]]), float(t[jb[i]]), float(t[base[i]]), float(t[jab[i]])))
            break
    return report


def _sampled_axioms(f, tol, samples, seed):
    rng = np.random.default_rng(seed)
    n = f.ground_size
    report = AxiomReport(True, True, True, exhaustive=False)
    if abs(f(0)) > tol:
        report.normalized = False
        report.first_violation = ("normalized", (0,), (f(0),))
    for _ in range(samples):
        j = int(rng.integers(0, 1 << n))
        a, b = (int(x) for x in rng.choice(n, size=2, replace=False)) if n > 1 else (0, 0)
        j &= ~(1 << a | 1 << b)
        if report.monotone and f(j | 1 << a) < f(j) - tol:
            report.monotone = False
            report.first_violation = report.first_violation or (
                "monotone", (j, j | 1 << a), (f(j), f(j | 1 << a)))
        if a != b and report.submodular:
            ja, jb, jab = j | 1 << a, j | 1 << b, j | 1 << a | 1 << b
            if f(ja) + f(jb) < f(j) + f(jab) - tol:
                report.submodular = False
                report.first_violation = report.first_violation or (
                    "submodular", (ja, jb), (f(ja), f(jb), f(j), f(jab)))
    return report


def edmonds_min(phi: SubsetFn, psi: SubsetFn, limit: int = EXHAUSTIVE_LIMIT) -> BoundResult:
    """Minimize ``phi(J) + psi(complement of J)`` over all subsets ``J``.

    For polymatroids this is the maximum total rate in the intersection of
    the two polyhedra. Ties go to the lowest mask; ``witness_mask`` is ``J``.
    """
    if phi.ground_size != psi.ground_size:
        raise ShapeError("set functions live on different ground sets")
    n = phi.ground_size
    if n > limit:
        raise ResourceError(f"edmonds_min enumerates 2**n subsets; n={n} exceeds limit {limit}")
    full = (1 << n) - 1
    best, arg = np.inf, -1
    for start in range(0, 1 << n, _CHUNK):
        masks = np.arange(start, min(start + _CHUNK, 1 << n), dtype=np.int64)
        vals = phi.values(masks) + psi.values(full ^ masks)
        i = int(np.argmin(vals))
        if vals[i] < best:
            best, arg = float(vals[i]), int(masks[i])
    return BoundResult(best, BoundKind.EXACT, witness_mask=arg, eval_count=1 << n)


def mac_region_fn(snrs, scale: float = 1.0) -> SubsetFn:
    """Sum-rate constraint of a Gaussian MAC: ``J -> C(scale * sum_{j in J} snrs[j])``."""
    s = np.asarray(snrs, dtype=np.float64)
    if s.ndim != 1 or s.size == 0:
        raise ShapeError("need a nonempty SNR vector")
    if np.any(s < 0) or not np.all(np.isfinite(s)):
        raise DomainError("SNRs must be finite and nonnegative")
    tabs = kernels.split_tables(s)

    def batch(masks):
        return kernels.cap_array(scale * tabs.many(masks))

    return SubsetFn(s.size, batch=batch, name="mac")


def chain_fn(levels) -> SubsetFn:
    """Set function ``J -> levels[max(J)]`` with value 0 on the empty set."""
    lv = np.asarray(levels, dtype=np.float64)
    if lv.ndim != 1 or lv.size == 0:
        raise ShapeError("need a nonempty level vector")
    if np.any(lv < 0) or np.any(np.diff(lv) < 0):
        raise DomainError("chain levels must be nonnegative and nondecreasing")
    padded = np.concatenate(([0.0], lv))

    def batch(masks):
        masks = np.asarray(masks, dtype=np.int64)
        # frexp exponent of m is bit_length(m) for m < 2**53
        top = np.frexp(masks.astype(np.float64))[1]
        return padded[top]

    return SubsetFn(lv.size, batch=batch, name="chain")


def greedy_vertex(f: SubsetFn, order) -> np.ndarray:
    """Greedy base of the polyhedron of ``f`` along ``order``.

    Element ``order[i]`` receives the marginal value of adding it to
    ``{order[0], ..., order[i-1]}``.
    """
    order = [int(x) for x in order]
    if sorted(order) != list(range(f.ground_size)):
        raise DomainError(f"order must be a permutation of 0..{f.ground_size - 1}")
    x = np.zeros(f.ground_size)
    prev, mask = f(0), 0
    for j in order:
        mask |= 1 << j
        cur = f(mask)
        x[j] = cur - prev
        prev = cur
    return x
