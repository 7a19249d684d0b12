"""Upper and lower bounds on the multicast capacity of the two-hop network.

Prefix-cut bounds run in O(LN) on a profile; the exhaustive ones scan all
``L * 2**N`` cuts and refuse beyond ``exhaustive_limit`` relays.
"""
from __future__ import annotations

import dataclasses
import math
import time

import numpy as np

from relaycap import kernels
from relaycap.core import (
    BoundKind,
    BoundResult,
    Network,
    SnrProfile,
    build_snr_profile,
    capacity_n1,
    detect_df_optimal,
    gaussian_capacity,
)
from relaycap.errors import PreconditionError, ResourceError
from relaycap.polymatroid import SubsetFn, mac_region_fn

EXHAUSTIVE_LIMIT = 24
PENALTY_MODES = ("exact", "paper-constant")
LOG2E = 1.0 / math.log(2.0)
TOL = 1e-9


def _check_limit(profile: SnrProfile, limit: int, what: str):
    if profile.n > limit:
        raise ResourceError(
            f"{what} enumerates {profile.l}*2**{profile.n} cuts; N={profile.n} exceeds the "
            f"exhaustive limit {limit} (use the prefix-cut bounds instead)")


def _exhaustive(profile, kind, *, bc_scale, coherent, penalty, workers):
    t0 = time.perf_counter()
    mac_w = profile.sqrt_dest if coherent else profile.snr_dest
    v, d, m = kernels.exhaustive_min(
        kernels.split_tables(profile.snr_relay),
        kernels.split_tables(mac_w),
        kernels.split_tables(penalty),
        bc_scale=bc_scale, square_mac=coherent, workers=workers)
    return BoundResult(v, kind, witness_dest=d, witness_mask=m,
                       eval_count=profile.l << profile.n,
                       elapsed_s=time.perf_counter() - t0)


def _prefix(profile, kind, *, bc_scale, macp):
    t0 = time.perf_counter()
    v, d, k = kernels.prefix_min(profile.suffix_src, macp, bc_scale)
    return BoundResult(v, kind, witness_dest=d, witness_prefix=k,
                       eval_count=profile.l * (profile.n + 1),
                       elapsed_s=time.perf_counter() - t0)


def cutset_upper_exhaustive(profile: SnrProfile, exhaustive_limit: int = EXHAUSTIVE_LIMIT,
                            workers: int = 1) -> BoundResult:
    """Relaxed cutset bound, minimized over every cut ``(d, J)``.

    Cut value: ``C(sum_{j not in J} S_j) + C((sum_{j in J} sqrt(S~_dj))**2)``.
    """
    _check_limit(profile, exhaustive_limit, "cutset_upper_exhaustive")
    return _exhaustive(profile, BoundKind.CUTSET_EXHAUSTIVE, bc_scale=1.0, coherent=True,
                       penalty=np.zeros(profile.n), workers=workers)


def cutset_upper_prefix(profile: SnrProfile) -> BoundResult:
    """Cutset bound restricted to prefix cuts ``J = {0..k-1}``; never below the exhaustive one."""
    return _prefix(profile, BoundKind.CUTSET_PREFIX, bc_scale=1.0,
                   macp=profile.prefix_dest_coherent)


def pdf_co_lower_diamond(profile: SnrProfile, exhaustive_limit: int = EXHAUSTIVE_LIMIT,
                         workers: int = 1) -> BoundResult:
    """Rate of disjoint-message partial decode-forward on the diamond (L=1).

    Uses the equal-power-split inner bound of the broadcast region:
    ``min_J C(sum_{not J} S_j / N) + C(sum_J S~_j)``.
    """
    if profile.l != 1:
        raise PreconditionError(
            "pdf_co_lower_diamond is defined for a single destination only")
    _check_limit(profile, exhaustive_limit, "pdf_co_lower_diamond")
    return _exhaustive(profile, BoundKind.PDF_CO, bc_scale=1.0 / profile.n, coherent=False,
                       penalty=np.zeros(profile.n), workers=workers)


def pdf_co_polymatroids(profile: SnrProfile) -> tuple[SubsetFn, SubsetFn]:
    """The ``(phi, psi)`` pair whose Edmonds minimum is :func:`pdf_co_lower_diamond`.

    ``phi`` is the relay-to-destination MAC region, ``psi`` the broadcast
    inner bound with every relay getting ``1/N`` of the power.
    """
    if profile.l != 1:
        raise PreconditionError("defined for a single destination only")
    return mac_region_fn(profile.snr_dest[0]), mac_region_fn(profile.snr_relay, 1.0 / profile.n)


def pdf_dms_lower(profile: SnrProfile) -> BoundResult:
    """Independent-codebook partial decode-forward rate over prefix cuts.

    ``min_{d,k} C(sum_{j>=k} S_j / N) + C(sum_{j<k} S~_dj)``
    """
    return _prefix(profile, BoundKind.PDF_DMS, bc_scale=1.0 / profile.n,
                   macp=profile.prefix_dest)


def ddf_penalty_weights(profile: SnrProfile, penalty_mode: str = "exact") -> np.ndarray:
    """Per-relay quantization loss in bits, charged for every relay outside ``J``."""
    n = profile.n
    if penalty_mode == "exact":
        s = profile.snr_relay
        # log2((1 + (1+1/N) s) / (1 + s)) == log2(1 + s / (N (1 + s)))
        return 0.5 * np.log1p(s / (n * (1.0 + s))) * LOG2E
    if penalty_mode == "paper-constant":
        return np.full(n, LOG2E / (2.0 * n))
    raise ValueError(f"penalty_mode must be one of {PENALTY_MODES}, got {penalty_mode!r}")


def ddf_lower(profile: SnrProfile, penalty_mode: str = "exact",
              exhaustive_limit: int = EXHAUSTIVE_LIMIT, workers: int = 1) -> BoundResult:
    """Distributed decode-forward rate with quantization noise of variance N.

    ``min_{d,J} C(sum_{not J} S_j / N) + C(sum_J S~_dj) - penalty(not J)``,
    clamped at zero. When the clamp applies the witness still names the
    minimizing cut, whose raw value is negative.
    """
    pen = ddf_penalty_weights(profile, penalty_mode)
    _check_limit(profile, exhaustive_limit, "ddf_lower")
    r = _exhaustive(profile, BoundKind.DDF, bc_scale=1.0 / profile.n, coherent=False,
                    penalty=pen, workers=workers)
    if r.value_bits < 0.0:
        r = dataclasses.replace(r, value_bits=0.0)
    return r


def capacity_approx(profile: SnrProfile) -> tuple[BoundResult, float]:
    """Capacity estimate within ``+-0.5*log2(N)`` bits, and that radius.

    ``min_{d,k} C(sum_{j>=k} S_j) + C(sum_{j<k} S~_dj)``
    """
    r = _prefix(profile, BoundKind.CAPACITY_APPROX, bc_scale=1.0, macp=profile.prefix_dest)
    return r, 0.5 * math.log2(profile.n)


def cut_value(profile: SnrProfile, kind: BoundKind | str, dest: int, mask: int,
              penalty_mode: str = "exact") -> float:
    """Evaluate one cut directly, independent of the enumeration kernels.

    ``mask`` selects the relays on the destination side (sorted indices).
    Prefix bounds are cuts with ``mask = 2**k - 1``.
    """
    kind = BoundKind(kind)
    n = profile.n
    inside = [j for j in range(n) if mask >> j & 1]
    outside = [j for j in range(n) if not mask >> j & 1]
    s_out = math.fsum(profile.snr_relay[j] for j in outside)
    if kind in (BoundKind.CUTSET_EXHAUSTIVE, BoundKind.CUTSET_PREFIX, BoundKind.EXACT):
        coh = math.fsum(profile.sqrt_dest[dest, j] for j in inside) ** 2
        return gaussian_capacity(s_out) + gaussian_capacity(coh)
    mac = gaussian_capacity(math.fsum(profile.snr_dest[dest, j] for j in inside))
    if kind is BoundKind.CAPACITY_APPROX:
        return gaussian_capacity(s_out) + mac
    v = gaussian_capacity(s_out / n) + mac
    if kind is BoundKind.DDF:
        v -= math.fsum(ddf_penalty_weights(profile, penalty_mode)[outside])
    return v


@dataclasses.dataclass(frozen=True)
class GapReport:
    """All bounds for one network, their gaps and the gap certificates.

    ``None`` marks a bound that was not computed (exhaustive bounds beyond
    the limit, the diamond-only scheme when ``L > 1``).
    """

    n: int
    l: int  # noqa: E741
    exhaustive_used: bool
    penalty_mode: str
    cutset_prefix: BoundResult
    pdf_dms: BoundResult
    capprox: BoundResult
    capprox_radius: float
    cutset_exhaustive: BoundResult | None = None
    pdf_co: BoundResult | None = None
    ddf: BoundResult | None = None
    exact: BoundResult | None = None

    @property
    def gap_pdf_dms(self) -> float:
        return self.cutset_prefix.value_bits - self.pdf_dms.value_bits

    @property
    def gap_ddf(self) -> float | None:
        if self.ddf is None:
            return None
        upper = self.cutset_exhaustive or self.cutset_prefix
        return upper.value_bits - self.ddf.value_bits

    @property
    def gap_pdf_co(self) -> float | None:
        if self.pdf_co is None or self.cutset_exhaustive is None:
            return None
        return self.cutset_exhaustive.value_bits - self.pdf_co.value_bits

    @property
    def log2n(self) -> float:
        return math.log2(self.n)

    @property
    def cert_pdf(self) -> bool:
        return self.gap_pdf_dms <= self.log2n + TOL

    @property
    def cert_ddf(self) -> bool | None:
        g = self.gap_ddf
        return None if g is None else g <= self.log2n + 0.5 * LOG2E + TOL

    @property
    def cert_pdf_co(self) -> bool | None:
        g = self.gap_pdf_co
        return None if g is None else g <= self.log2n + TOL

    @property
    def cert_approx(self) -> bool:
        r = self.capprox_radius + TOL
        c = self.capprox.value_bits
        return (abs(self.cutset_prefix.value_bits - c) <= r
                and abs(c - self.pdf_dms.value_bits) <= r)

    @property
    def ordering_ok(self) -> bool:
        """Lower bounds sit below upper bounds, up to rounding."""
        lo = [self.pdf_dms.value_bits]
        lo += [b.value_bits for b in (self.pdf_co, self.ddf) if b is not None]
        up = self.cutset_prefix.value_bits
        if self.cutset_exhaustive is not None:
            up = self.cutset_exhaustive.value_bits
            if up > self.cutset_prefix.value_bits + TOL:
                return False
        if self.capprox.value_bits > self.cutset_prefix.value_bits + TOL:
            return False
        if self.pdf_dms.value_bits > self.capprox.value_bits + TOL:
            return False
        return all(x <= up + TOL for x in lo)

    @property
    def all_certificates(self) -> bool:
        certs = [self.cert_pdf, self.cert_ddf, self.cert_pdf_co, self.cert_approx, self.ordering_ok]
        return all(c is not False for c in certs)


def bound_report(net: Network | SnrProfile, exhaustive_limit: int = EXHAUSTIVE_LIMIT,
                 penalty_mode: str = "exact", exhaustive: bool = True,
                 workers: int = 1) -> GapReport:
    """Compute every applicable bound for ``net`` and package the gaps.

    Exhaustive bounds (cutset, DDF, and for ``L == 1`` the diamond PDF rate)
    run only when ``exhaustive`` is set and ``N <= exhaustive_limit``.
    """
    profile = net if isinstance(net, SnrProfile) else build_snr_profile(net)
    ddf_penalty_weights(profile, penalty_mode)  # validate the mode up front
    use_ex = exhaustive and profile.n <= exhaustive_limit
    capprox, radius = capacity_approx(profile)
    kw = {}
    if use_ex:
        kw["cutset_exhaustive"] = cutset_upper_exhaustive(profile, exhaustive_limit, workers)
        kw["ddf"] = ddf_lower(profile, penalty_mode, exhaustive_limit, workers)
        if profile.l == 1:
            kw["pdf_co"] = pdf_co_lower_diamond(profile, exhaustive_limit, workers)
    if profile.n == 1:
        kw["exact"] = capacity_n1(profile)
    else:
        kw["exact"] = detect_df_optimal(profile)
    return GapReport(
        n=profile.n, l=profile.l, exhaustive_used=use_ex, penalty_mode=penalty_mode,
        cutset_prefix=cutset_upper_prefix(profile), pdf_dms=pdf_dms_lower(profile),
        capprox=capprox, capprox_radius=radius, **kw)
