"""Problem instances, SNR profiles and closed-form capacity results.

All rates are in bits. Relay indices are 0-based throughout the library;
after profiling, relay ``j`` means the ``j``-th strongest source link.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from relaycap import kernels
from relaycap.errors import DomainError, PreconditionError, ShapeError

LOG2E = 1.0 / math.log(2.0)


def gaussian_capacity(x: float) -> float:
    """Return ``0.5 * log2(1 + x)``, the AWGN capacity at SNR ``x``.

    >>> gaussian_capacity(3.0)
    1.0
    """
    x = float(x)
    if not math.isfinite(x) or x < 0.0:
        raise DomainError(f"SNR must be finite and nonnegative, got {x!r}")
    if x < 1.0:
        return 0.5 * (math.log1p(x) / math.log(2.0))
    return 0.5 * math.log2(1.0 + x)


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Network:
    """Raw two-hop instance: amplitude gains and the common power budget.

    ``source_gains[j]`` is the source-to-relay-``j`` gain and
    ``relay_dest_gains[d, j]`` the relay-``j``-to-destination-``d`` gain.
    """

    power: float
    source_gains: np.ndarray
    relay_dest_gains: np.ndarray
    name: str | None = None

    def __post_init__(self):
        g = np.array(self.source_gains, dtype=np.float64)
        gt = np.array(self.relay_dest_gains, dtype=np.float64)
        if g.ndim != 1 or g.size < 1:
            raise ShapeError("source_gains must be a nonempty vector")
        if gt.ndim != 2 or gt.shape[0] < 1:
            raise ShapeError("relay_dest_gains must be a nonempty L x N matrix")
        if gt.shape[1] != g.size:
            raise ShapeError(
                f"relay_dest_gains has {gt.shape[1]} columns but there are {g.size} relays")
        p = float(self.power)
        if not (math.isfinite(p) and p > 0):
            raise DomainError(f"power must be positive and finite, got {self.power!r}")
        if not (np.all(np.isfinite(g)) and np.all(np.isfinite(gt))):
            raise DomainError("all gains must be finite")
        object.__setattr__(self, "power", p)
        object.__setattr__(self, "source_gains", _readonly(g))
        object.__setattr__(self, "relay_dest_gains", _readonly(gt))

    @property
    def num_relays(self) -> int:
        return self.source_gains.size

    @property
    def num_destinations(self) -> int:
        return self.relay_dest_gains.shape[0]

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return (self.power == other.power and self.name == other.name
                and np.array_equal(self.source_gains, other.source_gains)
                and np.array_equal(self.relay_dest_gains, other.relay_dest_gains))

    __hash__ = None


@dataclass(frozen=True, eq=False)
class SnrProfile:
    """Sorted SNR view of a :class:`Network`.

    ``snr_relay`` is nonincreasing; ``ordering[j]`` is the original index of
    sorted relay ``j``. ``suffix_src[k]`` is the sum of ``snr_relay[k:]``,
    ``prefix_dest[d, k]`` the sum of ``snr_dest[d, :k]`` and
    ``prefix_dest_coherent[d, k]`` the square of the sum of
    ``sqrt_dest[d, :k]``.
    """

    power: float
    snr_relay: np.ndarray
    snr_dest: np.ndarray
    sqrt_dest: np.ndarray
    ordering: np.ndarray
    suffix_src: np.ndarray = field(repr=False)
    prefix_dest: np.ndarray = field(repr=False)
    prefix_dest_coherent: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.snr_relay.size

    @property
    def l(self) -> int:  # noqa: E743
        return self.snr_dest.shape[0]

    @property
    def is_sorted(self) -> bool:
        return bool(np.all(self.snr_relay[:-1] >= self.snr_relay[1:]))

    @classmethod
    def from_snrs(cls, snr_relay, snr_dest, *, power: float = 1.0, ordering=None,
                  sqrt_dest=None) -> SnrProfile:
        """Assemble a profile from SNRs already in the desired relay order.

        No sorting happens here; :func:`build_snr_profile` is the normal
        entry point. Test harnesses use this to build unsorted profiles.
        """
        s = np.array(snr_relay, dtype=np.float64)
        st = np.array(snr_dest, dtype=np.float64)
        if s.ndim != 1 or st.ndim != 2 or st.shape[1] != s.size:
            raise ShapeError("snr_dest must be L x N with N = len(snr_relay)")
        if np.any(s < 0) or np.any(st < 0):
            raise DomainError("SNRs must be nonnegative")
        rt = np.sqrt(st) if sqrt_dest is None else np.array(sqrt_dest, dtype=np.float64)
        order = np.arange(s.size) if ordering is None else np.array(ordering, dtype=np.int64)
        suffix = kernels.cumsum0(s[::-1])[::-1].copy()
        pre = kernels.cumsum0(st)
        coh = kernels.cumsum0(rt)
        coh = coh * coh
        return cls(float(power), _readonly(s), _readonly(st), _readonly(rt),
                   _readonly(order), _readonly(suffix), _readonly(pre), _readonly(coh))


def build_snr_profile(net: Network) -> SnrProfile:
    """Square gains into SNRs and reorder relays by source gain magnitude.

    Sorting is stable: relays with equal ``|g|`` keep their original order.
    """
    g = net.source_gains
    order = np.argsort(-np.abs(g), kind="stable")
    p = net.power
    s = g[order] * g[order] * p
    gt = net.relay_dest_gains[:, order]
    st = gt * gt * p
    rt = np.abs(gt) * math.sqrt(p)
    return SnrProfile.from_snrs(s, st, power=p, ordering=order, sqrt_dest=rt)


class BoundKind(str, enum.Enum):
    CUTSET_EXHAUSTIVE = "cutset-exhaustive"
    CUTSET_PREFIX = "cutset-prefix"
    PDF_CO = "pdf-co"
    PDF_DMS = "pdf-dms"
    DDF = "ddf"
    CAPACITY_APPROX = "capacity-approx"
    EXACT = "exact"


@dataclass(frozen=True)
class BoundResult:
    """A bound in bits with the cut that attains it.

    Exhaustive bounds report the cut as ``witness_mask`` (bit ``j`` set means
    sorted relay ``j`` is on the destination side); prefix bounds report
    ``witness_prefix = k``, i.e. the relays ``0..k-1``.
    """

    value_bits: float
    kind: BoundKind
    witness_dest: int | None = None
    witness_mask: int | None = None
    witness_prefix: int | None = None
    eval_count: int = 0
    elapsed_s: float = 0.0

    def cut_mask(self) -> int | None:
        if self.witness_mask is not None:
            return self.witness_mask
        if self.witness_prefix is not None:
            return (1 << self.witness_prefix) - 1
        return None


def capacity_n1(profile: SnrProfile) -> BoundResult:
    """Exact capacity of the single-relay network.

    The witness is the binding cut: mask 0 when the source link binds,
    otherwise mask 1 at the weakest destination.
    """
    if profile.n != 1:
        raise PreconditionError(f"capacity_n1 needs exactly one relay, got {profile.n}")
    src = gaussian_capacity(profile.snr_relay[0])
    dest = [gaussian_capacity(x) for x in profile.snr_dest[:, 0]]
    d = int(np.argmin(dest))
    if src <= dest[d]:
        return BoundResult(src, BoundKind.EXACT, witness_dest=0, witness_mask=0, eval_count=2)
    return BoundResult(dest[d], BoundKind.EXACT, witness_dest=d, witness_mask=1,
                       eval_count=1 + profile.l)


def coherent_full(profile: SnrProfile) -> np.ndarray:
    """Per-destination ``(sum_j sqrt(S~_dj))**2``."""
    return profile.prefix_dest_coherent[:, -1]


def detect_df_optimal(profile: SnrProfile) -> BoundResult | None:
    """Capacity when the weakest relay can decode everything.

    Fires when ``sqrt(S_N) >= min_d sum_j sqrt(S~_dj)``; the capacity is
    then the coherent second-hop bottleneck.
    """
    sums = profile.sqrt_dest.sum(axis=1)
    if math.sqrt(profile.snr_relay[-1]) < sums.min():
        return None
    caps = [gaussian_capacity(x) for x in coherent_full(profile)]
    d = int(np.argmin(caps))
    return BoundResult(caps[d], BoundKind.EXACT, witness_dest=d,
                       witness_mask=(1 << profile.n) - 1, eval_count=profile.l)


def detect_best_relay_regime(profile: SnrProfile) -> float | None:
    """Rate ``C(S_1)`` of the best relay alone, when its second hop is no bottleneck."""
    if math.sqrt(profile.snr_relay[0]) > profile.sqrt_dest[:, 0].min():
        return None
    return gaussian_capacity(profile.snr_relay[0])
