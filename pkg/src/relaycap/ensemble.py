"""Random network ensembles, gap-certificate sweeps and scaling benchmarks.

Trial ``t`` of a config with seed ``s`` draws from
``numpy.random.Generator(Philox(SeedSequence([s, t])))``: source gains
first (``N`` draws), then relay-to-destination gains row by row (``L*N``
draws). This derivation is part of the reproducibility contract.
"""
from __future__ import annotations

import math
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from relaycap import bounds
from relaycap._backend import BACKEND
from relaycap.core import Network, build_snr_profile
from relaycap.errors import ConfigError

DISTRIBUTIONS = ("constant", "uniform", "rayleigh", "lognormal")
_NPARAMS = {"constant": 1, "uniform": 2, "rayleigh": 1, "lognormal": 2}


@dataclass(frozen=True)
class GainDist:
    kind: str
    params: tuple[float, ...]

    def __post_init__(self):
        if self.kind not in DISTRIBUTIONS:
            raise ConfigError(f"unknown gain distribution {self.kind!r}; choose from {DISTRIBUTIONS}")
        p = tuple(float(x) for x in self.params)
        object.__setattr__(self, "params", p)
        if len(p) != _NPARAMS[self.kind]:
            raise ConfigError(f"{self.kind} takes {_NPARAMS[self.kind]} parameter(s), got {len(p)}")
        if not all(math.isfinite(x) for x in p):
            raise ConfigError("distribution parameters must be finite")
        if self.kind == "uniform" and p[1] < p[0]:
            raise ConfigError("uniform(lo, hi) needs hi >= lo")
        if self.kind == "rayleigh" and p[0] <= 0:
            raise ConfigError("rayleigh scale must be positive")
        if self.kind == "lognormal" and p[1] < 0:
            raise ConfigError("lognormal sigma must be nonnegative")

    @classmethod
    def parse(cls, text: str) -> GainDist:
        """Parse ``kind:p1,p2`` such as ``rayleigh:1`` or ``uniform:0,1``."""
        kind, _, rest = text.partition(":")
        try:
            params = tuple(float(x) for x in rest.split(",")) if rest else ()
        except ValueError:
            raise ConfigError(f"bad distribution parameters in {text!r}") from None
        if not params and kind.strip() == "rayleigh":
            params = (1.0,)
        if not params and kind.strip() == "lognormal":
            params = (0.0, 1.0)
        return cls(kind.strip(), params)

    def __str__(self):
        return f"{self.kind}:{','.join(f'{x:g}' for x in self.params)}"

    def draw(self, rng: np.random.Generator, size) -> np.ndarray:
        p = self.params
        if self.kind == "constant":
            return np.full(size, p[0])
        if self.kind == "uniform":
            return rng.uniform(p[0], p[1], size)
        if self.kind == "rayleigh":
            return rng.rayleigh(p[0], size)
        return rng.lognormal(p[0], p[1], size)


@dataclass(frozen=True)
class EnsembleConfig:
    trials: int
    n: int
    l: int  # noqa: E741
    power: float = 1.0
    gain_dist: GainDist = field(default_factory=lambda: GainDist("rayleigh", (1.0,)))
    seed: int = 0
    exhaustive_limit: int = bounds.EXHAUSTIVE_LIMIT
    penalty_mode: str = "exact"
    exhaustive: bool = True

    def __post_init__(self):
        if isinstance(self.gain_dist, str):
            object.__setattr__(self, "gain_dist", GainDist.parse(self.gain_dist))
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.n < 1 or self.l < 1:
            raise ConfigError("need at least one relay and one destination")
        if not (math.isfinite(self.power) and self.power > 0):
            raise ConfigError("power must be positive")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.penalty_mode not in bounds.PENALTY_MODES:
            raise ConfigError(f"penalty mode must be one of {bounds.PENALTY_MODES}")


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, trial])))


def sample_network(cfg: EnsembleConfig, trial: int) -> Network:
    rng = trial_rng(cfg.seed, trial)
    g = cfg.gain_dist.draw(rng, cfg.n)
    gt = cfg.gain_dist.draw(rng, (cfg.l, cfg.n))
    return Network(cfg.power, g, gt, name=f"trial-{trial}")


BOUND_FIELDS = ("cutset_prefix", "cutset_exhaustive", "pdf_dms", "pdf_co", "ddf", "capprox")
GAP_FIELDS = ("gap_pdf_dms", "gap_ddf", "gap_pdf_co")
CERT_FIELDS = ("cert_pdf", "cert_ddf", "cert_pdf_co", "cert_approx", "ordering_ok")


@dataclass
class EnsembleRecord:
    trial: int
    seed: int
    n: int
    l: int  # noqa: E741
    values: dict[str, float | None]
    gaps: dict[str, float | None]
    certs: dict[str, bool | None]
    seconds: dict[str, float]

    @classmethod
    def from_report(cls, trial: int, seed: int, rep: bounds.GapReport) -> EnsembleRecord:
        values, seconds = {}, {}
        for name in BOUND_FIELDS:
            b = getattr(rep, name)
            values[name] = None if b is None else b.value_bits
            if b is not None:
                seconds[name] = b.elapsed_s
        return cls(trial, seed, rep.n, rep.l, values,
                   {g: getattr(rep, g) for g in GAP_FIELDS},
                   {c: getattr(rep, c) for c in CERT_FIELDS}, seconds)

    def recomputed_certs(self) -> dict[str, bool | None]:
        """Certificates derived again from the stored values alone."""
        v, tol, log2n = self.values, bounds.TOL, math.log2(self.n)
        upper = v["cutset_exhaustive"] if v["cutset_exhaustive"] is not None else v["cutset_prefix"]
        out = {"cert_pdf": v["cutset_prefix"] - v["pdf_dms"] <= log2n + tol,
               "cert_ddf": None, "cert_pdf_co": None}
        if v["ddf"] is not None:
            out["cert_ddf"] = upper - v["ddf"] <= log2n + 0.5 * bounds.LOG2E + tol
        if v["pdf_co"] is not None and v["cutset_exhaustive"] is not None:
            out["cert_pdf_co"] = v["cutset_exhaustive"] - v["pdf_co"] <= log2n + tol
        r = 0.5 * log2n + tol
        out["cert_approx"] = (abs(v["cutset_prefix"] - v["capprox"]) <= r
                              and abs(v["capprox"] - v["pdf_dms"]) <= r)
        return out


@dataclass
class EnsembleResult:
    config: EnsembleConfig
    records: list[EnsembleRecord]

    def summary(self) -> dict:
        out: dict = {"trials": len(self.records)}
        for g in GAP_FIELDS:
            xs = [r.gaps[g] for r in self.records if r.gaps[g] is not None]
            out[g] = {"max": max(xs), "mean": statistics.fmean(xs)} if xs else None
        out["violations"] = {c: sum(1 for r in self.records if r.certs[c] is False)
                             for c in CERT_FIELDS}
        return out

    @property
    def violation_count(self) -> int:
        return sum(self.summary()["violations"].values())


def run_trial(cfg: EnsembleConfig, trial: int) -> EnsembleRecord:
    rep = bounds.bound_report(sample_network(cfg, trial), cfg.exhaustive_limit,
                              cfg.penalty_mode, exhaustive=cfg.exhaustive)
    return EnsembleRecord.from_report(trial, cfg.seed, rep)


def run_ensemble(cfg: EnsembleConfig, workers: int = 1) -> EnsembleResult:
    """Run ``cfg.trials`` independent trials; records come back in trial order."""
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(lambda t: run_trial(cfg, t), range(cfg.trials)))
    else:
        records = [run_trial(cfg, t) for t in range(cfg.trials)]
    return EnsembleResult(cfg, records)


@dataclass(frozen=True)
class BenchRow:
    n: int
    l: int  # noqa: E741
    algo: str
    median_seconds: float
    evals: int
    backend: str = BACKEND


def _median_time(fn, reps):
    fn()  # warm-up, keeps JIT compilation out of the timings
    ts = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        ts.append(time.perf_counter() - t0)
    return statistics.median(ts)


def bench_scaling(n_values, l: int, reps: int = 5, *,  # noqa: E741
                  exhaustive_limit: int = bounds.EXHAUSTIVE_LIMIT, seed: int = 0,
                  gain_dist: GainDist | str = "rayleigh:1") -> list[BenchRow]:
    """Median wall-clock of the prefix and exhaustive bounds for each ``n``.

    The exhaustive cutset is timed only for ``n <= exhaustive_limit``.
    """
    n_values = [int(x) for x in n_values]
    if n_values != sorted(n_values):
        raise ConfigError("n_values must be ascending")
    rows = []
    for n in n_values:
        cfg = EnsembleConfig(1, n, l, gain_dist=gain_dist, seed=seed)
        prof = build_snr_profile(sample_network(cfg, 0))
        rows.append(BenchRow(n, l, "pdf_dms_prefix",
                             _median_time(lambda: bounds.pdf_dms_lower(prof), reps), l * (n + 1)))
        rows.append(BenchRow(n, l, "cutset_prefix",
                             _median_time(lambda: bounds.cutset_upper_prefix(prof), reps), l * (n + 1)))
        if n <= exhaustive_limit:
            rows.append(BenchRow(
                n, l, "cutset_exhaustive",
                _median_time(lambda: bounds.cutset_upper_exhaustive(prof, exhaustive_limit), reps),
                l << n))
    return rows
