import math

import numpy as np
import pytest

from conftest import C
from relaycap.ensemble import (
    EnsembleConfig,
    GainDist,
    bench_scaling,
    run_ensemble,
    sample_network,
    trial_rng,
)
from relaycap.errors import ConfigError


def test_constant_distribution():
    net = sample_network(EnsembleConfig(1, 2, 1, gain_dist="constant:2"), 0)
    np.testing.assert_array_equal(net.source_gains, [2, 2])
    np.testing.assert_array_equal(net.relay_dest_gains, [[2, 2]])


def test_sampling_is_deterministic():
    cfg = EnsembleConfig(5, 6, 3, gain_dist="lognormal:0,1", seed=99)
    assert sample_network(cfg, 3) == sample_network(cfg, 3)


def test_trials_differ():
    cfg = EnsembleConfig(100, 3, 2, gain_dist="uniform:0,1", seed=1)
    first = sample_network(cfg, 0)
    assert any(sample_network(cfg, t) != first for t in range(1, 100))


def test_substream_derivation_is_stable():
    # pinned first draw of the documented generator; changes here break reproducibility
    x = trial_rng(7, 3).random()
    assert x == trial_rng(7, 3).random()
    ref = np.random.Generator(np.random.Philox(np.random.SeedSequence([7, 3]))).random()
    assert x == ref


@pytest.mark.parametrize("text", ["gamma:1", "rayleigh:0", "uniform:2,1", "constant:1,2",
                                  "lognormal:0,-1", "uniform:a,b", "rayleigh:nan"])
def test_bad_distributions(text):
    with pytest.raises(ConfigError):
        GainDist.parse(text)


def test_bad_config():
    with pytest.raises(ConfigError):
        EnsembleConfig(0, 2, 1)
    with pytest.raises(ConfigError):
        EnsembleConfig(1, 0, 1)
    with pytest.raises(ConfigError):
        EnsembleConfig(1, 2, 1, seed=-1)
    with pytest.raises(ConfigError):
        EnsembleConfig(1, 2, 1, penalty_mode="nats")


def test_distribution_defaults_and_str():
    assert GainDist.parse("rayleigh") == GainDist("rayleigh", (1.0,))
    assert str(GainDist.parse("uniform:0,1")) == "uniform:0,1"


def test_rayleigh_ensemble_has_no_violations():
    res = run_ensemble(EnsembleConfig(100, 8, 2, gain_dist="rayleigh:1", seed=5))
    s = res.summary()
    assert s["trials"] == 100
    assert s["violations"]["cert_pdf"] == 0 and s["violations"]["cert_ddf"] == 0
    assert res.violation_count == 0
    for r in res.records:
        assert r.recomputed_certs() == {k: r.certs[k] for k in r.recomputed_certs()}


def test_zero_gains():
    res = run_ensemble(EnsembleConfig(1, 3, 2, gain_dist="constant:0"))
    r = res.records[0]
    assert all(v == 0 for v in r.values.values() if v is not None)
    assert all(g == 0 for g in r.gaps.values() if g is not None)


def test_single_relay_sweep_has_zero_gap():
    res = run_ensemble(EnsembleConfig(30, 1, 3, gain_dist="lognormal:0,1"))
    assert all(r.gaps["gap_pdf_dms"] == pytest.approx(0, abs=1e-12) for r in res.records)


def test_reproducible_and_order_independent_of_workers():
    cfg = EnsembleConfig(12, 5, 2, seed=11)
    a, b = run_ensemble(cfg), run_ensemble(cfg, workers=4)
    for x, y in zip(a.records, b.records):
        assert (x.trial, x.values, x.gaps, x.certs) == (y.trial, y.values, y.gaps, y.certs)


def test_symmetric_constant_ensemble_closed_form():
    for n in (1, 3, 8):
        res = run_ensemble(EnsembleConfig(1, n, 1, gain_dist="constant:1.5", power=2.0))
        s = 1.5 * 1.5 * 2.0
        want = min(C((n - k) * s / n) + C(k * s) for k in range(n + 1))
        assert res.records[0].values["pdf_dms"] == pytest.approx(want, abs=1e-12)


def test_skip_exhaustive_above_limit():
    res = run_ensemble(EnsembleConfig(2, 10, 2, exhaustive_limit=8))
    r = res.records[0]
    assert r.values["cutset_exhaustive"] is None and r.values["ddf"] is None
    assert r.certs["cert_pdf"]


def test_bench_shape():
    rows = bench_scaling([1], 1, reps=2)
    assert [r.algo for r in rows] == ["pdf_dms_prefix", "cutset_prefix", "cutset_exhaustive"]
    rows = bench_scaling([4, 8, 30], 2, reps=2, exhaustive_limit=24)
    assert sum(r.algo == "cutset_exhaustive" for r in rows) == 2
    assert all(r.median_seconds >= 0 for r in rows)
    with pytest.raises(ConfigError):
        bench_scaling([8, 4], 1)
