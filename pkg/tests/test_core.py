import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import C, random_network
from relaycap.bounds import cutset_upper_exhaustive
from relaycap.core import (
    Network,
    SnrProfile,
    build_snr_profile,
    capacity_n1,
    detect_best_relay_regime,
    detect_df_optimal,
    gaussian_capacity,
)
from relaycap.errors import DomainError, PreconditionError, ShapeError


@pytest.mark.parametrize("x, expected", [(0, 0.0), (1, 0.5), (3, 1.0), (2.0**100 - 1, 50.0)])
def test_gaussian_capacity_values(x, expected):
    assert gaussian_capacity(x) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("x", [-1e-300, -1.0, math.inf, math.nan])
def test_gaussian_capacity_domain(x):
    with pytest.raises(DomainError):
        gaussian_capacity(x)


def test_gaussian_capacity_extremes():
    assert gaussian_capacity(1e-300) == pytest.approx(0.5e-300 / math.log(2), rel=1e-12)
    assert gaussian_capacity(np.finfo(float).max) == pytest.approx(512.0, abs=1e-9)


@given(st.floats(0, 1e300), st.floats(0, 1e300))
def test_gaussian_capacity_monotone(x, y):
    lo, hi = sorted((x, y))
    assert gaussian_capacity(lo) <= gaussian_capacity(hi)


def test_profile_sorts_by_magnitude():
    p = build_snr_profile(Network(2.0, [1, -3, 2], [[1, 1, 1]]))
    np.testing.assert_array_equal(p.snr_relay, [18, 8, 2])
    np.testing.assert_array_equal(p.ordering, [1, 2, 0])
    np.testing.assert_array_equal(p.snr_dest, [[2, 2, 2]])


def test_profile_single_relay():
    p = build_snr_profile(Network(1.0, [5], [[1]]))
    np.testing.assert_array_equal(p.snr_relay, [25])
    np.testing.assert_array_equal(p.ordering, [0])


def test_profile_stable_ties():
    r3 = math.sqrt(3)
    p = build_snr_profile(Network(1.0, [r3, r3], [[r3, r3]]))
    np.testing.assert_allclose(p.snr_relay, [3, 3], rtol=1e-15)
    np.testing.assert_allclose(p.snr_dest, [[3, 3]], rtol=1e-15)
    np.testing.assert_array_equal(p.ordering, [0, 1])


def test_profile_squares_exactly(rng):
    net = random_network(rng, 9, 3, "uniform", power=2.5)
    p = build_snr_profile(net)
    g = net.source_gains[p.ordering]
    np.testing.assert_array_equal(p.snr_relay, g * g * 2.5)
    gt = net.relay_dest_gains[:, p.ordering]
    np.testing.assert_array_equal(p.snr_dest, gt * gt * 2.5)
    assert p.is_sorted


@pytest.mark.parametrize("n", [1, 7, 200, 20_000])
def test_prefix_arrays_match_definitions(rng, n):
    p = build_snr_profile(random_network(rng, n, 2, "lognormal"))
    s, st_, rt = p.snr_relay, p.snr_dest, p.sqrt_dest
    want_suffix = [math.fsum(s[k:]) for k in range(0, n + 1, max(1, n // 50))]
    np.testing.assert_allclose(p.suffix_src[::max(1, n // 50)][:len(want_suffix)], want_suffix,
                               rtol=1e-12, atol=0)
    for d in range(2):
        ks = range(0, n + 1, max(1, n // 50))
        np.testing.assert_allclose([p.prefix_dest[d, k] for k in ks],
                                   [math.fsum(st_[d, :k]) for k in ks], rtol=1e-12, atol=0)
        np.testing.assert_allclose([p.prefix_dest_coherent[d, k] for k in ks],
                                   [math.fsum(rt[d, :k]) ** 2 for k in ks], rtol=1e-12, atol=0)


def test_profile_idempotent(rng):
    p = build_snr_profile(random_network(rng, 12, 3, "uniform"))
    g = np.sqrt(p.snr_relay)
    again = build_snr_profile(Network(1.0, g, np.sqrt(p.snr_dest)))
    np.testing.assert_array_equal(again.ordering, np.arange(12))


def test_network_shape_errors():
    with pytest.raises(ShapeError):
        Network(1.0, [1, 2], [[1, 2, 3]])
    with pytest.raises(ShapeError):
        Network(1.0, [], [[]])
    with pytest.raises(DomainError):
        Network(0.0, [1], [[1]])
    with pytest.raises(DomainError):
        Network(1.0, [math.inf], [[1]])


def test_capacity_n1():
    p = SnrProfile.from_snrs([4.0], [[9.0], [1.0]])
    r = capacity_n1(p)
    assert r.value_bits == pytest.approx(0.5, abs=1e-15)
    assert (r.witness_dest, r.witness_mask) == (1, 1)
    assert capacity_n1(SnrProfile.from_snrs([0.0], [[5.0]])).value_bits == 0.0
    assert capacity_n1(SnrProfile.from_snrs([3.0], [[3.0]])).value_bits == pytest.approx(1.0)
    with pytest.raises(PreconditionError):
        capacity_n1(SnrProfile.from_snrs([1.0, 1.0], [[1.0, 1.0]]))


def test_df_optimal_fires():
    p = build_snr_profile(Network(1.0, [10, 10], [[1, 1], [1, 2]]))
    r = detect_df_optimal(p)
    assert r.value_bits == pytest.approx(C(4), abs=1e-12)
    assert r.value_bits == pytest.approx(1.16096, abs=1e-5)
    assert r.witness_dest == 0
    assert cutset_upper_exhaustive(p).value_bits == pytest.approx(r.value_bits, abs=1e-9)


def test_df_optimal_declines_and_disconnected():
    assert detect_df_optimal(build_snr_profile(Network(1.0, [1, 1], [[10, 10]]))) is None
    r = detect_df_optimal(build_snr_profile(Network(1.0, [1, 2, 3], [[0, 0, 0]])))
    assert r.value_bits == 0.0


def test_df_optimal_matches_cutset_when_firing(rng):
    fired = 0
    for _ in range(300):
        n = int(rng.integers(1, 13))
        l = int(rng.integers(1, 4))
        net = Network(1.0, rng.uniform(5, 10, n), rng.uniform(0, 5.0 / n, (l, n)))
        p = build_snr_profile(net)
        r = detect_df_optimal(p)
        if r is not None:
            fired += 1
            assert cutset_upper_exhaustive(p).value_bits == pytest.approx(r.value_bits, abs=1e-9)
    assert fired > 100


def test_best_relay_regime():
    p = build_snr_profile(Network(1.0, [1, 0.5], [[2, 1], [3, 1]]))
    assert detect_best_relay_regime(p) == pytest.approx(0.5)
    assert detect_best_relay_regime(build_snr_profile(Network(1.0, [4, 1], [[2, 2]]))) is None
    assert detect_best_relay_regime(build_snr_profile(Network(1.0, [0, 0], [[1, 1]]))) == 0.0


@given(st.lists(st.floats(0, 1e6), min_size=1, max_size=40), st.integers(0, 40))
def test_coherence_gap_lemmas(s, extra):
    n = len(s) + extra
    tot = math.fsum(s)
    assert C(tot) - C(tot / n) <= 0.5 * math.log2(n) + 1e-12
    coherent = math.fsum(math.sqrt(x) for x in s) ** 2
    assert C(coherent) - C(tot) <= 0.5 * math.log2(n) + 1e-12
