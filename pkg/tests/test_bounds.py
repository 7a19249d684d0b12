import math

import numpy as np
import pytest

from conftest import C, fixture_net, random_profile
from relaycap.bounds import (
    BoundKind,
    bound_report,
    capacity_approx,
    cut_value,
    cutset_upper_exhaustive,
    cutset_upper_prefix,
    ddf_lower,
    ddf_penalty_weights,
    pdf_co_lower_diamond,
    pdf_co_polymatroids,
    pdf_dms_lower,
)
from relaycap.core import Network, SnrProfile, build_snr_profile, capacity_n1
from relaycap.errors import PreconditionError, ResourceError
from relaycap.polymatroid import edmonds_min

LOG2E = 1 / math.log(2)


def test_symmetric_cutset(symmetric2):
    # cuts: {} -> C(6); {1},{2} -> C(3)+C(3); {1,2} -> C(12)
    r = cutset_upper_exhaustive(symmetric2)
    assert r.value_bits == pytest.approx(C(6), abs=1e-12)
    assert (r.witness_dest, r.witness_mask, r.eval_count) == (0, 0, 4)
    assert cutset_upper_prefix(symmetric2).value_bits == pytest.approx(C(6), abs=1e-12)


def test_symmetric_lower_bounds(symmetric2):
    assert pdf_co_lower_diamond(symmetric2).value_bits == pytest.approx(1.0, abs=1e-12)
    assert pdf_dms_lower(symmetric2).value_bits == pytest.approx(1.0, abs=1e-12)
    approx, radius = capacity_approx(symmetric2)
    assert approx.value_bits == pytest.approx(C(6), abs=1e-12)
    assert radius == 0.5


def test_fixture_a2():
    p = build_snr_profile(fixture_net(2.0))
    cs = cutset_upper_prefix(p)
    assert cs.value_bits == pytest.approx(C(4), abs=1e-12)
    assert (cs.witness_dest, cs.witness_prefix) == (1, 2)
    pd = pdf_dms_lower(p)
    assert pd.value_bits == pytest.approx(C((2 + 4) / 2), abs=1e-12)
    assert pd.value_bits == pytest.approx(1.0, abs=1e-12)
    rep = bound_report(fixture_net(2.0))
    assert rep.gap_pdf_dms == pytest.approx(C(4) - 1.0, abs=1e-12)
    assert rep.cert_pdf


def test_disconnected_second_hop(rng):
    p = build_snr_profile(Network(1.0, rng.uniform(1, 2, 5), np.zeros((2, 5))))
    for fn in (cutset_upper_exhaustive, cutset_upper_prefix, pdf_dms_lower, ddf_lower):
        assert fn(p).value_bits == 0.0
    assert capacity_approx(p)[0].value_bits == 0.0
    p1 = build_snr_profile(Network(1.0, rng.uniform(1, 2, 5), np.zeros((1, 5))))
    r = pdf_co_lower_diamond(p1)
    assert r.value_bits == 0.0 and r.witness_mask == 0b11111


def test_n1_collapse(rng):
    for _ in range(20):
        p = random_profile(rng, 1, 3)
        cap = capacity_n1(p).value_bits
        assert cutset_upper_exhaustive(p).value_bits == pytest.approx(cap, abs=1e-12)
        assert cutset_upper_prefix(p).value_bits == pytest.approx(cap, abs=1e-12)
        assert capacity_approx(p)[1] == 0.0
    p = random_profile(rng, 1, 1)
    want = min(C(p.snr_relay[0]), C(p.snr_dest[0, 0]))
    assert pdf_co_lower_diamond(p).value_bits == pytest.approx(want, abs=1e-12)


def test_ddf_single_relay():
    p = SnrProfile.from_snrs([3.0], [[3.0]])
    exact = ddf_lower(p)
    assert exact.value_bits == pytest.approx(1.0 - 0.5 * math.log2(7 / 4), abs=1e-12)
    assert exact.value_bits == pytest.approx(0.59632, abs=1e-5)
    const = ddf_lower(p, "paper-constant")
    assert const.value_bits == pytest.approx(1.0 - 0.5 * LOG2E, abs=1e-12)
    assert const.value_bits == pytest.approx(0.27865, abs=1e-5)


def test_ddf_penalty_zero_snr():
    p = SnrProfile.from_snrs([4.0, 0.0], [[1.0, 1.0]])
    w = ddf_penalty_weights(p)
    assert w[1] == 0.0
    assert w[0] == pytest.approx(0.5 * math.log2((1 + 1.5 * 4) / 5), rel=1e-14)
    with pytest.raises(ValueError):
        ddf_penalty_weights(p, "nats")


def test_ddf_exact_never_below_constant(rng):
    for _ in range(50):
        p = random_profile(rng, int(rng.integers(1, 9)), int(rng.integers(1, 4)), "lognormal")
        assert ddf_lower(p).value_bits >= ddf_lower(p, "paper-constant").value_bits


def test_ddf_clamped_at_zero():
    # tiny first hop, no second hop: raw rate is C(tiny) - penalty < 0
    p = SnrProfile.from_snrs([1e-3, 1e-3], [[0.0, 0.0]])
    r = ddf_lower(p, "paper-constant")
    assert r.value_bits == 0.0
    assert cut_value(p, BoundKind.DDF, r.witness_dest, r.witness_mask, "paper-constant") < 0


def test_witness_reproduces_value(rng):
    for _ in range(60):
        n, l = int(rng.integers(1, 11)), int(rng.integers(1, 4))
        p = random_profile(rng, n, l, "lognormal")
        results = [cutset_upper_exhaustive(p), cutset_upper_prefix(p), pdf_dms_lower(p),
                   ddf_lower(p), capacity_approx(p)[0]]
        if l == 1:
            results.append(pdf_co_lower_diamond(p))
        for r in results:
            v = cut_value(p, r.kind, r.witness_dest, r.cut_mask())
            if r.kind is BoundKind.DDF:
                v = max(v, 0.0)
            assert v == pytest.approx(r.value_bits, abs=1e-12)


def test_pdf_co_refuses_multicast(rng):
    with pytest.raises(PreconditionError):
        pdf_co_lower_diamond(random_profile(rng, 3, 2))


def test_exhaustive_limits(rng):
    p = random_profile(rng, 6, 1)
    for fn in (cutset_upper_exhaustive, pdf_co_lower_diamond, ddf_lower):
        with pytest.raises(ResourceError):
            fn(p, exhaustive_limit=5)


def test_prefix_accepts_huge_n(rng):
    p = random_profile(rng, 200_000, 2)
    assert pdf_dms_lower(p).value_bits <= cutset_upper_prefix(p).value_bits


def test_edmonds_bit_for_bit(rng):
    for _ in range(100):
        p = random_profile(rng, int(rng.integers(1, 11)), 1, "lognormal")
        a = pdf_co_lower_diamond(p)
        b = edmonds_min(*pdf_co_polymatroids(p))
        assert a.value_bits == b.value_bits
        assert a.witness_mask == b.witness_mask


def test_ordering_chain_and_sandwich(rng):
    for _ in range(200):
        n, l = int(rng.integers(1, 11)), int(rng.integers(1, 5))
        p = random_profile(rng, n, l, ["rayleigh", "lognormal", "uniform"][_ % 3])
        lo = pdf_dms_lower(p).value_bits
        ex = cutset_upper_exhaustive(p).value_bits
        pre = cutset_upper_prefix(p).value_bits
        ap, r = capacity_approx(p)
        assert lo <= ex + 1e-9 and ex <= pre + 1e-9
        assert lo <= ap.value_bits + 1e-9 <= pre + 2e-9
        assert pre - lo <= math.log2(n) + 1e-9
        assert abs(pre - ap.value_bits) <= r + 1e-9
        assert abs(ap.value_bits - lo) <= r + 1e-9
        assert ex - ddf_lower(p).value_bits <= math.log2(n) + 0.5 * LOG2E + 1e-9


def test_monotone_in_second_hop_and_power(rng):
    for _ in range(50):
        n, l = int(rng.integers(1, 9)), int(rng.integers(1, 4))
        g, gt = rng.rayleigh(1, n), rng.rayleigh(1, (l, n))
        base = build_snr_profile(Network(1.0, g, gt))
        more = build_snr_profile(Network(1.0, g, gt * rng.uniform(1, 3, (l, n))))
        for fn in (cutset_upper_exhaustive, cutset_upper_prefix, pdf_dms_lower, ddf_lower):
            assert fn(more).value_bits >= fn(base).value_bits - 1e-12
        assert capacity_approx(more)[0].value_bits >= capacity_approx(base)[0].value_bits - 1e-12
        louder = build_snr_profile(Network(rng.uniform(1, 10), g, gt))
        assert cutset_upper_prefix(louder).value_bits >= cutset_upper_prefix(base).value_bits - 1e-12


def test_bound_report_fields(rng):
    rep = bound_report(random_profile(rng, 4, 1))
    assert rep.exhaustive_used and rep.pdf_co is not None and rep.ddf is not None
    assert rep.all_certificates
    big = bound_report(random_profile(rng, 30, 2))
    assert not big.exhaustive_used
    assert big.cutset_exhaustive is None and big.ddf is None and big.gap_ddf is None
    assert big.cert_ddf is None and big.all_certificates
    one = bound_report(random_profile(rng, 1, 2))
    assert one.gap_pdf_dms == pytest.approx(0.0, abs=1e-12)
    assert one.exact is not None
    sym = bound_report(build_snr_profile(Network(1.0, [math.sqrt(3)] * 2, [[math.sqrt(3)] * 2])))
    assert sym.gap_pdf_dms == pytest.approx(C(6) - 1.0, abs=1e-12)
    assert sym.gap_pdf_dms == pytest.approx(0.40368, abs=1e-5)
    with pytest.raises(ValueError):
        bound_report(random_profile(rng, 2, 1), penalty_mode="bogus")


def test_symmetric_constant_closed_form():
    for n in (1, 2, 5, 16):
        s = 2.5
        p = build_snr_profile(Network(1.0, [math.sqrt(s)] * n, [[math.sqrt(s)] * n]))
        want = min(C((n - k) * p.snr_relay[0] / n) + C(k * p.snr_dest[0, 0]) for k in range(n + 1))
        assert pdf_dms_lower(p).value_bits == pytest.approx(want, abs=1e-12)
