import math

import numpy as np
import pytest

from relaycap.core import Network, build_snr_profile

ACCEPTANCE_LINES = []


def C(x):
    """Independent reference for 0.5*log2(1+x)."""
    return 0.5 * math.log2(1.0 + x)


def fixture_net(a: float) -> Network:
    """Two relays, two destinations; reproduces the (a, sqrt a, 0) example."""
    r = math.sqrt(a)
    return Network(1.0, [a, r], [[a, r], [a, 0.0]], name=f"net(a={a:g})")


def random_network(rng, n, l, dist="rayleigh", power=1.0):
    if dist == "rayleigh":
        draw = lambda size: rng.rayleigh(1.0, size)  # noqa: E731
    elif dist == "lognormal":
        draw = lambda size: rng.lognormal(0.0, 1.5, size)  # noqa: E731
    elif dist == "uniform":
        draw = lambda size: rng.uniform(-2.0, 2.0, size)  # noqa: E731
    else:
        raise ValueError(dist)
    return Network(power, draw(n), draw((l, n)))


def random_profile(rng, n, l, dist="rayleigh", power=1.0):
    return build_snr_profile(random_network(rng, n, l, dist, power))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def symmetric2():
    r3 = math.sqrt(3.0)
    return build_snr_profile(Network(1.0, [r3, r3], [[r3, r3]]))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
