import math

import numpy as np
import pytest
from scipy.integrate import quad

from penroselab.quadrature import PanelAntiderivative, adaptive_simpson, improper_lower


@pytest.mark.parametrize(
    "f,a,b",
    [
        (lambda x: x**3 - 2 * x, 0.0, 3.0),
        (lambda x: math.exp(-x) * math.sin(5 * x), 0.0, 10.0),
        (lambda x: 1.0 / x, 0.1, 100.0),
    ],
)
def test_adaptive_simpson_against_scipy(f, a, b):
    ref, _ = quad(f, a, b, epsabs=1e-13, epsrel=1e-13, limit=200)
    assert adaptive_simpson(f, a, b) == pytest.approx(ref, abs=5e-10)


def test_adaptive_simpson_empty_interval():
    assert adaptive_simpson(lambda x: x, 2.0, 2.0) == 0.0


def test_improper_convergent_power():
    # integral of x^{-1/2} over (0, 1] = 2
    value, diverged = improper_lower(lambda x: x**-0.5, 0.0, 1.0)
    assert not diverged
    assert value == pytest.approx(2.0, abs=1e-8)


def test_improper_regular_integrand():
    value, diverged = improper_lower(lambda x: x**2, 0.0, 1.0)
    assert not diverged
    assert value == pytest.approx(1.0 / 3.0, abs=1e-10)


@pytest.mark.parametrize("p", [1.0, 2.0])
def test_improper_divergent_power(p):
    value, diverged = improper_lower(lambda x: x**-p, 0.0, 1.0)
    assert diverged
    assert math.isinf(value)


def test_panel_antiderivative_matches_quad():
    f = lambda x: np.sin(x) / x
    edges = np.geomspace(0.1, 20.0, 257)
    anti = PanelAntiderivative(f, edges)
    for x in (0.1, 0.37, 5.0, 19.99, 20.0):
        ref, _ = quad(f, x, 20.0, limit=200)
        assert anti(x) == pytest.approx(ref, abs=1e-10)
    xs = np.array([0.2, 1.0, 10.0])
    out = anti(xs)
    assert out.shape == xs.shape
