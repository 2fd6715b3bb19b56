"""One-dimensional quadrature helpers.

Three tools cover every integral in the package:

- ``adaptive_simpson``: classic recursive Simpson with Richardson correction,
  absolute tolerance, and a hard subdivision cap.
- ``improper_lower``: integrals with an open lower endpoint, evaluated on a
  geometric sequence of cutoffs.  The tail is extrapolated from the observed
  decay ratio of the cutoff increments; increments that stop decaying signal
  divergence, which is reported as a flag instead of a large finite number.
- ``PanelAntiderivative``: a fixed piecewise Gauss-Legendre antiderivative
  F(x) = integral from x to the right edge, cheap to evaluate anywhere and
  smooth enough for line searches.
"""

from __future__ import annotations

import math

import numpy as np

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


def adaptive_simpson(f, a: float, b: float, tol: float = 1e-10, max_depth: int = 48) -> float:
    """Integrate f over [a, b] to absolute tolerance ``tol``."""
    if a == b:
        return 0.0
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth)


def _simpson_step(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    return _simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + _simpson_step(
        f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1
    )


def improper_lower(
    f,
    lo: float,
    b: float,
    tol: float = 1e-10,
    max_steps: int = 60,
) -> tuple[float, bool]:
    """Integrate f over (lo, b] where f may blow up at ``lo``.

    Returns ``(value, diverged)``.  Cutoffs approach ``lo`` geometrically;
    three consecutive increments that fail to decay mark the integral as
    divergent and the value is ``math.inf``.
    """
    if b <= lo:
        return 0.0, False
    span = b - lo
    a_prev = lo + 0.5 * span
    total = adaptive_simpson(f, a_prev, b, tol)
    prev_piece = None
    bad = 0
    for k in range(2, max_steps + 2):
        a_next = lo + span / 2.0**k
        piece = adaptive_simpson(f, a_next, a_prev, tol)
        total += piece
        if prev_piece is not None and prev_piece > 0:
            ratio = piece / prev_piece
            bad = bad + 1 if ratio >= 0.97 else 0
            if bad >= 3:
                return math.inf, True
            if piece <= tol * (1.0 + abs(total)) and ratio < 0.97:
                # geometric tail estimate for what remains below a_next
                total += piece * ratio / (1.0 - ratio)
                return total, False
        elif piece <= tol * (1.0 + abs(total)):
            return total, False
        prev_piece = piece
        a_prev = a_next
    return total, False


def gauss_panel(f, a, b):
    """8-point Gauss-Legendre estimate of the integral of f over [a, b].

    ``a`` may be an array (with scalar or matching ``b``); f must accept arrays.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    nodes = mid[..., None] + half[..., None] * _GL_NODES
    vals = f(nodes.reshape(-1)).reshape(nodes.shape)
    return (vals * _GL_WEIGHTS).sum(axis=-1) * half


class PanelAntiderivative:
    """Right-anchored antiderivative on a fixed panel subdivision.

    Given edges x_0 < ... < x_P and an integrand f, precomputes per-panel
    Gauss-Legendre integrals so that F(x) = integral_x^{x_P} f can be
    evaluated anywhere in [x_0, x_P] with one extra 8-point panel.
    """

    def __init__(self, f, edges):
        self.f = f
        self.edges = np.asarray(edges, dtype=float)
        panels = gauss_panel(f, self.edges[:-1], self.edges[1:])
        suffix = np.zeros(len(self.edges))
        suffix[:-1] = np.cumsum(panels[::-1])[::-1]
        self.suffix = suffix

    def __call__(self, x):
        x_arr = np.asarray(x, dtype=float)
        scalar = x_arr.ndim == 0
        xs = np.atleast_1d(x_arr)
        idx = np.clip(np.searchsorted(self.edges, xs, side="right") - 1, 0, len(self.edges) - 2)
        partial = gauss_panel(self.f, xs, self.edges[idx + 1])
        out = partial + self.suffix[idx + 1]
        return float(out[0]) if scalar else out
