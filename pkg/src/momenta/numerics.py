"""Quadrature and ODE helpers shared by the momentum and cylinder modules.

The path integrands in this package are piecewise-polynomial of low degree, so
order-8 Gauss-Legendre panels are exact up to rounding; the adaptive wrapper
halves panels only to certify that, and reports a diagnostic error if two
successive refinements still disagree.
"""

from __future__ import annotations

import numpy as np
from scipy.special import roots_legendre

from .errors import NumericalError

__all__ = ["gauss_nodes", "adaptive_path_quadrature", "rk4_step"]

_X8, _W8 = roots_legendre(8)


def gauss_nodes(a: float, b: float):
    """Order-8 Gauss-Legendre nodes and weights on [a, b]."""
    half = 0.5 * (b - a)
    return a + half * (_X8 + 1.0), half * _W8


def _panel_sum(f_many, breakpoints, level: int):
    ts, ws = [], []
    for a, b in zip(breakpoints[:-1], breakpoints[1:]):
        edges = np.linspace(a, b, 2**level + 1)
        for lo, hi in zip(edges[:-1], edges[1:]):
            x, w = gauss_nodes(lo, hi)
            ts.append(x)
            ws.append(w)
    ts, ws = np.concatenate(ts), np.concatenate(ws)
    vals = np.asarray(f_many(ts), dtype=float)
    return ws @ vals


def adaptive_path_quadrature(f_many, breakpoints, tol: float = 1e-10, max_doublings: int = 12):
    """Integrate a vector-valued integrand over [b_0, b_last].

    ``f_many(ts) -> (len(ts), k)`` must be evaluable at arbitrary points;
    ``breakpoints`` mark its potential kinks, and every quadrature panel stays
    inside one kink-free piece.  Panels are halved until two successive totals
    agree within ``tol`` (sup norm); exceeding ``max_doublings`` raises
    NumericalError with the last disagreement attached.
    """
    breakpoints = np.unique(np.asarray(breakpoints, dtype=float))
    coarse = _panel_sum(f_many, breakpoints, 0)
    for level in range(1, max_doublings + 1):
        fine = _panel_sum(f_many, breakpoints, level)
        gap = float(np.max(np.abs(fine - coarse)))
        if gap < tol:
            return fine
        coarse = fine
    raise NumericalError(
        f"quadrature did not settle below {tol} after {max_doublings} doublings "
        f"(last refinement moved the result by {gap:.3e})"
    )


def rk4_step(f, t: float, y: np.ndarray, h: float) -> np.ndarray:
    k1 = f(t, y)
    k2 = f(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = f(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
