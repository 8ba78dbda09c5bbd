"""Single layer and its one-sided tractions for a density sampled on a curve."""

from __future__ import annotations

import numpy as np

from ..core_model import SmoothCurve
from .kernel import KelvinKernel
from .operators import SelfOperators, join, resample_periodic, split
from .solver import layer_at_points


class QuadratureUnderResolved(ArithmeticError):
    pass


SIDES = {"interior": -0.5, "exterior": 0.5}


def _density(density, n_hint=None) -> np.ndarray:
    f = np.asarray(density, float)
    if f.ndim != 2 or f.shape[1] != 2:
        raise ValueError("density must have shape (N, 2)")
    if f.shape[0] % 2:
        raise ValueError("density needs an even number of nodes")
    return f


def _compare(coarse, fine, tol, what):
    scale = max(1.0, float(np.max(np.abs(fine))))
    err = float(np.max(np.abs(coarse - fine)))
    if err > tol * scale:
        raise QuadratureUnderResolved(f"{what}: node doubling changes the result by {err:.3e}")


def single_layer(kernel: KelvinKernel, curve: SmoothCurve, density, x=None,
                 tol: float = 1e-8) -> np.ndarray:
    """Single layer of ``density`` (values at the N curve nodes).

    With ``x`` None the potential is returned at the nodes (log-corrected
    quadrature); otherwise at the given off-curve points, shape (M, 2).
    """
    f = _density(density)
    n = f.shape[0]
    phase = kernel.phase

    def on_curve(m):
        ops = SelfOperators(curve.discretize(m))
        return split(ops.single_layer(phase) @ join(resample_periodic(f, m)))

    if x is None:
        coarse = on_curve(n)
        _compare(coarse, on_curve(2 * n)[::2], tol, "single layer")
        return coarse
    pts = np.atleast_2d(np.asarray(x, float))
    coarse = layer_at_points(curve, f, pts, phase)
    fine = layer_at_points(curve, resample_periodic(f, 2 * n), pts, phase)
    _compare(coarse, fine, tol, "single layer")
    return coarse


def traction_of_single_layer(kernel: KelvinKernel, curve: SmoothCurve, density,
                             node_index=None, side: str = "exterior",
                             tol: float = 1e-8) -> np.ndarray:
    """One-sided traction (-+1/2 I + K*) density; interior takes the minus sign.

    ``node_index`` selects nodes (int or array); None returns all of them.
    """
    if side not in SIDES:
        raise ValueError(f"side must be one of {sorted(SIDES)}")
    f = _density(density)
    n = f.shape[0]

    def at(m):
        ops = SelfOperators(curve.discretize(m))
        g = resample_periodic(f, m)
        return SIDES[side] * g + split(ops.adjoint_traction(kernel.phase) @ join(g))

    coarse = at(n)
    _compare(coarse, at(2 * n)[::2], tol, "traction")
    if node_index is None:
        return coarse
    idx = np.asarray(node_index)
    if np.any((idx < 0) | (idx >= n)):
        raise IndexError("node index out of range")
    return coarse[idx]
