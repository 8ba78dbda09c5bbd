"""Cauchy transform on a closed curve, one-sided limits and an extension test."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..core_model import SmoothCurve
from ..kelvin_bem.operators import resample_periodic


class TooCloseToCurve(ValueError):
    pass


def _values(g, curve: SmoothCurve, n: int | None) -> np.ndarray:
    """Boundary values at the curve nodes; g may be a callable of z or an array."""
    if callable(g):
        if n is None:
            raise ValueError("node count needed for a callable g")
        return np.asarray(g(curve.discretize(n).z), complex)
    return np.asarray(g, complex)


def _resample_complex(g: np.ndarray, m: int) -> np.ndarray:
    both = resample_periodic(np.column_stack([g.real, g.imag]), m)
    return both[:, 0] + 1j * both[:, 1]


def _trapezoid(gv: np.ndarray, nodes, w: np.ndarray) -> np.ndarray:
    dt = 2 * np.pi / nodes.n
    kern = (gv * nodes.dz)[None, :] / (nodes.z[None, :] - w[:, None])
    return kern.sum(axis=1) * dt / (2j * np.pi)


def cauchy_transform(g, curve: SmoothCurve, w, n: int | None = None,
                     min_spacings: float = 5.0) -> np.ndarray:
    """(1 / 2 pi i) int g(z) / (z - w) dz by the trapezoidal rule.

    Points closer than ``min_spacings`` node spacings raise TooCloseToCurve.
    """
    gv = _values(g, curve, n)
    nodes = curve.discretize(len(gv))
    w = np.atleast_1d(np.asarray(w, complex))
    spacing = float(np.max(nodes.weights))
    d = np.min(np.abs(w[:, None] - nodes.z[None, :]), axis=1)
    if np.any(d < min_spacings * spacing):
        raise TooCloseToCurve(f"point within {min_spacings} node spacings of the curve")
    return _trapezoid(gv, nodes, w)


def _near_transform(gv: np.ndarray, curve: SmoothCurve, w: np.ndarray, factor: int) -> np.ndarray:
    m = len(gv) * factor
    fine = curve.discretize(m)
    gf = _resample_complex(gv, m)
    out = np.empty(len(w), complex)
    for chunk in np.array_split(np.arange(len(w)), max(1, len(w) // 32)):
        out[chunk] = _trapezoid(gf, fine, w[chunk])
    return out


@dataclass
class PlemeljReport:
    residual: float                  # max |C- - C+ - g|
    interior: np.ndarray = field(repr=False)
    exterior: np.ndarray = field(repr=False)
    g: np.ndarray = field(repr=False)


def one_sided_limits(g, curve: SmoothCurve, n: int | None = None, offset_fraction: float = 1 / 16,
                     upsample: int = 64):
    """Interior and exterior limits of C[g] at the nodes.

    Values at normal offsets 4h, 2h, h (h = offset_fraction * node spacing)
    are extrapolated quadratically to the curve; the transform itself is
    evaluated on a spectrally refined copy of the data.
    """
    gv = _values(g, curve, n)
    nodes = curve.discretize(len(gv))
    h = offset_fraction * nodes.weights
    limits = []
    for side in (-1.0, 1.0):
        vals = [_near_transform(gv, curve, nodes.z + side * k * h * nodes.normal, upsample)
                for k in (4, 2, 1)]
        limits.append((8 * vals[2] - 6 * vals[1] + vals[0]) / 3)
    return limits[0], limits[1], gv


def plemelj_jump_check(g, curve: SmoothCurve, nodes: int = 256, **kw) -> PlemeljReport:
    inner, outer, gv = one_sided_limits(g, curve, nodes, **kw)
    res = float(np.max(np.abs(inner - outer - gv))) if len(gv) else 0.0
    return PlemeljReport(res, inner, outer, gv)


@dataclass
class ExtensionReport:
    extendable: bool
    probes: dict                     # probe label -> normalised integral
    witness_points: np.ndarray = field(repr=False)
    witness_values: np.ndarray = field(repr=False)   # C[g] inside: the extension G

    @property
    def worst(self) -> float:
        return max(abs(v) for v in self.probes.values())


def analytic_extension_test(g, curve: SmoothCurve, M: int = 8, n: int | None = 256,
                            exterior_points=None, tol: float = 1e-8) -> ExtensionReport:
    """Check that g is the trace of a function analytic inside the curve.

    Probes are int g z**k dz (k < M) and int g / (z - w) dz for exterior w,
    each divided by int |g| |dz| times the size of the probe on the curve.
    """
    gv = _values(g, curve, n)
    nodes = curve.discretize(len(gv))
    dt = 2 * np.pi / nodes.n
    c = curve.center
    rmax = float(np.max(np.abs(nodes.z - c)))
    scale = float(np.sum(np.abs(gv) * nodes.speed) * dt)
    if exterior_points is None:
        ang = 2 * np.pi * np.arange(8) / 8
        exterior_points = c + 1.5 * rmax * np.exp(1j * ang)
    probes = {}
    if scale == 0:
        probes = {"zero": 0.0}
    else:
        zc = nodes.z - c
        for k in range(M):
            val = np.sum(gv * zc**k * nodes.dz) * dt
            probes[f"z^{k}"] = abs(val) / (scale * max(1.0, rmax**k))
        for w in np.atleast_1d(np.asarray(exterior_points, complex)):
            d = nodes.z - w
            val = np.sum(gv / d * nodes.dz) * dt
            probes[f"1/(z-({w.real:.3g}{w.imag:+.3g}j))"] = abs(val) / (scale / np.min(np.abs(d)))
    ok = all(v < tol for v in probes.values())
    inside = c + 0.5 * (nodes.z[:: max(1, nodes.n // 16)] - c)
    witness = cauchy_transform(gv, curve, inside, min_spacings=0.0)
    return ExtensionReport(ok, probes, inside, witness)
