"""Grid search for coated disks that leave a shear field undisturbed."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from ..core_model import CoatedDisks, Phases, UniformLoad, ValidationError, phases_from_moduli
from ..elasticity_disks import solve_coated_disk_elasticity
from .roots import PARAMETERS, with_parameter

AXIS_NAMES = PARAMETERS + ("rho",)


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    count: int
    log: bool = False

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ValidationError(f"unknown axis {self.name!r}")
        if self.count < 2:
            raise ValidationError(f"axis {self.name}: count must be >= 2")
        if not (0 < self.lo < self.hi):
            raise ValidationError(f"axis {self.name}: need 0 < lo < hi")
        if self.name == "rho" and self.hi >= 1:
            raise ValidationError("axis rho must stay below 1")

    def values(self) -> np.ndarray:
        f = np.geomspace if self.log else np.linspace
        return f(self.lo, self.hi, self.count)


def _template_phases() -> Phases:
    return phases_from_moduli([2.0, 1.0, 1.0], [1.0, 2.0, 5.0 / 3.0])


@dataclass(frozen=True)
class SweepGrid:
    axes: tuple[Axis, ...] = (Axis("rho", 0.1, 0.9, 20),
                              Axis("mu_c", 0.1, 10.0, 20, log=True),
                              Axis("mu_m", 0.1, 10.0, 20, log=True))
    geometry: CoatedDisks = CoatedDisks(0.5, 1.0)
    phases: Phases = field(default_factory=_template_phases)
    seed: int = 0

    def __post_init__(self):
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise ValidationError("duplicate sweep axes")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.axes)

    def points(self):
        """Grid points in lexicographic axis order."""
        return itertools.product(*(a.values() for a in self.axes))

    def scenario(self, point) -> tuple[CoatedDisks, Phases]:
        g, ph = self.geometry, self.phases
        for name, v in zip(self.names, point):
            if name == "rho":
                g = CoatedDisks(v * g.r2, g.r2, g.center)
            else:
                g, ph = with_parameter(g, ph, name, float(v))
        return g, ph


def shear_multipoles(geometry: CoatedDisks, phases: Phases,
                     load: UniformLoad | None = None) -> tuple[complex, complex]:
    """(c1, c3): dominant r**-1 and r**-3 coefficients of u - h for a trace-free load."""
    load = load or UniformLoad.shear()
    pot = solve_coated_disk_elasticity(geometry, phases, load, order=3)
    mu = phases.matrix.mu
    k = 1 + 2 * mu / phases.matrix.kappa
    a1, b3 = pot.a("matrix", -1), pot.b("matrix", -3)
    # order 1 lives in modes -1 (weight k) and 3 (weight 1); k > 1 so mode -1 dominates.
    # order 3 only reaches mode 3 through psi
    c1 = k * a1 / (2 * mu)
    c3 = -np.conj(b3) / (2 * mu)
    return complex(c1), complex(c3)


def _degenerate(ph: Phases) -> bool:
    return ph.core == ph.shell


@dataclass
class ShearSweepReport:
    names: tuple[str, ...]
    points: np.ndarray          # (P, n_axes)
    c1: np.ndarray              # complex, nan where excluded
    c3: np.ndarray
    excluded: np.ndarray        # bool
    min_max: float
    argmin: tuple

    def table(self) -> tuple[list[str], list[list[float]]]:
        header = list(self.names) + ["abs_c1", "abs_c3", "max_abs"]
        rows = []
        for p, a, b in zip(self.points, np.abs(self.c1), np.abs(self.c3)):
            rows.append([float(v) for v in p] + [float(a), float(b), float(max(a, b))])
        return header, rows


def shear_infeasibility_sweep(grid: SweepGrid | None = None,
                              floor: float | None = None) -> ShearSweepReport:
    """max(|c1|, |c3|) over the grid; optionally asserts its minimum exceeds ``floor``."""
    grid = grid or SweepGrid()
    pts, c1s, c3s, excl = [], [], [], []
    for p in grid.points():
        g, ph = grid.scenario(p)
        pts.append(p)
        if _degenerate(ph):
            excl.append(True)
            c1s.append(np.nan)
            c3s.append(np.nan)
            continue
        c1, c3 = shear_multipoles(g, ph)
        excl.append(False)
        c1s.append(c1)
        c3s.append(c3)
    c1a = np.array(c1s, complex)
    c3a = np.array(c3s, complex)
    excluded = np.array(excl)
    stat = np.where(excluded, np.inf, np.maximum(np.abs(c1a), np.abs(c3a)))
    i = int(np.argmin(stat))
    report = ShearSweepReport(grid.names, np.array(pts, float), c1a, c3a, excluded,
                              float(stat[i]), tuple(float(v) for v in pts[i]))
    if floor is not None and not report.min_max > floor:
        raise AssertionError(f"min-max statistic {report.min_max:.3e} does not exceed {floor:.3e}")
    return report


def c1_projection(geometry: CoatedDisks, phases: Phases) -> float:
    """Real part of the matrix 1/z coefficient divided by the load's q; its zero set is c1 = 0."""
    load = UniformLoad.shear()
    pot = solve_coated_disk_elasticity(geometry, phases, load, order=3)
    _, q = load.complex_coefficients()
    return float((pot.a("matrix", -1) / q).real)


@dataclass
class RootCurve:
    free: str
    slice_names: tuple[str, ...]
    slices: np.ndarray          # (S, n_slice_axes)
    roots: np.ndarray           # nan where the slice has no sign change
    abs_c1: np.ndarray
    abs_c3: np.ndarray

    @property
    def found(self) -> np.ndarray:
        return np.isfinite(self.roots)


def c1_zero_curve(grid: SweepGrid | None = None, free: str | None = None,
                  bracket: tuple[float, float] = (1e-3, 1e3), n_scan: int = 64) -> RootCurve:
    """For each slice of the remaining axes, the free parameter value with c1 = 0."""
    grid = grid or SweepGrid()
    free = free or grid.axes[-1].name
    slice_axes = [a for a in grid.axes if a.name != free]
    names = tuple(a.name for a in slice_axes)
    sub = SweepGrid(tuple(slice_axes), grid.geometry, grid.phases, grid.seed)
    xs = np.geomspace(*bracket, n_scan)
    slices, roots, a1, a3 = [], [], [], []
    for p in sub.points():
        g0, ph0 = sub.scenario(p)

        def f(x):
            g, ph = with_parameter(g0, ph0, free, float(x))
            return c1_projection(g, ph)

        vals = np.array([f(x) for x in xs])
        idx = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)
        slices.append(p)
        if len(idx) == 0:
            roots.append(np.nan)
            a1.append(np.nan)
            a3.append(np.nan)
            continue
        r = brentq(f, xs[idx[0]], xs[idx[0] + 1], xtol=1e-14, rtol=4 * np.finfo(float).eps)
        g, ph = with_parameter(g0, ph0, free, r)
        c1, c3 = shear_multipoles(g, ph)
        roots.append(r)
        a1.append(abs(c1))
        a3.append(abs(c3))
    return RootCurve(free, names, np.array(slices, float), np.array(roots),
                     np.array(a1), np.array(a3))
