"""Gap floors of bulk-neutral parameters under shape perturbations."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from ..core_model import CoatedDisks, Phases, SmoothCurve, UniformLoad, ValidationError
from ..kelvin_bem.solver import TransmissionAssembler, TransmissionScenario, neutrality_gap, \
    solve_transmission
from .roots import RootFindTask, find_neutral_bulk, get_parameter, with_parameter

FAMILIES = ("outer", "inner", "eccentric")


@dataclass(frozen=True)
class ShapeFamily:
    """Perturbations of a coated disk: r(t) = r (1 + eps cos m t) on one
    boundary, or a core translated by eps * r2 along x."""
    kind: str
    m: int = 3

    def __post_init__(self):
        if self.kind not in FAMILIES:
            raise ValidationError(f"shape family must be one of {FAMILIES}")
        if self.kind != "eccentric" and self.m < 2:
            raise ValidationError("perturbation mode must be at least 2")

    @property
    def label(self) -> str:
        return "eccentric_core" if self.kind == "eccentric" else f"{self.kind}_m{self.m}"

    def curves(self, geometry: CoatedDisks, eps: float) -> tuple[SmoothCurve, SmoothCurve]:
        c = geometry.center
        if self.kind == "outer":
            return (SmoothCurve.circle(geometry.r1, c),
                    SmoothCurve.polar_perturbation(geometry.r2, eps, self.m, c))
        if self.kind == "inner":
            return (SmoothCurve.polar_perturbation(geometry.r1, eps, self.m, c),
                    SmoothCurve.circle(geometry.r2, c))
        shifted = (c[0] + eps * geometry.r2, c[1])
        return SmoothCurve.circle(geometry.r1, shifted), SmoothCurve.circle(geometry.r2, c)


@dataclass
class FloorResult:
    family: str
    eps: float
    parameter: float        # minimiser of the gap
    floor: float            # gap at the minimiser
    relative_floor: float
    evaluations: int


@dataclass
class RigidityReport:
    free_parameter: str
    neutral_value: float
    results: list = field(default_factory=list)

    def floors(self, family: str) -> dict:
        return {r.eps: r.floor for r in self.results if r.family == family}

    def check(self, family: str, factor: float = 10.0) -> bool:
        """floor increasing in eps and every positive-eps floor above factor * floor(0)."""
        fl = self.floors(family)
        eps = sorted(fl)
        if not eps or eps[0] != 0:
            return False
        base = fl[0]
        incr = all(fl[a] < fl[b] for a, b in zip(eps, eps[1:]))
        return incr and all(fl[e] > factor * base for e in eps[1:])


def gap_for(assembler: TransmissionAssembler, scenario: TransmissionScenario, radii):
    sol = solve_transmission(scenario, assembler)
    return neutrality_gap(sol, radii=radii)


def rigidity_experiment(geometry: CoatedDisks, phases: Phases,
                        families=(ShapeFamily("outer", 2), ShapeFamily("outer", 3),
                                  ShapeFamily("eccentric")),
                        eps_values=(0.0, 0.01, 0.05), free_parameter: str = "kappa_m",
                        nodes: int = 128, search_factor: float = 2.0,
                        xatol: float = 1e-10) -> RigidityReport:
    """For each family and eps, minimise the BEM gap over one material parameter.

    At eps = 0 the gap is taken at the series neutral root, which is the
    exact minimiser for concentric disks.
    """
    root = find_neutral_bulk(geometry, phases, RootFindTask(free_parameter))
    neutral_phases = root.phases
    x0 = root.value
    radii = (2 * geometry.r2, 4 * geometry.r2)
    load = UniformLoad.bulk()
    report = RigidityReport(free_parameter, x0)
    for fam in families:
        for eps in eps_values:
            inner, outer = fam.curves(geometry, eps)
            asm = TransmissionAssembler(inner, outer, nodes)

            def run(x):
                _, ph = with_parameter(geometry, neutral_phases, free_parameter, float(x))
                return gap_for(asm, TransmissionScenario(inner, outer, ph, load, nodes), radii)

            if eps == 0:
                ff = run(x0)
                report.results.append(FloorResult(fam.label, 0.0, x0, ff.gap, ff.relative_gap, 1))
                continue
            res = minimize_scalar(lambda x: run(x).gap ** 2, method="bounded",
                                  bounds=(x0 / search_factor, x0 * search_factor),
                                  options={"xatol": xatol * x0})
            ff = run(res.x)
            report.results.append(FloorResult(fam.label, float(eps), float(res.x), ff.gap,
                                              ff.relative_gap, int(res.nfev) + 1))
    return report


def default_template() -> tuple[CoatedDisks, Phases]:
    from ..core_model import phases_from_moduli
    return CoatedDisks(1.0, 2.0), phases_from_moduli([2.0, 1.0, 1.0], [1.0, 2.0, 1.0])


__all__ = ["FAMILIES", "FloorResult", "RigidityReport", "ShapeFamily", "default_template",
           "get_parameter", "rigidity_experiment"]
