"""Bracketed search for bulk-neutral material parameters."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from ..core_model import (CoatedDisks, ElasticPhase, HypothesisReport, NeutralityConstants,
                          Phases, UniformLoad, check_hypotheses, neutrality_constants,
                          shell_dilatation)
from ..elasticity_disks import (CoreLinearity, FarFieldReport, LaurentPotentials, ShellReport,
                                exterior_bulk_coefficient, far_field,
                                solve_coated_disk_elasticity, verify_core_linearity,
                                verify_shell_properties)

PARAMETERS = ("mu_c", "kappa_c", "mu_s", "kappa_s", "mu_m", "kappa_m", "r1", "r2")


class NoSignChange(ArithmeticError):
    def __init__(self, message: str, scan: np.ndarray):
        super().__init__(message)
        self.scan = scan


class DegenerateObjective(ArithmeticError):
    pass


class NonPhysicalRoot(ArithmeticError):
    pass


@dataclass(frozen=True)
class RootFindTask:
    free_parameter: str = "kappa_m"
    bracket: tuple[float, float] | None = None
    tol: float = 1e-12
    n_scan: int = 64
    objective: str = "exterior_bulk_coefficient"

    def __post_init__(self):
        if self.free_parameter not in PARAMETERS:
            raise ValueError(f"unknown parameter {self.free_parameter!r}; choose from {PARAMETERS}")
        if self.n_scan < 2:
            raise ValueError("scan needs at least two samples")
        if self.bracket is not None and not (0 < self.bracket[0] < self.bracket[1]):
            raise ValueError("bracket must be an increasing pair of positive numbers")


def with_parameter(geometry: CoatedDisks, phases: Phases, name: str, value: float):
    """Copy of (geometry, phases) with one named parameter replaced."""
    if name in ("r1", "r2"):
        r1 = value if name == "r1" else geometry.r1
        r2 = value if name == "r2" else geometry.r2
        return CoatedDisks(r1, r2, geometry.center), phases
    attr, region = name.split("_")
    region = {"c": "core", "s": "shell", "m": "matrix"}[region]
    old = getattr(phases, region)
    mu = value if attr == "mu" else old.mu
    kappa = value if attr == "kappa" else old.kappa
    return geometry, phases.replace(**{region: ElasticPhase(mu, kappa)})


def get_parameter(geometry: CoatedDisks, phases: Phases, name: str) -> float:
    if name in ("r1", "r2"):
        return getattr(geometry, name)
    attr, region = name.split("_")
    region = {"c": "core", "s": "shell", "m": "matrix"}[region]
    ph = getattr(phases, region)
    return ph.mu if attr == "mu" else ph.kappa


def default_bracket(geometry: CoatedDisks, phases: Phases, name: str) -> tuple[float, float]:
    if name == "r1":
        return (1e-3 * geometry.r2, (1 - 1e-6) * geometry.r2)
    if name == "r2":
        return ((1 + 1e-6) * geometry.r1, 1e3 * geometry.r1)
    ref = max(max(p.mu, p.kappa) for p in phases)
    return (1e-3 * ref, 1e3 * ref)


def bulk_objective(geometry: CoatedDisks, phases: Phases, name: str, order: int = 8):
    def f(x: float) -> float:
        g, ph = with_parameter(geometry, phases, name, x)
        pot = solve_coated_disk_elasticity(g, ph, UniformLoad.bulk(), order)
        return exterior_bulk_coefficient(pot)
    return f


def scan_grid(lo: float, hi: float, n: int, name: str) -> np.ndarray:
    if name in ("r1", "r2"):
        return np.linspace(lo, hi, n)
    return np.geomspace(lo, hi, n)


@dataclass
class NeutralCertificate:
    far: FarFieldReport
    shell: ShellReport
    core: CoreLinearity
    constants: NeutralityConstants
    hypotheses: HypothesisReport
    matrix_potential_residual: float   # max |phi_m - kappa_m z|, |psi_m| over coefficients
    shell_dilatation_residual: float   # max |div u - shell_dilatation| in the shell

    @property
    def gap(self) -> float:
        return self.far.gap


@dataclass
class NeutralRoot:
    parameter: str
    value: float
    objective_value: float
    geometry: CoatedDisks
    phases: Phases
    potentials: LaurentPotentials
    certificate: NeutralCertificate
    scan: np.ndarray = field(repr=False)          # (n_scan, 2): parameter, objective
    brackets: list = field(default_factory=list)  # all sign-change intervals found


def certify(geometry: CoatedDisks, phases: Phases, order: int = 8, n_points: int = 200,
            seed: int = 0) -> tuple[LaurentPotentials, NeutralCertificate]:
    pot = solve_coated_disk_elasticity(geometry, phases, UniformLoad.bulk(), order)
    consts = neutrality_constants(*phases)
    shell = verify_shell_properties(pot, consts, n_points=n_points, seed=seed)
    core = verify_core_linearity(pot, n_points=n_points, seed=seed + 1)
    km = phases.matrix.kappa
    off = pot.offset
    phi_m = pot.phi_coeffs[2].copy()
    phi_m[off + 1] -= km
    phi_m[off] = 0.0          # gauge constant is not part of the statement
    mat_res = float(max(np.abs(phi_m).max(), np.abs(pot.psi_coeffs[2]).max()))
    dil = float(np.max(np.abs(shell.div_values - shell_dilatation(phases.shell, phases.matrix))))
    cert = NeutralCertificate(far_field(pot), shell, core, consts,
                              check_hypotheses(*phases), mat_res, dil)
    return pot, cert


def find_neutral_bulk(geometry: CoatedDisks, phases: Phases,
                      task: RootFindTask | None = None, order: int = 8,
                      seed: int = 0) -> NeutralRoot:
    """Root of the exterior bulk coefficient in one free parameter.

    A geometric (or, for radii, linear) pre-scan locates sign changes; the
    first one is refined by Brent's method.
    """
    task = task or RootFindTask()
    name = task.free_parameter
    lo, hi = task.bracket or default_bracket(geometry, phases, name)
    f = bulk_objective(geometry, phases, name, order)
    xs = scan_grid(lo, hi, task.n_scan, name)
    vals = np.array([f(x) for x in xs])
    scan = np.column_stack([xs, vals])
    # below the root tolerance everywhere: sign changes would be rounding noise
    if np.all(np.abs(vals) < task.tol):
        raise DegenerateObjective("objective vanishes identically on the scan")
    exact = np.flatnonzero(vals == 0)
    brackets = [(xs[i], xs[i + 1]) for i in range(len(xs) - 1)
                if np.sign(vals[i]) * np.sign(vals[i + 1]) < 0]
    if len(exact):
        root = float(xs[exact[0]])
    elif brackets:
        a, b = brackets[0]
        root = brentq(f, a, b, xtol=1e-15 * max(1.0, abs(a)), rtol=4 * np.finfo(float).eps,
                      maxiter=500)
    else:
        raise NoSignChange(f"objective keeps one sign on [{lo}, {hi}]", scan)
    fval = f(root)
    if abs(fval) >= task.tol:
        raise ArithmeticError(f"root refinement stalled at |objective| = {abs(fval):.3e}")
    if root <= 0:
        raise NonPhysicalRoot(f"root {root} is not a positive modulus or radius")
    try:
        g, ph = with_parameter(geometry, phases, name, root)
    except ValueError as exc:
        raise NonPhysicalRoot(str(exc)) from exc
    pot, cert = certify(g, ph, order, seed=seed)
    return NeutralRoot(name, float(root), float(fval), g, ph, pot, cert, scan, brackets)


def thin_shell_sequence(geometry: CoatedDisks, phases: Phases,
                        fractions=(0.9, 0.99, 0.999)) -> np.ndarray:
    """Neutral kappa_m as r1 -> r2; the limit is the core bulk modulus."""
    out = []
    for s in fractions:
        g = CoatedDisks(s * geometry.r2, geometry.r2, geometry.center)
        out.append(find_neutral_bulk(g, phases).value)
    return np.array(out)
