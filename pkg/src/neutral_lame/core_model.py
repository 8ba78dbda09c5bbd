"""Material, geometry and load types shared by every solver.

Moduli are plane (2D) quantities: ``mu`` is the shear modulus and ``kappa``
the bulk modulus, so that the isotropic tensor acts as
``C e = (kappa - mu) tr(e) I + 2 mu e``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


class ValidationError(ValueError):
    """An object was constructed with parameters outside its domain."""


@dataclass(frozen=True)
class ElasticPhase:
    shear_modulus: float
    bulk_modulus: float

    def __post_init__(self):
        if not (self.shear_modulus > 0 and np.isfinite(self.shear_modulus)):
            raise ValidationError(f"shear_modulus must be positive, got {self.shear_modulus!r}")
        if not (self.bulk_modulus > 0 and np.isfinite(self.bulk_modulus)):
            raise ValidationError(f"bulk_modulus must be positive, got {self.bulk_modulus!r}")

    @property
    def mu(self) -> float:
        return self.shear_modulus

    @property
    def kappa(self) -> float:
        return self.bulk_modulus

    def scaled(self, factor: float) -> "ElasticPhase":
        return ElasticPhase(self.mu * factor, self.kappa * factor)


@dataclass(frozen=True)
class ConductorPhase:
    sigma: float

    def __post_init__(self):
        if not (self.sigma > 0 and np.isfinite(self.sigma)):
            raise ValidationError(f"sigma must be positive, got {self.sigma!r}")


@dataclass(frozen=True)
class CoatedDisks:
    r1: float
    r2: float
    center: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if not (0 < self.r1 < self.r2):
            raise ValidationError(f"need 0 < r1 < r2, got r1={self.r1!r}, r2={self.r2!r}")
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))

    @property
    def center_complex(self) -> complex:
        return complex(*self.center)

    def curves(self) -> tuple["SmoothCurve", "SmoothCurve"]:
        """(inner, outer) boundary circles as trigonometric curves."""
        return (SmoothCurve.circle(self.r1, self.center),
                SmoothCurve.circle(self.r2, self.center))


@dataclass(frozen=True)
class CurveNodes:
    """A curve sampled at N equispaced parameter values."""
    t: np.ndarray
    z: np.ndarray        # points, complex
    dz: np.ndarray       # d z / d t
    ddz: np.ndarray      # d^2 z / d t^2

    @property
    def n(self) -> int:
        return len(self.t)

    @property
    def speed(self) -> np.ndarray:
        return np.abs(self.dz)

    @property
    def tangent(self) -> np.ndarray:
        return self.dz / np.abs(self.dz)

    @property
    def normal(self) -> np.ndarray:
        # outward for a counterclockwise curve
        return -1j * self.tangent

    @property
    def curvature(self) -> np.ndarray:
        return np.imag(np.conj(self.dz) * self.ddz) / np.abs(self.dz) ** 3

    @property
    def weights(self) -> np.ndarray:
        """Arclength trapezoidal weights."""
        return (2 * np.pi / self.n) * self.speed

    @property
    def xy(self) -> np.ndarray:
        return np.column_stack([self.z.real, self.z.imag])

    @property
    def normal_xy(self) -> np.ndarray:
        nu = self.normal
        return np.column_stack([nu.real, nu.imag])


@dataclass(frozen=True)
class SmoothCurve:
    """Closed curve z(t) = sum_k c_k exp(i k t), t in [0, 2 pi).

    ``modes`` maps the integer frequency k to the complex coefficient c_k.
    Orientation must be counterclockwise; simplicity is checked by sampling.
    """
    modes: tuple[tuple[int, complex], ...]
    check_nodes: int = field(default=512, compare=False, repr=False)

    def __post_init__(self):
        cleaned = {}
        for k, c in self.modes:
            k = int(k)
            cleaned[k] = cleaned.get(k, 0j) + complex(c)
        modes = tuple(sorted((k, c) for k, c in cleaned.items() if c != 0))
        if not modes:
            raise ValidationError("curve has no nonzero Fourier modes")
        object.__setattr__(self, "modes", modes)
        nodes = self.discretize(self.check_nodes)
        if np.min(nodes.speed) <= 1e-12 * np.max(nodes.speed):
            raise ValidationError("curve parametrization has vanishing speed")
        area = 0.5 * np.sum(np.imag(np.conj(nodes.z) * nodes.dz)) * 2 * np.pi / nodes.n
        if area <= 0:
            raise ValidationError("curve must be oriented counterclockwise")
        if _self_intersects(nodes.z):
            raise ValidationError("curve self-intersects")

    @classmethod
    def circle(cls, radius: float, center=(0.0, 0.0)) -> "SmoothCurve":
        if radius <= 0:
            raise ValidationError("radius must be positive")
        return cls(((0, complex(*center)), (1, complex(radius))))

    @classmethod
    def polar_perturbation(cls, radius: float, eps: float, m: int,
                           center=(0.0, 0.0), phase: float = 0.0) -> "SmoothCurve":
        """r(t) = radius (1 + eps cos(m (t - phase))), exactly representable."""
        half = 0.5 * radius * eps
        return cls(((0, complex(*center)), (1, complex(radius)),
                    (1 + m, half * np.exp(-1j * m * phase)),
                    (1 - m, half * np.exp(1j * m * phase))))

    @property
    def center(self) -> complex:
        return dict(self.modes).get(0, 0j)

    def discretize(self, n: int) -> CurveNodes:
        t = 2 * np.pi * np.arange(n) / n
        z = np.zeros(n, complex)
        dz = np.zeros(n, complex)
        ddz = np.zeros(n, complex)
        for k, c in self.modes:
            e = c * np.exp(1j * k * t)
            z += e
            dz += 1j * k * e
            ddz -= k * k * e
        return CurveNodes(t, z, dz, ddz)

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, float)
        return sum(c * np.exp(1j * k * t) for k, c in self.modes)

    def max_radius(self) -> float:
        nodes = self.discretize(self.check_nodes)
        return float(np.max(np.abs(nodes.z - self.center)))

    def min_radius(self) -> float:
        nodes = self.discretize(self.check_nodes)
        return float(np.min(np.abs(nodes.z - self.center)))

    def contains(self, points) -> np.ndarray:
        """Winding-number test on the sampled polygon."""
        z = self.discretize(self.check_nodes).z
        w = np.atleast_1d(np.asarray(points, complex))
        d = z[None, :] - w[:, None]
        ang = np.angle(np.roll(d, -1, axis=1) / d)
        return np.abs(ang.sum(axis=1)) > np.pi

    def translated(self, shift: complex) -> "SmoothCurve":
        m = dict(self.modes)
        m[0] = m.get(0, 0j) + complex(shift)
        return SmoothCurve(tuple(m.items()))

    def rotated(self, angle: float) -> "SmoothCurve":
        rot = np.exp(1j * angle)
        return SmoothCurve(tuple((k, c * rot) for k, c in self.modes))


def _self_intersects(z: np.ndarray) -> bool:
    a = z
    b = np.roll(z, -1)
    n = len(z)
    d = b - a
    for i in range(n):
        # segments that share an endpoint with segment i are skipped
        j = np.arange(i + 2, n if i > 0 else n - 1)
        if len(j) == 0:
            continue
        p, r = a[i], d[i]
        q, s = a[j], d[j]
        denom = np.imag(np.conj(r) * s)
        qp = q - p
        with np.errstate(divide="ignore", invalid="ignore"):
            tt = np.imag(np.conj(qp) * s) / denom
            uu = np.imag(np.conj(qp) * r) / denom
        hit = (denom != 0) & (tt >= 0) & (tt <= 1) & (uu >= 0) & (uu <= 1)
        if np.any(hit):
            return True
    return False


@dataclass(frozen=True)
class UniformLoad:
    """Linear far field h(x) = A x with A symmetric."""
    matrix_A: tuple[tuple[float, float], tuple[float, float]]

    def __post_init__(self):
        A = np.asarray(self.matrix_A, float)
        if A.shape != (2, 2):
            raise ValidationError("load matrix must be 2x2")
        if abs(A[0, 1] - A[1, 0]) > 1e-12 * max(1.0, np.abs(A).max()):
            raise ValidationError("load matrix must be symmetric")
        object.__setattr__(self, "matrix_A", tuple(tuple(float(v) for v in row) for row in A))

    @classmethod
    def bulk(cls) -> "UniformLoad":
        return cls(((1.0, 0.0), (0.0, 1.0)))

    @classmethod
    def shear(cls) -> "UniformLoad":
        """h(x) = (y, x)."""
        return cls(((0.0, 1.0), (1.0, 0.0)))

    @property
    def A(self) -> np.ndarray:
        return np.array(self.matrix_A)

    @property
    def kind(self) -> str:
        A = self.A
        if np.array_equal(A, np.eye(2)):
            return "bulk"
        if A[0, 0] + A[1, 1] == 0:
            return "shear"
        return "general"

    def complex_coefficients(self) -> tuple[float, complex]:
        """(p, q) with h written as p z + q conj(z)."""
        A = self.A
        p = 0.5 * (A[0, 0] + A[1, 1])
        q = complex(0.5 * (A[0, 0] - A[1, 1]), A[0, 1])
        return p, q

    def __call__(self, z):
        p, q = self.complex_coefficients()
        z = np.asarray(z, complex)
        return p * z + q * np.conj(z)


@dataclass(frozen=True)
class NeutralityConstants:
    alpha: float
    beta: float
    gamma: float
    k_star: float
    kolosov: tuple[float, float, float]   # core, shell, matrix


def kolosov_constant(phase: ElasticPhase) -> float:
    return 1.0 + 2.0 * phase.mu / phase.kappa


def apply_elasticity_tensor(phase: ElasticPhase, strain, tol: float = 1e-12) -> np.ndarray:
    e = np.asarray(strain, float)
    if e.shape != (2, 2):
        raise ValidationError("strain must be a 2x2 matrix")
    if abs(e[0, 1] - e[1, 0]) > tol * max(1.0, np.abs(e).max()):
        raise ValidationError("strain must be symmetric")
    return (phase.kappa - phase.mu) * np.trace(e) * np.eye(2) + 2 * phase.mu * e


def kelvin_params(phase: ElasticPhase) -> tuple[float, float]:
    a = 1.0 / phase.mu
    b = 1.0 / (phase.mu + phase.kappa)
    return 0.5 * (a + b), 0.5 * (a - b)


def neutrality_constants(core: ElasticPhase, shell: ElasticPhase,
                         matrix: ElasticPhase) -> NeutralityConstants:
    """Closed-form constants for a bulk-neutral coated inclusion.

    alpha is the constant value of div u in the shell, beta the constant
    derivative of the shell potential phi, gamma and k_star the combination
    used to show that the core field is linear.
    """
    mus, ks, km = shell.mu, shell.kappa, matrix.kappa
    alpha = 2.0 - 2.0 * (km - ks) / (mus + ks)
    beta = ks * alpha / 2.0
    lhs = km - beta
    rhs = (km - ks) * (2 * ks + mus) / (ks + mus)
    if abs(lhs - rhs) > 1e-12 * max(1.0, abs(km), abs(beta)):
        raise ArithmeticError(f"kappa_m - beta identity violated: {lhs} vs {rhs}")
    gamma = core.mu / (2 * ks + mus)
    kc = kolosov_constant(core)
    k_star = (kc - gamma) / (1 + gamma)
    return NeutralityConstants(alpha, beta, gamma, k_star,
                               (kc, kolosov_constant(shell), kolosov_constant(matrix)))


def shell_dilatation(shell: ElasticPhase, matrix: ElasticPhase) -> float:
    """div u in the shell of a bulk-neutral coated disk under h(x) = x.

    Obtained from the exact annulus solution (tr of the shell strain equals
    2 (kappa_m + mu_s) / (kappa_s + mu_s)). It differs from
    ``neutrality_constants(...).alpha`` in the sign of the correction term;
    the matching slope of the shell potential is kappa_s times half of it.
    """
    return 2.0 + 2.0 * (matrix.kappa - shell.kappa) / (shell.mu + shell.kappa)


@dataclass(frozen=True)
class HypothesisReport:
    shear_moduli_differ: bool
    bulk_moduli_differ: bool
    core_bulk_bounded: bool

    @property
    def all(self) -> bool:
        return self.shear_moduli_differ and self.bulk_moduli_differ and self.core_bulk_bounded


def check_hypotheses(core: ElasticPhase, shell: ElasticPhase,
                     matrix: ElasticPhase) -> HypothesisReport:
    # exact comparisons on the stored doubles, by design
    return HypothesisReport(core.mu != shell.mu,
                            matrix.kappa != shell.kappa,
                            core.kappa < 2 * shell.kappa + shell.mu)


@dataclass(frozen=True)
class Phases:
    core: ElasticPhase
    shell: ElasticPhase
    matrix: ElasticPhase

    def __iter__(self):
        return iter((self.core, self.shell, self.matrix))

    def scaled(self, factor: float) -> "Phases":
        return Phases(*(p.scaled(factor) for p in self))

    def replace(self, **kw) -> "Phases":
        d = {"core": self.core, "shell": self.shell, "matrix": self.matrix}
        d.update(kw)
        return Phases(**d)

    @property
    def homogeneous(self) -> bool:
        return self.core == self.shell == self.matrix


def phases_from_moduli(mu: Sequence[float], kappa: Sequence[float]) -> Phases:
    return Phases(*(ElasticPhase(m, k) for m, k in zip(mu, kappa)))
