"""Coated-disk conductivity: the neutrality relation and the mode-1 series solution."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core_model import CoatedDisks, ConductorPhase, ValidationError


class NonPositiveSolution(ArithmeticError):
    """No positive matrix conductivity makes the inclusion neutral."""


class SingularSystem(ArithmeticError):
    pass


@dataclass(frozen=True)
class ConductivityConfig:
    geometry: CoatedDisks
    core: ConductorPhase
    shell: ConductorPhase
    matrix: ConductorPhase
    applied_field: tuple[float, float] = (1.0, 0.0)

    def __post_init__(self):
        a = np.asarray(self.applied_field, float)
        norm = np.hypot(*a)
        if not np.isclose(norm, 1.0, rtol=1e-12, atol=0):
            raise ValidationError("applied_field must be a unit vector")

    @property
    def sigmas(self) -> tuple[float, float, float]:
        return self.core.sigma, self.shell.sigma, self.matrix.sigma

    def with_matrix(self, sigma_m: float) -> "ConductivityConfig":
        return ConductivityConfig(self.geometry, self.core, self.shell,
                                  ConductorPhase(sigma_m), self.applied_field)


def neutrality_residual(config: ConductivityConfig) -> float:
    sc, ss, sm = config.sigmas
    r1, r2 = config.geometry.r1, config.geometry.r2
    return r2**2 * (ss + sc) * (sm - ss) - r1**2 * (ss - sc) * (sm + ss)


def residual_scale(config: ConductivityConfig) -> float:
    return config.geometry.r2**2 * config.shell.sigma * max(config.sigmas)


def is_neutral(config: ConductivityConfig, tol: float = 1e-12) -> bool:
    return abs(neutrality_residual(config)) <= tol * residual_scale(config)


def solve_for_sigma_m(geometry: CoatedDisks, core: ConductorPhase,
                      shell: ConductorPhase) -> float:
    """The matrix conductivity that zeroes the neutrality residual."""
    sc, ss = core.sigma, shell.sigma
    r1s, r2s = geometry.r1**2, geometry.r2**2
    # residual = sm * (r2s (ss+sc) - r1s (ss-sc)) - ss * (r2s (ss+sc) + r1s (ss-sc))
    denom = r2s * (ss + sc) - r1s * (ss - sc)
    if denom == 0:
        raise NonPositiveSolution("neutrality relation is independent of sigma_m")
    sm = ss * (r2s * (ss + sc) + r1s * (ss - sc)) / denom
    if not sm > 0:
        raise NonPositiveSolution(f"neutral sigma_m = {sm} is not positive")
    return sm


def coated_disk_residual(config: ConductivityConfig) -> float:
    """Relation that vanishes exactly when the exterior dipole does.

    Same shape as ``neutrality_residual`` with (sigma_c - sigma_s) in the
    second product; its sign equals the sign of the exterior dipole.
    """
    sc, ss, sm = config.sigmas
    r1, r2 = config.geometry.r1, config.geometry.r2
    return r2**2 * (ss + sc) * (sm - ss) - r1**2 * (sc - ss) * (sm + ss)


def coated_disk_sigma_m(geometry: CoatedDisks, core: ConductorPhase,
                        shell: ConductorPhase) -> float:
    """Matrix conductivity with zero exterior dipole (the coated-disk effective value)."""
    sc, ss = core.sigma, shell.sigma
    rho = (geometry.r1 / geometry.r2) ** 2
    return ss * ((sc + ss) + rho * (sc - ss)) / ((sc + ss) - rho * (sc - ss))


@dataclass(frozen=True)
class HarmonicSeriesSolution:
    """u = A r cos(t - t0) in the core, (A r + B/r) cos(t - t0) in shell and matrix.

    ``t0`` is the direction of the applied field; the matrix A-coefficient is 1.
    """
    config: ConductivityConfig
    core_a: float
    shell_a: float
    shell_b: float
    exterior_dipole: float

    def potential(self, x, y) -> np.ndarray:
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        cx, cy = self.config.geometry.center
        ax, ay = self.config.applied_field
        dx, dy = x - cx, y - cy
        r = np.hypot(dx, dy)
        proj = (ax * dx + ay * dy)        # r cos(t - t0)
        r1, r2 = self.config.geometry.r1, self.config.geometry.r2
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = np.where(r > 0, proj / r**2, 0.0)   # cos(t - t0) / r
        return np.where(r < r1, self.core_a * proj,
                        np.where(r < r2, self.shell_a * proj + self.shell_b * inv,
                                 proj + self.exterior_dipole * inv))

    def radial_profile(self, r):
        """(u, sigma du/dr) of the cos(t - t0) mode at radius r."""
        r = np.asarray(r, float)
        r1, r2 = self.config.geometry.r1, self.config.geometry.r2
        sc, ss, sm = self.config.sigmas
        u = np.where(r < r1, self.core_a * r,
                     np.where(r < r2, self.shell_a * r + self.shell_b / r,
                              r + self.exterior_dipole / r))
        flux = np.where(r < r1, sc * self.core_a,
                        np.where(r < r2, ss * (self.shell_a - self.shell_b / r**2),
                                 sm * (1 - self.exterior_dipole / r**2)))
        return u, flux


def solve_disk_conductivity(config: ConductivityConfig) -> HarmonicSeriesSolution:
    sc, ss, sm = config.sigmas
    r1, r2 = config.geometry.r1, config.geometry.r2
    # unknowns: core_a, shell_a, shell_b, exterior_dipole
    M = np.array([
        [r1, -r1, -1 / r1, 0.0],
        [sc, -ss, ss / r1**2, 0.0],
        [0.0, r2, 1 / r2, -1 / r2],
        [0.0, ss, -ss / r2**2, sm / r2**2],
    ])
    rhs = np.array([0.0, 0.0, r2, sm])
    if np.linalg.cond(M) > 1e14:
        raise SingularSystem("conductivity transmission matrix is singular")
    a_c, a_s, b_s, b_m = np.linalg.solve(M, rhs)
    return HarmonicSeriesSolution(config, a_c, a_s, b_s, b_m)
