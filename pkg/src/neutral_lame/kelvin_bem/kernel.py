"""Kelvin fundamental solution of the plane Lame operator and its identities."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import roots_legendre

from ..core_model import ElasticPhase, kelvin_params


class EvaluationAtOrigin(ValueError):
    pass


@dataclass(frozen=True)
class KelvinKernel:
    phase: ElasticPhase

    @property
    def alpha1(self) -> float:
        return kelvin_params(self.phase)[0]

    @property
    def alpha2(self) -> float:
        return kelvin_params(self.phase)[1]

    @property
    def mu(self) -> float:
        return self.phase.mu

    @property
    def kappa(self) -> float:
        return self.phase.kappa


def kelvin_matrix(kernel: KelvinKernel, x) -> np.ndarray:
    """Gamma(x) for points of shape (..., 2); returns shape (..., 2, 2)."""
    x = np.asarray(x, float)
    r2 = np.sum(x * x, axis=-1)
    if np.any(r2 == 0):
        raise EvaluationAtOrigin("Kelvin matrix is singular at the origin")
    a1, a2 = kernel.alpha1, kernel.alpha2
    logr = 0.5 * np.log(r2)
    # outer product first so that the result is symmetric to the last bit
    out = -(a2 / (2 * np.pi)) * (x[..., :, None] * x[..., None, :]) / r2[..., None, None]
    out[..., 0, 0] += a1 / (2 * np.pi) * logr
    out[..., 1, 1] += a1 / (2 * np.pi) * logr
    return out


def traction_kernel(kernel: KelvinKernel, r, n) -> np.ndarray:
    """Traction at x with normal n(x) of the field Gamma(x - y) e_j, r = x - y.

    Returns (..., 2, 2) with [i, j] the i-th traction component for force e_j.
    """
    r = np.asarray(r, float)
    n = np.asarray(n, float)
    mu, ka = kernel.mu, kernel.kappa
    r2 = np.sum(r * r, axis=-1)[..., None, None]
    rn = np.sum(r * n, axis=-1)[..., None, None]
    eye = np.eye(2)
    ri = r[..., :, None]
    rj = r[..., None, :]
    ni = n[..., :, None]
    nj = n[..., None, :]
    return (mu * (eye * rn + nj * ri - ni * rj) + 2 * ka * rn * ri * rj / r2) / \
        (2 * np.pi * (mu + ka) * r2)


def div_y_kelvin_fd(kernel: KelvinKernel, x, y, step: float = 1e-5) -> np.ndarray:
    """sum_i d/dy_i Gamma_ij(x - y) by central differences; returns a 2-vector."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    out = np.zeros(2)
    for i in range(2):
        e = np.zeros(2)
        e[i] = step
        gp = kelvin_matrix(kernel, x - (y + e))
        gm = kelvin_matrix(kernel, x - (y - e))
        out += (gp[i, :] - gm[i, :]) / (2 * step)
    return out


def div_y_kelvin_exact(kernel: KelvinKernel, x, y) -> np.ndarray:
    """-(1 / (2 pi (mu + kappa))) grad_x log|x - y|."""
    d = np.asarray(x, float) - np.asarray(y, float)
    return -d / (2 * np.pi * (kernel.mu + kernel.kappa) * np.dot(d, d))


def check_divergence_identity(kernel: KelvinKernel, x, y, step: float = 1e-5) -> float:
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    if np.allclose(x, y):
        raise EvaluationAtOrigin("x and y must differ")
    fd = div_y_kelvin_fd(kernel, x, y, step)
    return float(np.max(np.abs(fd - div_y_kelvin_exact(kernel, x, y))))


def disk_divergence_integral(kernel: KelvinKernel, x, center=(0.0, 0.0), radius=1.0,
                             n_angle: int = 100, n_radial: int = 100) -> np.ndarray:
    """F(x) = int_disk div_y Gamma(x - y) dy by a polar tensor grid centred at x.

    In polar coordinates about x the 1/|x - y| singularity cancels against
    the Jacobian, leaving a smooth integrand; n_angle * n_radial cells.
    """
    x = np.asarray(x, float)
    c = np.asarray(center, float)
    d = x - c
    dist = np.hypot(*d)
    pref = -1.0 / (2 * np.pi * (kernel.mu + kernel.kappa))
    _, gl_w = roots_legendre(n_radial)
    if dist < radius:
        th = 2 * np.pi * np.arange(n_angle) / n_angle
        wth = np.full(n_angle, 2 * np.pi / n_angle)
        # ray x + rho e(th) leaves the disk at rho_max(th)
        e = np.stack([np.cos(th), np.sin(th)], axis=-1)
        b = e @ d
        rho_in = np.zeros(n_angle)
        rho_out = -b + np.sqrt(b * b - (dist**2 - radius**2))
    else:
        half = np.arcsin(min(1.0, radius / dist))
        th0 = np.arctan2(-d[1], -d[0])
        # Gauss-Legendre in s with th = th0 + half sin(pi s / 2) removes the
        # square-root endpoint behaviour at the tangent rays
        s, ws = roots_legendre(n_angle)
        th = th0 + half * np.sin(0.5 * np.pi * s)
        wth = ws * half * 0.5 * np.pi * np.cos(0.5 * np.pi * s)
        e = np.stack([np.cos(th), np.sin(th)], axis=-1)
        b = e @ d
        disc = np.sqrt(np.maximum(b * b - (dist**2 - radius**2), 0.0))
        rho_in = -b - disc
        rho_out = -b + disc
    # (x - y) / |x - y|^2 dy = -e / rho * rho d rho d th; the radial factor is 1
    half_len = 0.5 * (rho_out - rho_in)
    radial = half_len[:, None] * gl_w[None, :]          # (n_angle, n_radial) cell weights
    total = -(e * (radial.sum(axis=1) * wth)[:, None]).sum(axis=0)
    return pref * total


def check_divdiv_identity(kernel: KelvinKernel, points, center=(0.0, 0.0), radius=1.0,
                          step: float = 1e-5, n_angle: int = 100, n_radial: int = 100):
    """Finite-difference divergence of the disk integral at each point.

    Returns (values, expected) where expected is -1/(mu + kappa) inside, 0 outside.
    """
    pts = np.atleast_2d(np.asarray(points, float))
    vals, expected = [], []
    c = np.asarray(center, float)
    for x in pts:
        div = 0.0
        for i in range(2):
            e = np.zeros(2)
            e[i] = step
            fp = disk_divergence_integral(kernel, x + e, center, radius, n_angle, n_radial)
            fm = disk_divergence_integral(kernel, x - e, center, radius, n_angle, n_radial)
            div += (fp[i] - fm[i]) / (2 * step)
        vals.append(div)
        inside = np.hypot(*(x - c)) < radius
        expected.append(-1.0 / (kernel.mu + kernel.kappa) if inside else 0.0)
    return np.array(vals), np.array(expected)
