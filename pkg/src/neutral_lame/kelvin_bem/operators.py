"""Nystrom discretisation of the elastostatic single layer and its traction.

Self-interaction uses Kress' product rule for the logarithmic part of the
Kelvin matrix. The traction kernel K*(x, y) (normal taken at x) contains a
Cauchy-type antisymmetric part proportional to (tau_x . r) / |r|^2; it is
split as  -d/ds_y log|x - y|  plus a continuous remainder, and the first
piece is integrated by parts onto the spectral derivative of the density,
so every on-curve integral is a log-weighted or smooth one.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.linalg import circulant

from ..core_model import CurveNodes, ElasticPhase
from .kernel import KelvinKernel, traction_kernel


@lru_cache(maxsize=16)
def kress_matrix(n: int) -> np.ndarray:
    """R[a, b] ~ weights for int_0^{2pi} log(4 sin^2((t_a - s)/2)) f(s) ds."""
    if n % 2:
        raise ValueError("Kress quadrature needs an even node count")
    half = n // 2
    t = 2 * np.pi * np.arange(n) / n
    m = np.arange(1, half)
    col = -(4 * np.pi / n) * (np.cos(np.outer(t, m)) / m).sum(axis=1) \
        - (4 * np.pi / n**2) * np.cos(half * t)
    return circulant(col)


@lru_cache(maxsize=16)
def fourier_diff_matrix(n: int) -> np.ndarray:
    """Spectral first-derivative matrix on n equispaced periodic nodes (n even)."""
    t = 2 * np.pi * np.arange(n) / n
    k = np.arange(n)
    col = np.zeros(n)
    col[1:] = 0.5 * (-1.0) ** k[1:] / np.tan(0.5 * t[1:])
    return _toeplitz_diff(col)


def _toeplitz_diff(col: np.ndarray) -> np.ndarray:
    n = len(col)
    idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    return col[idx]


def _phase_consts(phase: ElasticPhase):
    kern = KelvinKernel(phase)
    return kern.alpha1, kern.alpha2, phase.mu, phase.kappa


class SelfOperators:
    """Geometric pieces of the single layer and adjoint traction on one curve."""

    def __init__(self, nodes: CurveNodes):
        n = nodes.n
        self.nodes = nodes
        self.n = n
        t = nodes.t
        z = nodes.z
        w = nodes.weights
        self.w = w
        diff = z[:, None] - z[None, :]
        eye = np.eye(n, dtype=bool)
        r2 = np.abs(diff) ** 2
        r2[eye] = 1.0
        rx, ry = diff.real, diff.imag
        dt = t[:, None] - t[None, :]
        with np.errstate(divide="ignore"):
            smooth = 0.5 * np.log(r2) - 0.5 * np.log(4 * np.sin(0.5 * dt) ** 2)
        smooth[eye] = np.log(nodes.speed)
        self.L = 0.5 * kress_matrix(n) + (2 * np.pi / n) * smooth
        tau = nodes.tangent
        tx, ty = tau.real, tau.imag
        self.dxx = rx * rx / r2
        self.dxy = rx * ry / r2
        self.dyy = ry * ry / r2
        self.dxx[eye] = tx * tx
        self.dxy[eye] = tx * ty
        self.dyy[eye] = ty * ty
        nu = nodes.normal
        nx, ny = nu.real[:, None], nu.imag[:, None]
        P = (rx * nx + ry * ny) / r2
        P[eye] = 0.5 * nodes.curvature
        self.P = P
        self.Qxx = P * self.dxx
        self.Qxy = P * self.dxy
        self.Qyy = P * self.dyy
        E = np.real(np.conj(tau[:, None] - tau[None, :]) * diff) / r2
        E[eye] = 0.0
        self.X = self.L @ fourier_diff_matrix(n) + E * w[None, :]
        self._cache = {}

    def single_layer(self, phase: ElasticPhase) -> np.ndarray:
        key = ("S", phase)
        if key not in self._cache:
            a1, a2, _, _ = _phase_consts(phase)
            speed = self.nodes.speed
            logpart = (a1 / (2 * np.pi)) * self.L * speed[None, :]
            c = -(a2 / (2 * np.pi)) * self.w[None, :]
            self._cache[key] = np.block([[logpart + c * self.dxx, c * self.dxy],
                                         [c * self.dxy, logpart + c * self.dyy]])
        return self._cache[key]

    def adjoint_traction(self, phase: ElasticPhase) -> np.ndarray:
        """Principal-value K*: the traction limits are (+-1/2 I + K*) density."""
        key = ("K", phase)
        if key not in self._cache:
            _, _, mu, ka = _phase_consts(phase)
            pref = 1.0 / (2 * np.pi * (mu + ka))
            w = self.w[None, :]
            kxx = pref * (mu * self.P + 2 * ka * self.Qxx) * w
            kyy = pref * (mu * self.P + 2 * ka * self.Qyy) * w
            kxy_sym = pref * 2 * ka * self.Qxy * w
            anti = pref * mu * self.X
            self._cache[key] = np.block([[kxx, kxy_sym - anti],
                                         [kxy_sym + anti, kyy]])
        return self._cache[key]


def _pairwise(target_xy: np.ndarray, source: CurveNodes):
    return target_xy[:, None, :] - source.xy[None, :, :]


def cross_single_layer(target_xy, source: CurveNodes, phase: ElasticPhase) -> np.ndarray:
    """Plain trapezoidal single-layer matrix from source nodes to distant targets."""
    from .kernel import kelvin_matrix
    r = _pairwise(np.asarray(target_xy, float), source)
    G = kelvin_matrix(KelvinKernel(phase), r) * source.weights[None, :, None, None]
    return _to_block(G)


def cross_traction(target_xy, target_normals, source: CurveNodes,
                   phase: ElasticPhase) -> np.ndarray:
    r = _pairwise(np.asarray(target_xy, float), source)
    nrm = np.broadcast_to(np.asarray(target_normals, float)[:, None, :], r.shape)
    T = traction_kernel(KelvinKernel(phase), r, nrm) * source.weights[None, :, None, None]
    return _to_block(T)


def _to_block(G: np.ndarray) -> np.ndarray:
    """(M, N, 2, 2) kernel array -> (2M, 2N) matrix in [x-block; y-block] layout."""
    return np.block([[G[:, :, 0, 0], G[:, :, 0, 1]],
                     [G[:, :, 1, 0], G[:, :, 1, 1]]])


def split(v: np.ndarray) -> np.ndarray:
    """[fx; fy] block vector -> (N, 2) array."""
    n = len(v) // 2
    return np.column_stack([v[:n], v[n:]])


def join(f: np.ndarray) -> np.ndarray:
    f = np.asarray(f, float)
    return np.concatenate([f[:, 0], f[:, 1]])


def resample_periodic(values: np.ndarray, m: int) -> np.ndarray:
    """Trigonometric interpolation of nodal values (N, ...) onto m >= N equispaced nodes."""
    values = np.asarray(values, float)
    n = values.shape[0]
    if m == n:
        return values.copy()
    if m < n or n % 2:
        raise ValueError("resampling needs an even source count and m >= N")
    coef = np.fft.fft(values, axis=0)
    out = np.zeros((m,) + values.shape[1:], complex)
    half = n // 2
    out[:half] = coef[:half]
    out[-half + 1:] = coef[-half + 1:]
    # split the Nyquist coefficient so the interpolant stays real
    out[half] = 0.5 * coef[half]
    out[-half] = 0.5 * coef[half]
    return np.real(np.fft.ifft(out, axis=0)) * (m / n)
