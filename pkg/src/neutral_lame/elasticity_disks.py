"""Coated-disk elasticity solved exactly with truncated Laurent series.

In every region the displacement is written through a pair of analytic
functions (Kolosov-Muskhelishvili potentials),

    U = u1 + i u2 = (k phi(z) - z conj(phi'(z)) - conj(psi(z))) / (2 mu),

and the traction continuity is continuity (up to a constant) of the stress
resultant  T = phi + z conj(phi') + conj(psi).  On a circle |z| = r the
coefficient a_n of phi feeds the angular modes n and 2 - n, the coefficient
b_n of psi feeds mode -n, so the transmission problem splits into small real
blocks labelled by m >= 1, holding the modes {m, 2 - m}.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core_model import (CoatedDisks, ElasticPhase, NeutralityConstants, Phases,
                         UniformLoad, ValidationError, kolosov_constant)

REGIONS = ("core", "shell", "matrix")


class SingularBlock(ArithmeticError):
    def __init__(self, harmonic: int, cond: float):
        super().__init__(f"harmonic block m={harmonic} is singular (cond={cond:.3g})")
        self.harmonic = harmonic


class PointOutsideRegion(ValueError):
    pass


@dataclass(frozen=True)
class LaurentPotentials:
    geometry: CoatedDisks
    phases: Phases
    load: UniformLoad
    order: int
    # rows: core, shell, matrix; column j holds the coefficient of z**(j - offset)
    phi_coeffs: np.ndarray = field(repr=False)
    psi_coeffs: np.ndarray = field(repr=False)

    @property
    def offset(self) -> int:
        return self.order + 2

    def powers(self) -> np.ndarray:
        return np.arange(self.phi_coeffs.shape[1]) - self.offset

    def a(self, region: str, n: int) -> complex:
        j = n + self.offset
        if not 0 <= j < self.phi_coeffs.shape[1]:
            return 0j
        return complex(self.phi_coeffs[REGIONS.index(region), j])

    def b(self, region: str, n: int) -> complex:
        j = n + self.offset
        if not 0 <= j < self.psi_coeffs.shape[1]:
            return 0j
        return complex(self.psi_coeffs[REGIONS.index(region), j])

    def phase(self, region: str) -> ElasticPhase:
        return getattr(self.phases, region)

    def region_of(self, z) -> np.ndarray:
        r = np.abs(np.asarray(z, complex))
        return np.where(r < self.geometry.r1, 0, np.where(r < self.geometry.r2, 1, 2))

    def _check(self, region: str, z, tol: float = 1e-9):
        r = np.abs(np.asarray(z, complex))
        r1, r2 = self.geometry.r1, self.geometry.r2
        lo, hi = {"core": (0.0, r1), "shell": (r1, r2), "matrix": (r2, np.inf)}[region]
        if np.any(r < lo * (1 - tol)) or np.any(r > hi * (1 + tol)):
            raise PointOutsideRegion(f"point(s) outside the {region} region")

    def _series(self, coeffs: np.ndarray, z: np.ndarray, deriv: int) -> np.ndarray:
        n = self.powers()
        out = np.zeros(z.shape, complex)
        for c, p in zip(coeffs, n):
            if c == 0:
                continue
            if deriv == 0:
                out += c * z**p
            elif deriv == 1:
                if p != 0:
                    out += c * p * z ** (p - 1)
            else:
                if p not in (0, 1):
                    out += c * p * (p - 1) * z ** (p - 2)
        return out

    def phi(self, region, z, deriv=0):
        z = np.asarray(z, complex)
        return self._series(self.phi_coeffs[REGIONS.index(region)], z, deriv)

    def psi(self, region, z, deriv=0):
        z = np.asarray(z, complex)
        return self._series(self.psi_coeffs[REGIONS.index(region)], z, deriv)


def displacement(pot: LaurentPotentials, region: str, z) -> np.ndarray:
    pot._check(region, z)
    z = np.asarray(z, complex)
    ph = pot.phase(region)
    k = kolosov_constant(ph)
    return (k * pot.phi(region, z) - z * np.conj(pot.phi(region, z, 1))
            - np.conj(pot.psi(region, z))) / (2 * ph.mu)


def displacement_field(pot: LaurentPotentials, z) -> np.ndarray:
    """U at arbitrary points, each evaluated with the potentials of its own region."""
    z = np.asarray(z, complex)
    reg = pot.region_of(z)
    out = np.empty(z.shape, complex)
    for i, name in enumerate(REGIONS):
        mask = reg == i
        if np.any(mask):
            out[mask] = displacement(pot, name, z[mask])
    return out


def traction_differential(pot: LaurentPotentials, region: str, z, dz) -> np.ndarray:
    """d(phi + z conj(phi') + conj(psi)) along the direction dz."""
    pot._check(region, z)
    z = np.asarray(z, complex)
    dz = np.asarray(dz, complex)
    d1 = pot.phi(region, z, 1)
    d2 = pot.phi(region, z, 2)
    return (d1 + np.conj(d1)) * dz + (z * np.conj(d2) + np.conj(pot.psi(region, z, 1))) * np.conj(dz)


def stress_resultant(pot: LaurentPotentials, region: str, z) -> np.ndarray:
    z = np.asarray(z, complex)
    return (pot.phi(region, z) + z * np.conj(pot.phi(region, z, 1))
            + np.conj(pot.psi(region, z)))


def displacement_gradient(pot: LaurentPotentials, region: str, z):
    """(dU/dz, dU/dzbar) computed from the series."""
    pot._check(region, z)
    z = np.asarray(z, complex)
    ph = pot.phase(region)
    k = kolosov_constant(ph)
    d1 = pot.phi(region, z, 1)
    d2 = pot.phi(region, z, 2)
    dU = (k * d1 - np.conj(d1)) / (2 * ph.mu)
    dUbar = -(z * np.conj(d2) + np.conj(pot.psi(region, z, 1))) / (2 * ph.mu)
    return dU, dUbar


# --- assembly -----------------------------------------------------------

def _allowed(region: str, kind: str, n: int, order: int) -> bool:
    if abs(n) > order:
        return False
    if region == "core":
        return n >= 0
    if region == "matrix":
        return n <= 1
    return True


def _pinned(region: str, kind: str, n: int) -> bool:
    # phi(0-th coefficient) is a rigid-motion gauge in every region; in the
    # matrix the z-terms carry the load and psi's constant must vanish for decay
    if kind == "a" and n == 0:
        return True
    if region == "matrix" and n == 1:
        return True
    if region == "matrix" and kind == "b" and n == 0:
        return True
    return False


def _contributions(kind: str, n: int, r: float, mu: float, k: float):
    """Yield (mode, U_lin, U_conj, T_lin, T_conj) for a unit coefficient."""
    rn = r**n
    if kind == "a":
        yield n, k * rn / (2 * mu), 0.0, rn, 0.0
        yield 2 - n, 0.0, -n * rn / (2 * mu), 0.0, n * rn
    else:
        yield -n, 0.0, -rn / (2 * mu), 0.0, rn


def _block_unknowns(m: int, order: int):
    cands = [("a", m), ("a", 2 - m), ("b", -m), ("b", m - 2)]
    seen = []
    for c in cands:
        if c not in seen:
            seen.append(c)
    unknowns, knowns = [], []
    for region in REGIONS:
        for kind, n in seen:
            if not _allowed(region, kind, n, order):
                continue
            (knowns if _pinned(region, kind, n) else unknowns).append((region, kind, n))
    return unknowns, knowns


def _load_value(region: str, kind: str, n: int, phases: Phases, load: UniformLoad) -> complex:
    if region != "matrix" or n != 1:
        return 0j
    p, q = load.complex_coefficients()
    if kind == "a":
        return complex(phases.matrix.kappa * p)
    return complex(-2 * phases.matrix.mu * np.conj(q))


def _solve_block(m, order, geometry, phases, load):
    unknowns, knowns = _block_unknowns(m, order)
    modes = sorted({m, 2 - m})
    interfaces = (("core", "shell", geometry.r1), ("shell", "matrix", geometry.r2))
    eqs = []
    for i, (_, _, _) in enumerate(interfaces):
        for mode in modes:
            eqs.append((i, "U", mode))
            if mode != 0:
                # T is continuous only up to a constant: its mean mode is free
                eqs.append((i, "T", mode))
    row_of = {e: j for j, e in enumerate(eqs)}
    nrow = 2 * len(eqs)

    def column(region, kind, n):
        # complex responses to a unit real part and a unit imaginary part
        col_re = np.zeros(len(eqs), complex)
        col_im = np.zeros(len(eqs), complex)
        ph = getattr(phases, region)
        k = kolosov_constant(ph)
        for i, (inner, outer, r) in enumerate(interfaces):
            if region not in (inner, outer):
                continue
            sign = 1.0 if region == inner else -1.0
            for mode, ul, uc, tl, tc in _contributions(kind, n, r, ph.mu, k):
                for tag, lin, cj in (("U", ul, uc), ("T", tl, tc)):
                    j = row_of.get((i, tag, mode))
                    if j is None:
                        continue
                    col_re[j] += sign * (lin + cj)
                    col_im[j] += sign * (1j * lin - 1j * cj)
        return col_re, col_im

    M = np.zeros((nrow, 2 * len(unknowns)))
    for j, u in enumerate(unknowns):
        cr, ci = column(*u)
        M[:, 2 * j] = np.concatenate([cr.real, cr.imag])
        M[:, 2 * j + 1] = np.concatenate([ci.real, ci.imag])
    rhs = np.zeros(nrow)
    for kn in knowns:
        val = _load_value(*kn, phases, load)
        if val == 0:
            continue
        cr, ci = column(*kn)
        resp = val.real * cr + val.imag * ci
        rhs -= np.concatenate([resp.real, resp.imag])
    if M.shape[0] != M.shape[1]:
        raise AssertionError(f"block {m} is not square: {M.shape}")
    if not np.any(rhs):
        return unknowns, np.zeros(len(unknowns), complex), M
    scale = np.linalg.norm(M, axis=0)
    scale[scale == 0] = 1.0
    Ms = M / scale
    cond = np.linalg.cond(Ms)
    if not np.isfinite(cond) or cond > 1e13:
        raise SingularBlock(m, cond)
    x = np.linalg.solve(Ms, rhs) / scale
    return unknowns, x[0::2] + 1j * x[1::2], M


def solve_coated_disk_elasticity(geometry: CoatedDisks, phases: Phases,
                                 load: UniformLoad, order: int = 8) -> LaurentPotentials:
    if order < 3:
        raise ValidationError("series order must be at least 3")
    if geometry.center != (0.0, 0.0):
        raise ValidationError("the series solver requires disks centred at the origin")
    width = 2 * (order + 2) + 1
    phi = np.zeros((3, width), complex)
    psi = np.zeros((3, width), complex)
    off = order + 2
    for m in range(1, order + 1):
        unknowns, values, _ = _solve_block(m, order, geometry, phases, load)
        _, knowns = _block_unknowns(m, order)
        for (region, kind, n), v in zip(unknowns, values):
            (phi if kind == "a" else psi)[REGIONS.index(region), n + off] = v
        for region, kind, n in knowns:
            (phi if kind == "a" else psi)[REGIONS.index(region), n + off] = \
                _load_value(region, kind, n, phases, load)
    return LaurentPotentials(geometry, phases, load, order, phi, psi)


def block_matrix(geometry, phases, load, m: int, order: int = 8) -> np.ndarray:
    """Real transmission matrix of harmonic block m (for diagnostics)."""
    return _solve_block(m, order, geometry, phases, load)[2]


# --- far field ----------------------------------------------------------

@dataclass(frozen=True)
class FarFieldReport:
    c1: complex
    c3: complex
    gap: float
    relative_gap: float
    radius: float
    # order j -> {angular mode: coefficient of r**-j exp(i mode t)}
    modes: dict = field(default_factory=dict, repr=False)


def _dominant(coeffs: dict) -> complex:
    if not coeffs:
        return 0j
    best = max(sorted(coeffs), key=lambda mode: abs(coeffs[mode]))
    return complex(coeffs[best])


def perturbation_modes(pot: LaurentPotentials, max_order: int | None = None) -> dict:
    """Angular structure of U - h in the matrix, read from the Laurent coefficients."""
    mu = pot.phases.matrix.mu
    k = kolosov_constant(pot.phases.matrix)
    max_order = pot.order if max_order is None else max_order
    out = {}
    for j in range(1, max_order + 1):
        a = pot.a("matrix", -j)
        b = pot.b("matrix", -j)
        modes = {}
        for mode, val in ((-j, k * a / (2 * mu)), (2 + j, j * np.conj(a) / (2 * mu)),
                          (j, -np.conj(b) / (2 * mu))):
            modes[mode] = modes.get(mode, 0j) + val
        out[j] = {md: v for md, v in modes.items() if v != 0}
    return out


def circle_fit_modes(sample, radii, orders=(1, 3), n_points: int = 256) -> dict:
    """Fit U - h sampled on two circles to c_j r**-j per angular mode.

    ``sample(z)`` returns U - h. For every angular mode the admissible decay
    orders are those produced by phi and psi terms (mode -j, j + 2 and j for
    order j); only orders listed in ``orders`` are fitted.
    """
    t = 2 * np.pi * np.arange(n_points) / n_points
    spectra = []
    for R in radii:
        vals = sample(R * np.exp(1j * t))
        spectra.append(np.fft.fft(vals) / n_points)
    freqs = np.fft.fftfreq(n_points, 1.0 / n_points).astype(int)
    fitted = {j: {} for j in orders}
    for idx, mode in enumerate(freqs):
        admissible = [j for j in orders if mode in (-j, j + 2, j)]
        if not admissible:
            continue
        A = np.array([[R ** (-j) for j in admissible] for R in radii], complex)
        y = np.array([s[idx] for s in spectra])
        coef = np.linalg.lstsq(A, y, rcond=None)[0]
        for j, c in zip(admissible, coef):
            fitted[j][int(mode)] = complex(c)
    return fitted


def far_field(pot: LaurentPotentials, measurement_radii=None, n_points: int = 256,
              consistency_tol: float = 1e-8) -> FarFieldReport:
    r2 = pot.geometry.r2
    if measurement_radii is None:
        measurement_radii = (2 * r2, 4 * r2)
    radii = tuple(sorted(float(R) for R in measurement_radii))
    if len(radii) != 2 or radii[0] <= r2:
        raise ValidationError("need two measurement radii larger than r2")
    read = perturbation_modes(pot)

    def sample(z):
        return displacement(pot, "matrix", z) - pot.load(z)

    # only orders 1 and 3 are excited by uniform loads on concentric disks
    fitted = circle_fit_modes(sample, radii, orders=(1, 3), n_points=n_points)
    scale = max(1e-300, max((abs(v) for j in (1, 3) for v in read.get(j, {}).values()),
                            default=0.0), abs(pot.load(radii[1])) * radii[1] ** -1 * 1e-6)
    for j in (1, 3):
        for mode in set(read.get(j, {})) | set(fitted[j]):
            diff = abs(read.get(j, {}).get(mode, 0j) - fitted[j].get(mode, 0j))
            if diff > consistency_tol * max(scale, 1.0):
                raise ArithmeticError(
                    f"far-field coefficient read and circle fit disagree at order {j}, "
                    f"mode {mode}: {diff:.3e}")
    g, rel = circle_gap(sample, radii[1], pot.load, n_points)
    return FarFieldReport(_dominant(read.get(1, {})), _dominant(read.get(3, {})),
                          g, rel, radii[1], read)


def circle_gap(sample, radius: float, load: UniformLoad, n_points: int = 256):
    """L2 norm of U - h over a circle, and the same normalised by the norm of h."""
    t = 2 * np.pi * np.arange(n_points) / n_points
    z = radius * np.exp(1j * t)
    w = 2 * np.pi * radius / n_points
    gap = float(np.sqrt(w * np.sum(np.abs(sample(z)) ** 2)))
    ref = float(np.sqrt(w * np.sum(np.abs(load(z)) ** 2)))
    return gap, gap / ref if ref > 0 else gap


def exterior_bulk_coefficient(pot: LaurentPotentials) -> float:
    """Real coefficient of the r**-1 mode-1 perturbation: conj(b_-1) for bulk loads."""
    return float(-pot.b("matrix", -1).real / (2 * pot.phases.matrix.mu))


# --- checks tied to the neutrality theory -------------------------------

def random_annulus_points(r_in: float, r_out: float, n: int, seed: int,
                          margin: float = 0.0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    lo, hi = r_in * (1 + margin), r_out * (1 - margin)
    r = np.sqrt(rng.uniform(lo**2, hi**2, n))
    t = rng.uniform(0, 2 * np.pi, n)
    return r * np.exp(1j * t)


@dataclass(frozen=True)
class ShellReport:
    div_residual: float        # max |div u - alpha|
    antisymmetry: float        # max Frobenius norm of the skew part of grad u
    laplacian: float           # max |Laplacian u|
    beta_residual: float       # max |phi_s' - beta|
    div_values: np.ndarray = field(repr=False, default=None)

    @property
    def worst(self) -> float:
        return max(self.div_residual, self.antisymmetry, self.laplacian, self.beta_residual)


def verify_shell_properties(pot: LaurentPotentials, constants: NeutralityConstants,
                            sample_points=None, n_points: int = 200,
                            seed: int = 0) -> ShellReport:
    if sample_points is None:
        sample_points = random_annulus_points(pot.geometry.r1, pot.geometry.r2,
                                              n_points, seed, margin=1e-6)
    z = np.asarray(sample_points, complex)
    dU, _ = displacement_gradient(pot, "shell", z)
    div = 2 * dU.real
    rot = 2 * dU.imag
    mu = pot.phases.shell.mu
    lap = 2.0 / mu * np.abs(pot.phi("shell", z, 2))
    dphi = pot.phi("shell", z, 1)
    return ShellReport(float(np.max(np.abs(div - constants.alpha))),
                       float(np.max(np.abs(rot)) / np.sqrt(2)),
                       float(np.max(lap)),
                       float(np.max(np.abs(dphi - constants.beta))),
                       div)


@dataclass(frozen=True)
class CoreLinearity:
    a: float
    b: complex
    residual: float
    coefficients_linear: bool
    predicted_a: complex

    @property
    def consistent(self) -> bool:
        return abs(self.a - self.predicted_a) <= 1e-9 * max(1.0, abs(self.a))


def verify_core_linearity(pot: LaurentPotentials, n_points: int = 200, seed: int = 0,
                          coeff_tol: float = 1e-10) -> CoreLinearity:
    z = random_annulus_points(0.0, pot.geometry.r1, n_points, seed, margin=1e-6)
    U = displacement(pot, "core", z)
    # U = a z + b with a real: columns for a, Re b, Im b
    A = np.zeros((2 * n_points, 3))
    A[:n_points, 0] = z.real
    A[n_points:, 0] = z.imag
    A[:n_points, 1] = 1.0
    A[n_points:, 2] = 1.0
    y = np.concatenate([U.real, U.imag])
    sol = np.linalg.lstsq(A, y, rcond=None)[0]
    resid = np.abs(U - (sol[0] * z + sol[1] + 1j * sol[2]))
    powers = pot.powers()
    phi_c = pot.phi_coeffs[0]
    psi_c = pot.psi_coeffs[0]
    scale = max(1.0, np.abs(phi_c).max())
    linear = bool(np.all(np.abs(phi_c[powers >= 2]) < coeff_tol * scale)
                  and np.all(np.abs(psi_c[powers >= 1]) < coeff_tol * scale))
    ph = pot.phases.core
    a1 = pot.a("core", 1)
    predicted = (kolosov_constant(ph) * a1 - np.conj(a1)) / (2 * ph.mu)
    return CoreLinearity(float(sol[0]), complex(sol[1], sol[2]),
                         float(resid.max()), linear, complex(predicted))


def etaone_trace(pot: LaurentPotentials, nodes_z: np.ndarray) -> np.ndarray:
    """z conj(phi_c') + conj(psi_c) sampled on the core boundary."""
    z = np.asarray(nodes_z, complex)
    return z * np.conj(pot.phi("core", z, 1)) + np.conj(pot.psi("core", z))
