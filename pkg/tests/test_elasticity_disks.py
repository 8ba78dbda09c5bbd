import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from neutral_lame.core_model import (CoatedDisks, UniformLoad, ValidationError, kolosov_constant,
                                     neutrality_constants, phases_from_moduli, shell_dilatation)
from neutral_lame.elasticity_disks import (LaurentPotentials, PointOutsideRegion, displacement,
                                           displacement_field, far_field, random_annulus_points,
                                           solve_coated_disk_elasticity, stress_resultant,
                                           traction_differential, verify_core_linearity,
                                           verify_shell_properties)
from neutral_lame.kelvin_bem import TransmissionScenario, evaluate_field, solve_transmission

GEO = CoatedDisks(0.5, 2.0)


def potentials(phi: dict, psi: dict, mu=1.0, kappa=2.0, order=4, geometry=GEO):
    """Same phi, psi (power -> coefficient) in every region."""
    off = order + 2
    P = np.zeros((3, 2 * off + 1), complex)
    Q = np.zeros((3, 2 * off + 1), complex)
    for n, c in phi.items():
        P[:, n + off] = c
    for n, c in psi.items():
        Q[:, n + off] = c
    phases = phases_from_moduli([mu] * 3, [kappa] * 3)
    return LaurentPotentials(geometry, phases, UniformLoad.bulk(), order, P, Q)


def test_displacement_linear_potential_is_identity():
    for mu, kappa in [(1.0, 2.0), (0.3, 7.0), (5.0, 0.2)]:
        pot = potentials({1: kappa}, {}, mu, kappa)
        z = np.array([1.0 + 0.5j, -0.3 + 1.2j])
        np.testing.assert_allclose(displacement(pot, "shell", z), z, atol=1e-14)


def test_displacement_rigid_translation():
    c = 0.7 - 1.1j
    pot = potentials({}, {0: c}, mu=2.5)
    assert displacement(pot, "shell", 1.0 + 0.2j) == pytest.approx(-np.conj(c) / 5.0)


def test_displacement_hand_value():
    pot = potentials({2: 1.0}, {1: 1.0}, 1.0, 2.0)
    z = 1 + 1j
    # 2 z^2 - z conj(2 z) - conj(z), over 2
    expected = (2 * z**2 - z * np.conj(2 * z) - np.conj(z)) / 2
    assert expected == pytest.approx(-2.5 + 2.5j)
    assert displacement(pot, "shell", z) == pytest.approx(expected)


def test_point_outside_region():
    pot = potentials({1: 2.0}, {})
    with pytest.raises(PointOutsideRegion):
        displacement(pot, "core", 1.0)
    with pytest.raises(PointOutsideRegion):
        traction_differential(pot, "matrix", 1.0, 1.0)


def test_traction_differential_examples():
    km = 1.7
    pot = potentials({1: km}, {}, 1.0, km)
    for dz in (1.0, 1j, np.exp(0.3j)):
        assert traction_differential(pot, "shell", 1.0 + 0.2j, dz) == pytest.approx(2 * km * dz)
    pot = potentials({0: 3.0}, {0: -1j})
    assert traction_differential(pot, "shell", 1.0j, 1.0) == 0
    # phi = z^2, psi = z at z = i: (2i - 2i) + (i * conj(2) + 1) = 1 + 2i
    pot = potentials({2: 1.0}, {1: 1.0})
    assert traction_differential(pot, "shell", 1j, 1.0) == pytest.approx(1 + 2j)


@given(st.floats(0, 2 * np.pi), st.floats(0.6, 1.9), st.floats(0, 2 * np.pi))
def test_traction_differential_is_derivative_of_resultant(theta, r, direction):
    pot = potentials({2: 0.3 - 0.1j, -1: 0.2j, 1: 1.0}, {1: 0.5, -3: 0.1 + 0.4j})
    z = r * np.exp(1j * theta)
    dz = np.exp(1j * direction)
    h = 1e-6
    fd = (stress_resultant(pot, "shell", z + h * dz) - stress_resultant(pot, "shell", z - h * dz)) / (2 * h)
    assert abs(fd - traction_differential(pot, "shell", z, dz)) < 1e-7


@given(st.complex_numbers(max_magnitude=10), st.floats(0.1, 10), st.floats(0.1, 10))
def test_rigid_motion_gauge(c, mu, kappa):
    z = np.array([0.7 + 0.3j, -1.2 + 0.4j])
    base = potentials({1: 1.3, 2: 0.2j}, {-1: 0.4}, mu, kappa)
    k = kolosov_constant(base.phase("shell"))
    shifted = potentials({0: c, 1: 1.3, 2: 0.2j}, {0: k * np.conj(c), -1: 0.4}, mu, kappa)
    np.testing.assert_allclose(displacement(shifted, "shell", z), displacement(base, "shell", z),
                               atol=1e-12 * max(1.0, abs(c) * k / mu))


def test_homogeneous_bulk_is_exact():
    ph = phases_from_moduli([1.3] * 3, [0.8] * 3)
    pot = solve_coated_disk_elasticity(CoatedDisks(1.0, 2.0), ph, UniformLoad.bulk())
    for region in ("core", "shell", "matrix"):
        assert pot.a(region, 1) == pytest.approx(0.8, abs=1e-14)
    assert np.abs(pot.phi_coeffs).sum() == pytest.approx(3 * 0.8, abs=1e-13)
    assert np.abs(pot.psi_coeffs).max() < 1e-14
    z = np.array([0.5, 1.5j, 3.0 + 1.0j])
    np.testing.assert_allclose(displacement_field(pot, z), z, atol=1e-14)


def _nonzero_powers(pot, tol=1e-14):
    out = set()
    for kind, arr in (("a", pot.phi_coeffs), ("b", pot.psi_coeffs)):
        for n, col in zip(pot.powers(), arr.T):
            if np.abs(col).max() > tol:
                out.add((kind, int(n)))
    return out


def test_bulk_excites_only_first_harmonics(template):
    geo, ph = template
    pot = solve_coated_disk_elasticity(geo, ph, UniformLoad.bulk(), order=8)
    assert _nonzero_powers(pot) <= {("a", 1), ("b", -1)}


def test_shear_excites_only_first_and_third(template):
    geo, ph = template
    pot = solve_coated_disk_elasticity(geo, ph, UniformLoad.shear(), order=8)
    nz = _nonzero_powers(pot)
    assert all(abs(n) in (1, 3) for _, n in nz)
    assert ("b", -3) in nz and ("a", -1) in nz


def test_transmission_conditions(template):
    geo, ph = template
    for load in (UniformLoad.bulk(), UniformLoad.shear(), UniformLoad(((0.3, -0.2), (-0.2, 1.1)))):
        pot = solve_coated_disk_elasticity(geo, ph, load)
        t = 2 * np.pi * np.arange(64) / 64
        for inner, outer, r in (("core", "shell", geo.r1), ("shell", "matrix", geo.r2)):
            z = r * np.exp(1j * t)
            np.testing.assert_allclose(displacement(pot, inner, z), displacement(pot, outer, z),
                                       atol=1e-12)
            jump = stress_resultant(pot, inner, z) - stress_resultant(pot, outer, z)
            assert np.ptp(jump.real) < 1e-12 and np.ptp(jump.imag) < 1e-12


def test_far_field_homogeneous_gap_zero():
    ph = phases_from_moduli([1.0] * 3, [2.0] * 3)
    for load in (UniformLoad.bulk(), UniformLoad.shear()):
        rep = far_field(solve_coated_disk_elasticity(CoatedDisks(1.0, 2.0), ph, load))
        assert rep.gap < 1e-13 and abs(rep.c1) < 1e-14 and abs(rep.c3) < 1e-14


def test_far_field_generic_bulk_nonzero(template):
    geo, ph = template
    ph = phases_from_moduli([2.0, 1.0, 1.0], [1.0, 2.0, 3.0])
    rep = far_field(solve_coated_disk_elasticity(geo, ph, UniformLoad.bulk()), (5.0, 9.0))
    assert abs(rep.c1) > 1e-3 and rep.gap > 1e-3


def test_far_field_rejects_near_radii(template):
    geo, ph = template
    pot = solve_coated_disk_elasticity(geo, ph, UniformLoad.bulk())
    with pytest.raises(ValidationError):
        far_field(pot, (1.5, 4.0))


def test_solver_preconditions(template):
    geo, ph = template
    with pytest.raises(ValidationError):
        solve_coated_disk_elasticity(geo, ph, UniformLoad.bulk(), order=2)
    with pytest.raises(ValidationError):
        solve_coated_disk_elasticity(CoatedDisks(1.0, 2.0, (0.5, 0.0)), ph, UniformLoad.bulk())


def test_neutral_matrix_potentials(neutral_template):
    geo, ph = neutral_template
    pot = solve_coated_disk_elasticity(geo, ph, UniformLoad.bulk())
    km = ph.matrix.kappa
    P = pot.phi_coeffs[2].copy()
    P[pot.offset + 1] -= km
    assert np.abs(P).max() < 1e-10 and np.abs(pot.psi_coeffs[2]).max() < 1e-10
    assert far_field(pot).gap < 1e-10


def test_shell_properties_neutral(neutral_template):
    geo, ph = neutral_template
    pot = solve_coated_disk_elasticity(geo, ph, UniformLoad.bulk())
    rep = verify_shell_properties(pot, neutrality_constants(*ph), n_points=200, seed=1)
    assert rep.antisymmetry < 1e-10 and rep.laplacian < 1e-10
    # div u is constant in the shell; its value is the corrected dilatation
    assert np.ptp(rep.div_values) < 1e-10
    np.testing.assert_allclose(rep.div_values, shell_dilatation(ph.shell, ph.matrix), atol=1e-10)
    np.testing.assert_allclose(pot.a("shell", 1), shell_dilatation(ph.shell, ph.matrix) * ph.shell.kappa / 2,
                               atol=1e-10)


@pytest.mark.xfail(strict=True, reason="the closed form for the shell dilatation has the sign "
                   "of (kappa_m - kappa_s) reversed; see shell_dilatation")
def test_shell_dilatation_matches_alpha(neutral_template):
    geo, ph = neutral_template
    pot = solve_coated_disk_elasticity(geo, ph, UniformLoad.bulk())
    assert verify_shell_properties(pot, neutrality_constants(*ph)).div_residual < 1e-9


def test_shell_properties_homogeneous():
    ph = phases_from_moduli([1.0] * 3, [2.0] * 3)
    pot = solve_coated_disk_elasticity(CoatedDisks(1.0, 2.0), ph, UniformLoad.bulk())
    c = neutrality_constants(*ph)
    assert c.alpha == 2
    assert verify_shell_properties(pot, c).worst < 1e-14


def test_shell_divergence_nonconstant_off_root(template):
    geo, _ = template
    ph = phases_from_moduli([2.0, 1.0, 1.0], [1.0, 2.0, 3.0])
    pot = solve_coated_disk_elasticity(geo, ph, UniformLoad.bulk())
    rep = verify_shell_properties(pot, neutrality_constants(*ph))
    assert rep.div_residual > 0          # diagnostic only


def test_core_linearity(neutral_template):
    geo, ph = neutral_template
    pot = solve_coated_disk_elasticity(geo, ph, UniformLoad.bulk())
    rep = verify_core_linearity(pot, seed=3)
    assert rep.residual < 1e-10 and rep.coefficients_linear and rep.consistent
    ph0 = phases_from_moduli([1.0] * 3, [2.0] * 3)
    hom = verify_core_linearity(solve_coated_disk_elasticity(geo, ph0, UniformLoad.bulk()))
    assert hom.a == pytest.approx(1.0, abs=1e-14) and abs(hom.b) < 1e-14


def test_core_linear_for_any_concentric_bulk(template):
    # uniform loads on concentric disks leave the core field linear even off the root
    geo, ph = template
    rep = verify_core_linearity(solve_coated_disk_elasticity(geo, ph, UniformLoad.bulk()))
    assert rep.residual < 1e-12


def test_series_matches_bem():
    geo = CoatedDisks(0.8, 1.5)
    ph = phases_from_moduli([2.0, 0.7, 1.2], [1.0, 3.0, 2.5])
    load = UniformLoad(((1.0, 0.3), (0.3, -0.4)))
    pot = solve_coated_disk_elasticity(geo, ph, load)
    bem = solve_transmission(TransmissionScenario.from_disks(geo, ph, load, nodes=256))
    z = np.concatenate([random_annulus_points(1.6, 4.0, 50, 0),
                        random_annulus_points(0.85, 1.45, 50, 1)])
    u = evaluate_field(bem, z)
    ref = displacement_field(pot, z)
    err = np.abs(u[:, 0] + 1j * u[:, 1] - ref) / np.abs(ref)
    assert err.max() < 1e-6


@settings(max_examples=20, deadline=None)
@given(st.floats(0.2, 5), st.floats(0.2, 5), st.floats(0.2, 5), st.floats(0.2, 5),
       st.floats(0.1, 0.9))
def test_coefficient_read_matches_circle_fit(mus, kc, ks, km, rho):
    ph = phases_from_moduli([1.0, mus, 1.0], [kc, ks, km])
    for load in (UniformLoad.bulk(), UniformLoad.shear()):
        # far_field raises when the Laurent read and the circle fit disagree by > 1e-8
        far_field(solve_coated_disk_elasticity(CoatedDisks(rho, 1.0), ph, load))
